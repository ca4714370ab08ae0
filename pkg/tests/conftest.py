"""Shared helpers: seeded random Pauli generation and dense-matrix oracles."""

from __future__ import annotations

import random

import numpy as np
import pytest

from paulilie.pauli import PauliString

I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
Y2 = 1j * X2 @ Z2  # the package-wide convention Y = i X Z

_LETTER_MATRIX = {"I": I2, "X": X2, "Y": Y2, "Z": Z2}


def dense_matrix(p: PauliString) -> np.ndarray:
    """Exact dense matrix of a Pauli string, phase included."""
    out = np.array([[1.0 + 0j]])
    for q in range(p.n_qubits):
        out = np.kron(out, _LETTER_MATRIX[p.letter(q)])
    return (1j ** p.phase_exp) * out


def random_pauli(rng: random.Random, n_qubits: int, allow_identity: bool = False) -> PauliString:
    while True:
        x = rng.getrandbits(n_qubits)
        z = rng.getrandbits(n_qubits)
        if allow_identity or x or z:
            return PauliString(n_qubits, x, z, rng.randrange(4))


def random_generators(
    rng: random.Random, max_qubits: int = 5, max_generators: int = 8
) -> list[PauliString]:
    n_qubits = rng.randint(1, max_qubits)
    count = rng.randint(1, max_generators)
    return [random_pauli(rng, n_qubits) for _ in range(count)]


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
