"""GF(2) rank, reduction and kernel computation."""

from __future__ import annotations

import random

from paulilie.gf2 import BitMatrix, kernel_basis, rank, row_reduce, solve
from paulilie.pauli import PauliString, multiply, parse_pauli


def symplectic_columns(paulis) -> BitMatrix:
    """Matrix whose column j stacks (x_bits, z_bits) of generator j."""
    n = paulis[0].n_qubits
    rows = []
    for bit in range(n):
        rows.append(sum(((p.x_bits >> bit) & 1) << j for j, p in enumerate(paulis)))
    for bit in range(n):
        rows.append(sum(((p.z_bits >> bit) & 1) << j for j, p in enumerate(paulis)))
    return BitMatrix.from_rows(rows, len(paulis))


def test_rank_zero_matrix():
    assert rank(BitMatrix.from_rows([0, 0, 0], 4)) == 0


def test_rank_identity():
    assert rank(BitMatrix.from_rows([1, 2, 4, 8], 4)) == 4


def test_rank_dependent_rows():
    # third row is the sum of the first two: {1100, 0110, 1010}
    assert rank(BitMatrix.from_rows([0b0011, 0b0110, 0b0101], 4)) == 2


def test_row_reduce_elimination():
    reduced, pivots = row_reduce(BitMatrix.from_rows([0b11, 0b10], 2))
    assert reduced.rows == (0b01, 0b10)
    assert pivots == [0, 1]


def test_row_reduce_idempotent(rng):
    for _ in range(50):
        m = BitMatrix.from_rows([rng.getrandbits(6) for _ in range(4)], 6)
        once, pivots = row_reduce(m)
        twice, pivots2 = row_reduce(once)
        assert once == twice and pivots == pivots2


def test_kernel_of_z_chain():
    paulis = [parse_pauli(t, n_qubits=2) for t in ("ZI", "ZZ", "IZ")]
    basis = kernel_basis(symplectic_columns(paulis))
    assert basis == [0b111]


def test_empty_kernel_for_independent_pair():
    paulis = [parse_pauli("X"), parse_pauli("Z")]
    assert kernel_basis(symplectic_columns(paulis)) == []


def test_majorana_parity_kernel():
    # 2n Jordan-Wigner strings plus their full product, n = 2
    gens = [parse_pauli(t, n_qubits=2) for t in ("XI", "YI", "ZX", "ZY")]
    parity = gens[0]
    for g in gens[1:]:
        parity = multiply(parity, g)
    gens.append(parity)
    basis = kernel_basis(symplectic_columns(gens))
    assert len(basis) == 1 and basis[0].bit_count() == 5


def test_rank_nullity(rng):
    for _ in range(100):
        n_rows, n_cols = rng.randint(1, 6), rng.randint(1, 7)
        m = BitMatrix.from_rows(
            [rng.getrandbits(n_cols) for _ in range(n_rows)], n_cols
        )
        assert rank(m) + len(kernel_basis(m)) == n_cols


def test_kernel_vectors_multiply_to_identity(rng):
    for _ in range(50):
        n = rng.randint(1, 4)
        paulis = [
            PauliString(n, rng.getrandbits(n), rng.getrandbits(n), 0) for _ in range(6)
        ]
        m = symplectic_columns(paulis)
        for v in kernel_basis(m):
            acc = PauliString(n, 0, 0, 0)
            for j in range(6):
                if (v >> j) & 1:
                    acc = multiply(acc, paulis[j])
            assert acc.key() == 0


def test_solve_consistent_and_inconsistent():
    m = BitMatrix.from_rows([0b011, 0b110], 3)
    x = solve(m, 0b11)
    assert x is not None
    for i, row in enumerate(m.rows):
        assert (row & x).bit_count() % 2 == (0b11 >> i) & 1
    unsolvable = BitMatrix.from_rows([0b1, 0b1], 1)
    assert solve(unsolvable, 0b01) is None


def test_wide_matrix_bit_packing():
    # column counts well past one machine word
    cols = 4096
    m = BitMatrix.from_rows([1 << i for i in (0, 63, 64, 4095)], cols)
    assert rank(m) == 4
    assert len(kernel_basis(m)) == cols - 4
