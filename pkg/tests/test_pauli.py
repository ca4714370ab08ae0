"""Pauli arithmetic: parsing, products, commutators, Clifford conjugation."""

from __future__ import annotations

import random
from itertools import product

import numpy as np
import pytest

from paulilie.errors import DuplicateQubitError, PauliParseError, WidthError
from paulilie.pauli import (
    PauliString,
    apply_clifford_generator,
    commutator_pauli,
    commutes,
    format_pauli,
    is_antisymmetric,
    multiply,
    parse_pauli,
    phase_free_key,
)

from conftest import dense_matrix, random_pauli


class TestParse:
    def test_dense_encoding(self):
        p = parse_pauli("XIZY")
        assert (p.x_bits, p.z_bits, p.phase_exp) == (0b1001, 0b1100, 0)

    def test_sparse_with_width(self):
        p = parse_pauli("Z1 X3 Z4", n_qubits=5)
        assert (p.x_bits, p.z_bits, p.phase_exp) == (0b01000, 0b10010, 0)

    def test_invalid_letter_names_column(self):
        with pytest.raises(PauliParseError) as err:
            parse_pauli("Q0")
        assert err.value.column == 1

    def test_invalid_dense_letter_column(self):
        with pytest.raises(PauliParseError) as err:
            parse_pauli("XIW")
        assert err.value.column == 3

    def test_sign_prefixes(self):
        assert parse_pauli("+X").phase_exp == 0
        assert parse_pauli("-X").phase_exp == 2
        assert parse_pauli("+i X0").phase_exp == 1
        assert parse_pauli("-iZ").phase_exp == 3

    def test_duplicate_sparse_index(self):
        with pytest.raises(DuplicateQubitError):
            parse_pauli("X0 Z0")

    def test_sparse_index_beyond_width(self):
        with pytest.raises(WidthError):
            parse_pauli("X5", n_qubits=3)

    def test_dense_longer_than_width(self):
        with pytest.raises(WidthError):
            parse_pauli("XXXX", n_qubits=3)

    def test_padding(self):
        assert parse_pauli("X", n_qubits=4).n_qubits == 4

    @pytest.mark.parametrize("text", ["XIZY", "-XYZ", "Z1 X3 Z4", "-i Y0 Y2", "III"])
    def test_round_trip(self, text):
        p = parse_pauli(text)
        for style in ("dense", "sparse"):
            again = parse_pauli(format_pauli(p, style), n_qubits=p.n_qubits)
            assert again == p


class TestFormat:
    def test_dense(self):
        assert format_pauli(PauliString(4, 0b1001, 0b1100, 0)) == "XIZY"

    def test_identity_dense(self):
        assert format_pauli(PauliString(3, 0, 0, 0)) == "III"

    def test_sparse(self):
        p = PauliString(5, 0b01010, 0b10010, 0)
        assert format_pauli(p, "sparse") == "Y1 X3 Z4"


class TestProducts:
    def test_x_times_z_is_minus_i_y(self):
        x, z = parse_pauli("X"), parse_pauli("Z")
        assert multiply(x, z) == PauliString(1, 1, 1, 3)

    def test_square_is_identity(self, rng):
        for _ in range(50):
            p = random_pauli(rng, 4)
            p = PauliString(p.n_qubits, p.x_bits, p.z_bits, 0)
            assert multiply(p, p) == PauliString(4, 0, 0, 0)

    def test_fig_style_product(self):
        p = parse_pauli("X1 X3", n_qubits=4)
        q = parse_pauli("Y1 X2", n_qubits=4)
        assert phase_free_key(multiply(p, q)) == parse_pauli("Z1 X2 X3", n_qubits=4).key()

    def test_associative_with_phases(self, rng):
        for _ in range(200):
            a, b, c = (random_pauli(rng, 3, allow_identity=True) for _ in range(3))
            assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))

    def test_matches_dense_matrices(self, rng):
        for _ in range(100):
            a, b = (random_pauli(rng, 2, allow_identity=True) for _ in range(2))
            np.testing.assert_allclose(
                dense_matrix(multiply(a, b)), dense_matrix(a) @ dense_matrix(b), atol=1e-12
            )


class TestCommutation:
    def test_single_qubit_pair(self):
        assert not commutes(parse_pauli("X"), parse_pauli("Z"))

    def test_two_anticommuting_positions_cancel(self):
        assert commutes(parse_pauli("XX"), parse_pauli("ZZ"))

    def test_fig_contraction_pair_anticommutes(self):
        assert not commutes(parse_pauli("X1 X3", n_qubits=4), parse_pauli("Y1 X2", n_qubits=4))

    def test_symmetry_and_reflexivity(self, rng):
        for _ in range(100):
            p, q = random_pauli(rng, 3), random_pauli(rng, 3)
            assert commutes(p, q) == commutes(q, p)
            assert commutes(p, p)

    def test_width_mismatch(self):
        with pytest.raises(WidthError):
            commutes(parse_pauli("X"), parse_pauli("XX"))


class TestCommutator:
    def test_x_z_gives_y(self):
        r = commutator_pauli(parse_pauli("X"), parse_pauli("Z"))
        assert r is not None and r.key() == parse_pauli("Y").key()

    def test_disjoint_supports(self):
        assert commutator_pauli(parse_pauli("XI"), parse_pauli("IX")) is None

    def test_present_iff_anticommuting_and_key_matches_product(self, rng):
        for _ in range(200):
            p, q = random_pauli(rng, 4), random_pauli(rng, 4)
            r = commutator_pauli(p, q)
            assert (r is not None) == (not commutes(p, q))
            if r is not None:
                assert r.key() == multiply(p, q).key()

    def test_double_contraction_restores(self, rng):
        restored = 0
        for _ in range(300):
            p, q = random_pauli(rng, 4), random_pauli(rng, 4)
            r = commutator_pauli(p, q)
            if r is None:
                continue
            back = commutator_pauli(r, q)
            assert back is not None and back.key() == p.key()
            restored += 1
        assert restored > 50

    def test_exact_commutator_matrix(self, rng):
        for _ in range(100):
            p, q = random_pauli(rng, 2), random_pauli(rng, 2)
            r = commutator_pauli(p, q)
            if r is None:
                continue
            mp, mq = dense_matrix(p), dense_matrix(q)
            np.testing.assert_allclose(
                dense_matrix(r), 0.5j * (mp @ mq - mq @ mp), atol=1e-12
            )


class TestAntisymmetry:
    @pytest.mark.parametrize(
        "text,expected", [("Y", True), ("XZ", False), ("YYY", True), ("XY", True)]
    )
    def test_examples(self, text, expected):
        assert is_antisymmetric(parse_pauli(text)) is expected

    def test_against_dense_transpose_all_two_qubit(self):
        for xa, za, xb, zb in product(range(2), repeat=4):
            p = PauliString(2, xa | (xb << 1), za | (zb << 1), 0)
            if p.is_identity():
                continue
            m = dense_matrix(p)
            assert is_antisymmetric(p) == np.allclose(m.T, -m)

    def test_product_rule_brute_force(self):
        # antisym(PQ) = antisym(P) xor antisym(Q) xor (P,Q anti-commute)
        singles = [
            PauliString(2, x, z, 0) for x in range(4) for z in range(4)
        ]
        for p in singles:
            for q in singles:
                prod = multiply(p, q)
                m = dense_matrix(prod)
                lhs = np.allclose(m.T, -m)
                rhs = is_antisymmetric(p) ^ is_antisymmetric(q) ^ (not commutes(p, q))
                assert lhs == rhs


class TestClifford:
    def test_h_maps_x_to_z(self):
        assert apply_clifford_generator(parse_pauli("X"), ("H", 0)) == parse_pauli("Z")

    def test_s_maps_x_to_y(self):
        out = apply_clifford_generator(parse_pauli("X"), ("S", 0))
        assert out.key() == parse_pauli("Y").key()

    def test_cnot_propagates_control_x(self):
        out = apply_clifford_generator(parse_pauli("XI"), ("CNOT", 0, 1))
        assert out == parse_pauli("XX")

    def test_out_of_range(self):
        with pytest.raises(WidthError):
            apply_clifford_generator(parse_pauli("X"), ("H", 3))

    @pytest.mark.parametrize(
        "gate,unitary",
        [
            (("H", 0), np.array([[1, 1], [1, -1]]) / np.sqrt(2)),
            (("S", 0), np.diag([1, 1j])),
        ],
    )
    def test_single_qubit_gates_exact(self, gate, unitary):
        for x, z, ph in product(range(2), range(2), range(4)):
            p = PauliString(1, x, z, ph)
            out = apply_clifford_generator(p, gate)
            np.testing.assert_allclose(
                dense_matrix(out), unitary @ dense_matrix(p) @ unitary.conj().T, atol=1e-12
            )

    def test_cnot_exact_all_two_qubit(self):
        cnot = np.array(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
        )
        # qubit 0 is the leftmost tensor factor, so this matrix is CNOT(0, 1)
        for xa, za, xb, zb, ph in product(range(2), repeat=5):
            p = PauliString(2, xa | (xb << 1), za | (zb << 1), ph)
            out = apply_clifford_generator(p, ("CNOT", 0, 1))
            np.testing.assert_allclose(
                dense_matrix(out), cnot @ dense_matrix(p) @ cnot, atol=1e-12
            )

    def test_preserves_commutation(self, rng):
        gates = [("H", 0), ("S", 1), ("CNOT", 0, 2), ("CNOT", 2, 1), ("S", 0)]
        for _ in range(100):
            p, q = random_pauli(rng, 3), random_pauli(rng, 3)
            g = gates[rng.randrange(len(gates))]
            assert commutes(p, q) == commutes(
                apply_clifford_generator(p, g), apply_clifford_generator(q, g)
            )
