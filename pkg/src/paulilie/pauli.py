"""Exact Pauli-string arithmetic over the GF(2) symplectic representation.

A Pauli string is stored as two bit vectors packed into Python integers
(bit q addresses qubit q) plus a global phase exponent k, the operator
being i**k times the tensor product of Hermitian letters I, X, Y, Z.
The single phase convention used everywhere is Y = i*X*Z; every sign in
the package derives from it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DuplicateQubitError, PauliParseError, WidthError

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}
_PHASE_PREFIX = {0: "", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"+i": 1, "-i": 3, "+": 0, "-": 2, "i": 1}
_SPARSE_TOKEN = re.compile(r"([IXYZ])(\d+)\Z")


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli operator i**phase_exp * W_0 (x) ... (x) W_{n-1}."""

    n_qubits: int
    x_bits: int
    z_bits: int
    phase_exp: int = 0

    def __post_init__(self):
        mask = (1 << self.n_qubits) - 1
        if self.n_qubits < 0:
            raise ValueError("negative qubit count")
        if self.x_bits & ~mask or self.z_bits & ~mask:
            raise ValueError("bit vector wider than n_qubits")
        if not 0 <= self.phase_exp <= 3:
            raise ValueError("phase exponent must be in {0,1,2,3}")

    def key(self) -> int:
        """Phase-free identity of this Pauli; see :func:`phase_free_key`."""
        return (self.x_bits << self.n_qubits) | self.z_bits

    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        return (self.x_bits | self.z_bits).bit_count()

    def letter(self, q: int) -> str:
        return _BITS_LETTER[((self.x_bits >> q) & 1, (self.z_bits >> q) & 1)]

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def __str__(self) -> str:
        return format_pauli(self, "dense")


def pauli_from_key(n_qubits: int, key: int) -> PauliString:
    """Rebuild the phase-free representative from a :func:`phase_free_key` value."""
    mask = (1 << n_qubits) - 1
    return PauliString(n_qubits, key >> n_qubits, key & mask, 0)


def phase_free_key(p: PauliString) -> int:
    """Concatenated (x_bits, z_bits) as a single integer; drops the phase."""
    return p.key()


def _check_widths(p: PauliString, q: PauliString) -> None:
    if p.n_qubits != q.n_qubits:
        raise WidthError(
            f"width mismatch: {p.n_qubits} vs {q.n_qubits} qubits"
        )


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Operator product p*q with exact phase under the Y = i*X*Z convention.

    Writing each letter as W(x,z) = i**(x*z) X**x Z**z, the per-qubit phase of
    the product collects x1*z1 + x2*z2 + 2*z1*x2 - x3*z3 (mod 4).
    """
    _check_widths(p, q)
    x = p.x_bits ^ q.x_bits
    z = p.z_bits ^ q.z_bits
    phase = (
        p.phase_exp
        + q.phase_exp
        + (p.x_bits & p.z_bits).bit_count()
        + (q.x_bits & q.z_bits).bit_count()
        + 2 * (p.z_bits & q.x_bits).bit_count()
        - (x & z).bit_count()
    ) % 4
    return PauliString(p.n_qubits, x, z, phase)


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the symplectic form <x_p,z_q> + <z_p,x_q> vanishes mod 2."""
    _check_widths(p, q)
    return (
        (p.x_bits & q.z_bits).bit_count() + (p.z_bits & q.x_bits).bit_count()
    ) % 2 == 0


def commutator_pauli(p: PauliString, q: PauliString) -> PauliString | None:
    """(i/2)[p, q] as a single Pauli, or None when p and q commute.

    For anti-commuting Paulis [p, q] = 2 p q, so the result is exactly i*p*q.
    """
    if commutes(p, q):
        return None
    prod = multiply(p, q)
    return PauliString(prod.n_qubits, prod.x_bits, prod.z_bits, (prod.phase_exp + 1) % 4)


def is_antisymmetric(p: PauliString) -> bool:
    """True iff the phase-free Hermitian representative satisfies P^T = -P.

    Each Y factor is anti-symmetric and X, Z, I are symmetric, so the test is
    an odd count of positions with both bits set.
    """
    return (p.x_bits & p.z_bits).bit_count() % 2 == 1


def apply_clifford_generator(p: PauliString, gate: tuple) -> PauliString:
    """Conjugate p by H q, S q or CNOT c t, with exact phase tracking.

    ``gate`` is ("H", q), ("S", q) or ("CNOT", c, t).
    """
    name = gate[0].upper()
    n, x, z, phase = p.n_qubits, p.x_bits, p.z_bits, p.phase_exp
    if name in ("H", "S"):
        (q,) = gate[1:]
        if not 0 <= q < n:
            raise WidthError(f"qubit index {q} out of range for width {n}")
        bit = 1 << q
        xq, zq = x & bit, z & bit
        if name == "H":
            # X <-> Z, Y -> -Y
            x = (x & ~bit) | zq
            z = (z & ~bit) | xq
            if xq and zq:
                phase = (phase + 2) % 4
        else:
            # X -> Y, Y -> -X, Z -> Z
            if xq and zq:
                phase = (phase + 2) % 4
            z ^= xq
    elif name == "CNOT":
        c, t = gate[1:]
        if c == t:
            raise ValueError("CNOT control equals target")
        for q in (c, t):
            if not 0 <= q < n:
                raise WidthError(f"qubit index {q} out of range for width {n}")
        xc, zc = (x >> c) & 1, (z >> c) & 1
        xt, zt = (x >> t) & 1, (z >> t) & 1
        if xc & zt & (xt ^ zc ^ 1):
            phase = (phase + 2) % 4
        x ^= xc << t
        z ^= zt << c
    else:
        raise ValueError(f"unknown Clifford generator {gate[0]!r}")
    return PauliString(n, x, z, phase)


def _split_prefix(text: str) -> tuple[int, str, int]:
    """Strip an optional sign prefix; return (phase, body, body column offset)."""
    for prefix in ("+i", "-i", "+", "-", "i"):
        if text.startswith(prefix):
            body = text[len(prefix):]
            stripped = body.lstrip()
            offset = len(text) - len(stripped)
            return _PREFIX_PHASE[prefix], stripped, offset
    return 0, text, 0


def parse_pauli(text: str, n_qubits: int | None = None) -> PauliString:
    """Parse dense ("XIZY") or sparse ("X0 Z3 Y5") Pauli text.

    Dense text assigns qubit 0 to the leftmost character. Sparse tokens are
    letter+index separated by whitespace. An optional "+", "-", "+i" or "-i"
    prefix sets the phase. When ``n_qubits`` is given the result is padded
    with identity to that width.

    Raises:
        PauliParseError: malformed token, with the 1-based offending column.
        DuplicateQubitError: repeated qubit index in sparse form.
        WidthError: an index or dense length exceeds ``n_qubits``.
    """
    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    if not stripped:
        raise PauliParseError("empty Pauli text", column=1)
    phase, body, offset = _split_prefix(stripped)
    offset += lead
    if not body:
        raise PauliParseError("sign prefix without a Pauli body", column=lead + 1)

    if any(ch.isdigit() for ch in body):
        x = z = 0
        width = 0
        seen: set[int] = set()
        for match in re.finditer(r"\S+", body):
            token = match.group(0)
            column = offset + match.start() + 1
            m = _SPARSE_TOKEN.match(token)
            if m is None:
                raise PauliParseError(
                    f"malformed sparse token {token!r} at column {column}",
                    column=column,
                )
            letter, q = m.group(1), int(m.group(2))
            if q in seen:
                raise DuplicateQubitError(
                    f"duplicate qubit index {q} at column {column}", column=column
                )
            seen.add(q)
            xb, zb = _LETTER_BITS[letter]
            x |= xb << q
            z |= zb << q
            width = max(width, q + 1)
        if n_qubits is not None:
            if width > n_qubits:
                raise WidthError(
                    f"sparse index {width - 1} does not fit in {n_qubits} qubits"
                )
            width = n_qubits
        return PauliString(width, x, z, phase)

    x = z = 0
    for idx, ch in enumerate(body):
        if ch not in _LETTER_BITS:
            column = offset + idx + 1
            raise PauliParseError(
                f"invalid Pauli letter {ch!r} at column {column}", column=column
            )
        xb, zb = _LETTER_BITS[ch]
        x |= xb << idx
        z |= zb << idx
    width = len(body)
    if n_qubits is not None:
        if width > n_qubits:
            raise WidthError(f"dense string of length {width} exceeds {n_qubits} qubits")
        width = n_qubits
    return PauliString(width, x, z, phase)


def format_pauli(p: PauliString, style: str = "dense") -> str:
    """Render a Pauli as text; inverse of :func:`parse_pauli` up to whitespace."""
    prefix = _PHASE_PREFIX[p.phase_exp]
    if style == "dense":
        return prefix + "".join(p.letter(q) for q in range(p.n_qubits))
    if style == "sparse":
        if p.is_identity():
            body = "I"
        else:
            body = " ".join(
                f"{p.letter(q)}{q}"
                for q in range(p.n_qubits)
                if (p.x_bits | p.z_bits) >> q & 1
            )
        return f"{prefix} {body}" if prefix else body
    raise ValueError(f"unknown style {style!r}")
