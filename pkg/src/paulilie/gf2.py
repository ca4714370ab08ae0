"""Bit-sliced linear algebra over GF(2) using int bitsets.

Rows are Python integers with bit i addressing column i, so matrices with
thousands of columns cost one machine word per 64 columns.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BitMatrix:
    """A dense GF(2) matrix; ``rows[r]`` holds row r as a packed bit vector."""

    n_rows: int
    n_cols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n_rows:
            raise ValueError("row count mismatch")
        mask = (1 << self.n_cols) - 1
        for r in self.rows:
            if r & ~mask:
                raise ValueError("row wider than n_cols")

    @classmethod
    def from_rows(cls, rows: list[int], n_cols: int) -> BitMatrix:
        return cls(len(rows), n_cols, tuple(rows))

    def column(self, j: int) -> int:
        """Column j as a bit vector over row indices."""
        out = 0
        for i, row in enumerate(self.rows):
            out |= ((row >> j) & 1) << i
        return out

    def transpose(self) -> BitMatrix:
        return BitMatrix(
            self.n_cols, self.n_rows, tuple(self.column(j) for j in range(self.n_cols))
        )


def _echelon(rows: list[int], n_cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot column list)."""
    pivots: list[int] = []
    row_idx = 0
    for col in range(n_cols):
        pivot = None
        for r in range(row_idx, len(rows)):
            if (rows[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        rows[row_idx], rows[pivot] = rows[pivot], rows[row_idx]
        for r in range(len(rows)):
            if r != row_idx and ((rows[r] >> col) & 1):
                rows[r] ^= rows[row_idx]
        pivots.append(col)
        row_idx += 1
        if row_idx == len(rows):
            break
    return rows, pivots


def rank(m: BitMatrix) -> int:
    """GF(2) rank via Gaussian elimination."""
    _, pivots = _echelon(list(m.rows), m.n_cols)
    return len(pivots)


def row_reduce(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row-echelon form and the pivot column indices."""
    rows, pivots = _echelon(list(m.rows), m.n_cols)
    return BitMatrix(m.n_rows, m.n_cols, tuple(rows)), pivots


def kernel_basis(m: BitMatrix) -> list[int]:
    """Basis of {v : M v = 0 over GF(2)}, vectors as bit ints over columns.

    Returned in reduced echelon order (ascending free column), so output is
    deterministic for a fixed input.
    """
    rows, pivots = _echelon(list(m.rows), m.n_cols)
    pivot_set = set(pivots)
    basis: list[int] = []
    for free in range(m.n_cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for r, p in enumerate(pivots):
            if (rows[r] >> free) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def solve(m: BitMatrix, b: int) -> int | None:
    """One solution x of M x = b (bit i of b is row i), or None if inconsistent."""
    augmented = [row | (((b >> i) & 1) << m.n_cols) for i, row in enumerate(m.rows)]
    rows, pivots = _echelon(augmented, m.n_cols + 1)
    x = 0
    for r, p in enumerate(pivots):
        if p == m.n_cols:
            return None
        if (rows[r] >> m.n_cols) & 1:
            x |= 1 << p
    return x
