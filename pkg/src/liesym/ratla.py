"""Exact rational dense linear algebra: RREF, rank, kernel bases, solving."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ArityError


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]  # row-major, length rows*cols

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ArityError(
                f"matrix {self.rows}x{self.cols} needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "RatMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ArityError("ragged rows")
        return RatMatrix(r, c, tuple(Fraction(x) for row in rows for x in row))

    @staticmethod
    def zero(rows: int, cols: int) -> "RatMatrix":
        return RatMatrix(rows, cols, (Fraction(0),) * (rows * cols))

    @staticmethod
    def identity(n: int) -> "RatMatrix":
        return RatMatrix.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def matvec(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.cols:
            raise ArityError(f"vector length {len(v)} does not match {self.cols} columns")
        vv = [Fraction(x) for x in v]
        return [
            sum((self[i, j] * vv[j] for j in range(self.cols)), Fraction(0))
            for i in range(self.rows)
        ]


def rref(m: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    """Reduced row echelon form with the list of pivot columns."""
    a = m.to_rows()
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        pr = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return RatMatrix.from_rows(a) if m.rows else m, tuple(pivots)


def rank(m: RatMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: RatMatrix) -> list[list[Fraction]]:
    """Basis of the right null space, one vector per free column.

    Free coordinates follow the canonical RREF unit pattern, so the output is
    deterministic and directly comparable in golden tests.
    """
    r, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i, f]
        basis.append(v)
    return basis


def solve(m: RatMatrix, b: Sequence) -> list[Fraction] | None:
    """One solution of M x = b, or None if inconsistent."""
    if len(b) != m.rows:
        raise ArityError(f"rhs length {len(b)} does not match {m.rows} rows")
    aug = RatMatrix.from_rows(
        [list(m.row(i)) + [Fraction(b[i])] for i in range(m.rows)]
    ) if m.rows else m
    if m.rows == 0:
        return [Fraction(0)] * m.cols
    r, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for i, p in enumerate(pivots):
        x[p] = r[i, m.cols]
    return x


def in_span(vectors: list[Sequence], target: Sequence) -> bool:
    """Exact span-membership test via a rational solve."""
    if not vectors:
        return all(Fraction(t) == 0 for t in target)
    cols = len(vectors)
    rows = len(target)
    if any(len(v) != rows for v in vectors):
        raise ArityError("vector length mismatch")
    m = RatMatrix.from_rows(
        [[vectors[j][i] for j in range(cols)] for i in range(rows)]
    )
    return solve(m, target) is not None
