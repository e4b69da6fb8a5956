"""Exact sparse linear algebra over the rationals.

Rows are dicts mapping column index to a nonzero Fraction. The systems that
arise from commuting squares are very sparse, so rows stay small.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Row = dict[int, Fraction]


class Echelon:
    """Incrementally maintained reduced row echelon form."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, Row] = {}

    def reduce(self, row: Mapping[int, Fraction]) -> Row:
        r = {c: Fraction(x) for c, x in row.items() if x}
        for c in [c for c in r if c in self.pivots]:
            x = r.get(c)
            if x:
                for k, y in self.pivots[c].items():
                    v = r.get(k, 0) - x * y
                    if v:
                        r[k] = v
                    else:
                        r.pop(k, None)
        return r

    def add(self, row: Mapping[int, Fraction]) -> bool:
        """Insert a row; returns True if it increased the rank."""
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {k: v * inv for k, v in r.items()}
        for q, other in self.pivots.items():
            x = other.get(p)
            if x:
                for k, y in r.items():
                    v = other.get(k, 0) - x * y
                    if v:
                        other[k] = v
                    else:
                        other.pop(k, None)
        self.pivots[p] = r
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def nullspace(self) -> list[list[Fraction]]:
        """Basis of {x : row . x = 0 for every inserted row}."""
        basis = []
        for f in range(self.ncols):
            if f in self.pivots:
                continue
            x = [Fraction(0)] * self.ncols
            x[f] = Fraction(1)
            for p, r in self.pivots.items():
                if f in r:
                    x[p] = -r[f]
            basis.append(x)
        return basis


def rank(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> int:
    e = Echelon(ncols)
    for r in rows:
        e.add(r)
    return e.rank


def nullspace(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    e = Echelon(ncols)
    for r in rows:
        e.add(r)
    return e.nullspace()


def solve(rows: Sequence[Mapping[int, Fraction]], rhs: Sequence, ncols: int) -> list[Fraction] | None:
    """One solution of ``rows . x = rhs`` (free variables set to zero), or None."""
    e = Echelon(ncols + 1)
    for r, b in zip(rows, rhs):
        aug = dict(r)
        if b:
            aug[ncols] = Fraction(b)
        e.add(aug)
    if ncols in e.pivots:
        return None
    x = [Fraction(0)] * ncols
    for p, r in e.pivots.items():
        x[p] = r.get(ncols, Fraction(0))
    return x


def dense_rows(m: Sequence[Sequence]) -> list[Row]:
    return [{j: Fraction(x) for j, x in enumerate(row) if x} for row in m]


def matrix_rank(m: Sequence[Sequence]) -> int:
    return rank(dense_rows(m), len(m[0]) if m else 0)
