"""Finite posets stored as strict-order matrices, with an isomorphism search."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InvalidPoset


@dataclass(frozen=True)
class Poset:
    """A finite poset; ``less[i][j]`` is true iff elements[i] < elements[j]."""

    elements: tuple[str, ...]
    less: tuple[tuple[bool, ...], ...]
    name: str = "P"

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "less", tuple(tuple(bool(x) for x in row) for row in self.less))
        n = len(self.elements)
        if len(set(self.elements)) != n:
            raise InvalidPoset("duplicate elements")
        if len(self.less) != n or any(len(row) != n for row in self.less):
            raise InvalidPoset("relation matrix has the wrong shape")
        lt = self.less
        for i in range(n):
            if lt[i][i]:
                raise InvalidPoset(f"relation is not irreflexive at {self.elements[i]!r}")
            for j in range(n):
                if lt[i][j]:
                    if lt[j][i]:
                        raise InvalidPoset(f"relation is not antisymmetric at {self.elements[i]!r}, {self.elements[j]!r}")
                    for k in range(n):
                        if lt[j][k] and not lt[i][k]:
                            raise InvalidPoset("relation is not transitive")

    @classmethod
    def from_relations(cls, elements: Sequence[str], pairs: Iterable[tuple[str, str]], name: str = "P") -> "Poset":
        """Poset generated by ``x < y`` for each pair, closed under transitivity."""
        idx = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        lt = [[False] * n for _ in range(n)]
        for x, y in pairs:
            lt[idx[x]][idx[y]] = True
        for k in range(n):
            for i in range(n):
                if lt[i][k]:
                    for j in range(n):
                        if lt[k][j]:
                            lt[i][j] = True
        return cls(tuple(elements), tuple(map(tuple, lt)), name)

    @classmethod
    def chain(cls, n: int, prefix: str = "p") -> "Poset":
        names = [f"{prefix}{i}" for i in range(n)]
        return cls.from_relations(names, zip(names, names[1:]), f"chain{n}")

    @classmethod
    def antichain(cls, n: int, prefix: str = "p") -> "Poset":
        return cls.from_relations([f"{prefix}{i}" for i in range(n)], [], f"antichain{n}")

    def __len__(self):
        return len(self.elements)

    @cached_property
    def index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def lt(self, x: str, y: str) -> bool:
        return self.less[self.index[x]][self.index[y]]

    def relations(self) -> list[tuple[str, str]]:
        e = self.elements
        return [(e[i], e[j]) for i in range(len(e)) for j in range(len(e)) if self.less[i][j]]

    def covers(self) -> list[tuple[str, str]]:
        """Pairs (x, y) with x < y and nothing strictly between."""
        n = len(self.elements)
        lt = self.less
        out = []
        for i in range(n):
            for j in range(n):
                if lt[i][j] and not any(lt[i][k] and lt[k][j] for k in range(n)):
                    out.append((self.elements[i], self.elements[j]))
        return out

    def minimal(self, subset: Iterable[int]) -> list[int]:
        """Indices in ``subset`` with no smaller element of ``subset``."""
        s = list(subset)
        return [i for i in s if not any(self.less[j][i] for j in s)]

    def linear_extension(self) -> list[int]:
        """Indices sorted so that every element comes after all smaller ones."""
        return sorted(range(len(self.elements)), key=lambda i: (sum(row[i] for row in self.less), i))

    def longest_chain(self) -> list[str]:
        """One chain of maximal length, listed from bottom to top."""
        if not self.elements:
            return []
        best: dict[int, list[int]] = {}
        for i in self.linear_extension():
            preds = [best[j] for j in best if self.less[j][i]]
            best[i] = max(preds, key=len, default=[]) + [i]
        chain = max(best.values(), key=len)
        return [self.elements[i] for i in chain]

    def height(self) -> int:
        return len(self.longest_chain())

    def relabel(self, order: Sequence[str]) -> "Poset":
        """The same poset with elements listed in ``order``."""
        idx = [self.index[e] for e in order]
        return Poset(tuple(order), tuple(tuple(self.less[i][j] for j in idx) for i in idx), self.name)

    def to_dict(self) -> dict:
        return {"elements": list(self.elements), "covers": [list(c) for c in self.covers()]}


# ---------------------------------------------------------------- isomorphism

def _refine(posets: Sequence[Poset]) -> list[list[int]]:
    """Colour refinement on the strict-order digraphs of several posets at once.

    Colours are comparable across the posets because the signature table is shared.
    """
    colours = []
    for P in posets:
        n = len(P)
        colours.append([(sum(P.less[j][i] for j in range(n)), sum(P.less[i])) for i in range(n)])
    distinct = -1
    while True:
        sigs = []
        for P, col in zip(posets, colours):
            n = len(P)
            sigs.append([
                (
                    col[i],
                    tuple(sorted(col[j] for j in range(n) if P.less[j][i])),
                    tuple(sorted(col[j] for j in range(n) if P.less[i][j])),
                )
                for i in range(n)
            ])
        table = {s: k for k, s in enumerate(sorted({s for row in sigs for s in row}))}
        colours = [[table[s] for s in row] for row in sigs]
        if len(table) == distinct:
            return colours
        distinct = len(table)


def poset_isomorphism(P1: Poset, P2: Poset) -> tuple[dict[str, str] | None, str]:
    """Find an order isomorphism P1 -> P2.

    Returns ``(mapping, "isomorphic")`` or ``(None, reason)`` where the reason names
    the invariant that separates the posets.
    """
    if len(P1) != len(P2):
        return None, f"vertex count {len(P1)} != {len(P2)}"
    if sum(map(sum, P1.less)) != sum(map(sum, P2.less)):
        return None, "number of order relations differs"
    c1, c2 = _refine([P1, P2])
    if Counter(c1) != Counter(c2):
        return None, "degree profile differs"
    n = len(P1)
    class_size = Counter(c1)
    order = sorted(range(n), key=lambda i: (class_size[c1[i]], c1[i], i))
    image: dict[int, int] = {}
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        i = order[k]
        for j in range(n):
            if used[j] or c2[j] != c1[i]:
                continue
            if all(P1.less[i][a] == P2.less[j][b] and P1.less[a][i] == P2.less[b][j] for a, b in image.items()):
                image[i] = j
                used[j] = True
                if extend(k + 1):
                    return True
                del image[i]
                used[j] = False
        return False

    if not extend(0):
        return None, "exhausted search"
    return {P1.elements[i]: P2.elements[j] for i, j in sorted(image.items())}, "isomorphic"


def is_isomorphism(P1: Poset, P2: Poset, mapping: dict[str, str]) -> bool:
    """Check that ``mapping`` is a bijection preserving and reflecting the order."""
    if sorted(mapping) != sorted(P1.elements) or sorted(mapping.values()) != sorted(P2.elements):
        return False
    return all(P1.lt(x, y) == P2.lt(mapping[x], mapping[y]) for x in P1.elements for y in P1.elements)
