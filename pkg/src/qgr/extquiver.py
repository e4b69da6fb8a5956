"""The Ext-quiver of a path algebra of finite GK-dimension.

Its vertices are the cyclic vertices of Q. There is an arrow v -> w (v != w) exactly
when Q has a path from v to w whose length is a positive multiple of n_v * n_w,
where n_v is the length of the cycle through v. This relation is a strict partial
order, and two quivers give equivalent categories exactly when their Ext-quivers are
isomorphic posets. ``gamma`` builds the canonical quiver realising a given poset.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import NotFiniteGK
from .growth import strongly_connected_cycles
from .poset import Poset, poset_isomorphism
from .quiver import Arrow, Quiver


def cyclic_vertices(Q: Quiver) -> list[tuple[str, int]]:
    """Each vertex lying on a cycle, with the length of that cycle, in declaration order."""
    dec = strongly_connected_cycles(Q)
    if dec.offending_components:
        raise NotFiniteGK(dec.doubly_cyclic)
    length = {v: c.length for c in dec.cycles for v in c.vertices}
    return [(v, length[v]) for v in Q.vertices if v in length]


def shortest_path_multiple(Q: Quiver, v: str, w: str, k: int) -> int | None:
    """Length of the shortest path v -> w of positive length divisible by k, if any.

    Breadth-first search on the product of Q with the cyclic group of order k.
    """
    if k < 1:
        raise ValueError("k must be positive")
    start = [(a.tgt, 1 % k) for a in Q.out_arrows(v)]
    dist = {}
    queue = deque()
    for s in start:
        if s not in dist:
            dist[s] = 1
            queue.append(s)
    while queue:
        u, r = queue.popleft()
        if u == w and r == 0:
            return dist[(u, r)]
        for a in Q.out_arrows(u):
            s = (a.tgt, (r + 1) % k)
            if s not in dist:
                dist[s] = dist[(u, r)] + 1
                queue.append(s)
    return None


def has_path_multiple(Q: Quiver, v: str, w: str, k: int) -> bool:
    return shortest_path_multiple(Q, v, w, k) is not None


@dataclass(frozen=True)
class ExtQuiver:
    """Cyclic vertices with their cycle lengths, and the Ext arrows between them."""

    vertices: tuple[tuple[str, int], ...]
    arrows: tuple[tuple[str, str], ...]
    name: str = "E"

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.vertices)

    @cached_property
    def cycle_length(self) -> dict[str, int]:
        return dict(self.vertices)

    def as_poset(self) -> Poset:
        """The strict order given by the arrows; raises InvalidPoset if it is not one."""
        idx = {v: i for i, v in enumerate(self.names)}
        n = len(idx)
        lt = [[False] * n for _ in range(n)]
        for v, w in self.arrows:
            lt[idx[v]][idx[w]] = True
        return Poset(self.names, tuple(map(tuple, lt)), self.name)

    def as_quiver(self) -> Quiver:
        return Quiver(self.name, self.names, tuple(Arrow(f"{v}__{w}", v, w) for v, w in self.arrows))

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v, "cycle_length": n} for v, n in self.vertices],
            "arrows": [list(a) for a in self.arrows],
        }


def ext_quiver(Q: Quiver) -> ExtQuiver:
    verts = cyclic_vertices(Q)
    arrows = tuple(
        (v, w)
        for v, n in verts
        for w, m in verts
        if v != w and has_path_multiple(Q, v, w, n * m)
    )
    return ExtQuiver(tuple(verts), arrows, f"E({Q.name})")


def gamma(P: Poset) -> Quiver:
    """A loop at every element and one arrow x -> y for every relation x < y."""
    arrows = [Arrow(f"{x}__{x}", x, x) for x in P.elements]
    arrows += [Arrow(f"{x}__{y}", x, y) for x, y in P.relations()]
    return Quiver(f"Gamma({P.name})", P.elements, tuple(arrows))


def gk_from_ext_quiver(E: ExtQuiver) -> int:
    return E.as_poset().height()


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    bijection: dict[str, str] | None
    reason: str

    def to_json(self) -> dict:
        return {"equivalent": self.equivalent, "bijection": self.bijection, "reason": self.reason}


def qgr_equivalent(Q: Quiver, Q2: Quiver) -> Equivalence:
    """Decide whether the two quivers have isomorphic Ext-quivers."""
    p1 = ext_quiver(Q).as_poset()
    p2 = ext_quiver(Q2).as_poset()
    mapping, reason = poset_isomorphism(p1, p2)
    return Equivalence(mapping is not None, mapping, reason)
