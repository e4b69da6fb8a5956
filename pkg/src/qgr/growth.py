"""GK-dimension of path algebras.

A vertex is doubly cyclic when it lies on two distinct simple cycles. kQ has finite
GK-dimension exactly when there is no such vertex, which happens exactly when every
nontrivial strongly connected component is a single simple cycle. The dimension is
then the length of the longest chain of cycles under reachability.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import networkx as nx

from .errors import NotFiniteGK
from .poset import Poset
from .quiver import Quiver

# Work limit for the search that certifies doubly cyclic vertices of in- and
# out-degree one inside their component.
SEARCH_BUDGET = 200_000


@dataclass(frozen=True)
class SimpleCycle:
    """A simple cycle, listed from its base vertex (the first one in declaration order)."""

    vertices: tuple[str, ...]
    arrows: tuple[str, ...]

    @property
    def base(self) -> str:
        return self.vertices[0]

    @property
    def length(self) -> int:
        return len(self.arrows)

    def successor(self, v: str) -> str:
        i = self.vertices.index(v)
        return self.vertices[(i + 1) % self.length]


class CycleDecomposition(NamedTuple):
    cycles: tuple[SimpleCycle, ...]
    doubly_cyclic: tuple[str, ...]
    offending_components: tuple[tuple[str, ...], ...]


def strongly_connected_components(Q: Quiver) -> list[tuple[str, ...]]:
    """All strongly connected components, each in declaration order, sorted by first vertex."""
    g = nx.DiGraph()
    g.add_nodes_from(Q.vertices)
    g.add_edges_from((a.src, a.tgt) for a in Q.arrows)
    comps = [tuple(sorted(c, key=Q.index.__getitem__)) for c in nx.strongly_connected_components(g)]
    return sorted(comps, key=lambda c: Q.index[c[0]])


def _on_two_cycles(Q: Quiver, v: str, members: set[str]) -> bool | None:
    """Whether v lies on two distinct simple cycles; None if the search budget runs out."""
    found = 0
    steps = 0
    on_path = {v}
    stack = [(v, iter(Q.out_arrows(v)))]
    while stack:
        steps += 1
        if steps > SEARCH_BUDGET:
            return None
        u, arrows = stack[-1]
        a = next(arrows, None)
        if a is None:
            stack.pop()
            if u != v:
                on_path.discard(u)
        elif a.tgt == v:
            found += 1
            if found == 2:
                return True
        elif a.tgt in members and a.tgt not in on_path:
            on_path.add(a.tgt)
            stack.append((a.tgt, iter(Q.out_arrows(a.tgt))))
    return False


def strongly_connected_cycles(Q: Quiver) -> CycleDecomposition:
    """Split the nontrivial components into simple cycles and offending components.

    A component is a simple cycle when it has as many internal arrows as vertices.
    In any other nontrivial component, a vertex with two internal out-arrows or two
    internal in-arrows is doubly cyclic; the remaining vertices are settled by a
    search for two distinct simple cycles through them.
    """
    cycles = []
    doubly: list[str] = []
    offending = []
    for comp in strongly_connected_components(Q):
        members = set(comp)
        internal = [a for a in Q.arrows if a.src in members and a.tgt in members]
        if not internal:
            continue
        if len(internal) == len(comp):
            nxt = {a.src: a for a in internal}
            verts, arrs = [comp[0]], []
            while True:
                a = nxt[verts[-1]]
                arrs.append(a.id)
                if a.tgt == comp[0]:
                    break
                verts.append(a.tgt)
            cycles.append(SimpleCycle(tuple(verts), tuple(arrs)))
            continue
        offending.append(comp)
        for v in comp:
            outs = sum(1 for a in internal if a.src == v)
            ins = sum(1 for a in internal if a.tgt == v)
            if outs > 1 or ins > 1 or _on_two_cycles(Q, v, members):
                doubly.append(v)
    doubly.sort(key=Q.index.__getitem__)
    return CycleDecomposition(tuple(cycles), tuple(doubly), tuple(offending))


def reachable_from(Q: Quiver, v: str) -> set[str]:
    """Vertices reachable from v by a path of length >= 0."""
    seen = {v}
    todo = [v]
    while todo:
        u = todo.pop()
        for a in Q.out_arrows(u):
            if a.tgt not in seen:
                seen.add(a.tgt)
                todo.append(a.tgt)
    return seen


@dataclass(frozen=True)
class CyclePoset:
    """Simple cycles ordered by reachability; ``leq`` is reflexive."""

    cycles: tuple[SimpleCycle, ...]
    leq: tuple[tuple[bool, ...], ...]

    def as_poset(self) -> Poset:
        n = len(self.cycles)
        strict = tuple(tuple(self.leq[i][j] and i != j for j in range(n)) for i in range(n))
        return Poset(tuple(c.base for c in self.cycles), strict, "cycles")


def _reachability_preorder(Q: Quiver, cycles) -> tuple[tuple[bool, ...], ...]:
    reach = {c.base: reachable_from(Q, c.base) for c in cycles}
    return tuple(tuple(i == j or d.base in reach[c.base] for j, d in enumerate(cycles)) for i, c in enumerate(cycles))


def cycle_preorder(Q: Quiver) -> tuple[tuple[SimpleCycle, ...], tuple[tuple[bool, ...], ...]]:
    """The reachability preorder on the simple cycles found by SCC decomposition."""
    dec = strongly_connected_cycles(Q)
    return dec.cycles, _reachability_preorder(Q, dec.cycles)


def cycle_poset(Q: Quiver) -> CyclePoset:
    dec = strongly_connected_cycles(Q)
    if dec.offending_components:
        raise NotFiniteGK(dec.doubly_cyclic)
    return CyclePoset(dec.cycles, _reachability_preorder(Q, dec.cycles))


@dataclass(frozen=True)
class GrowthReport:
    finite: bool
    gk: int | None = None
    doubly_cyclic: tuple[str, ...] = ()
    max_chain: tuple[str, ...] = ()
    offending_components: tuple[tuple[str, ...], ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "finite": self.finite,
            "gk": self.gk,
            "doubly_cyclic": list(self.doubly_cyclic),
            "max_chain": [list(self.max_chain)] if self.finite else [],
        }


def gk_dimension(Q: Quiver) -> GrowthReport:
    """GK-dimension of kQ with a witness: a longest cycle chain or the doubly cyclic vertices."""
    dec = strongly_connected_cycles(Q)
    if dec.offending_components:
        return GrowthReport(False, None, dec.doubly_cyclic, (), dec.offending_components)
    chain = CyclePoset(dec.cycles, _reachability_preorder(Q, dec.cycles)).as_poset().longest_chain()
    return GrowthReport(True, len(chain), (), tuple(chain))


def growth_oracle(Q: Quiver, n_max: int) -> list[int]:
    """Total number of paths of each length 0..n_max."""
    counts = {v: 1 for v in Q.vertices}
    out = [len(Q.vertices)]
    for _ in range(n_max):
        nxt = {v: 0 for v in Q.vertices}
        for a in Q.arrows:
            nxt[a.tgt] += counts[a.src]
        counts = nxt
        out.append(sum(counts.values()))
    return out
