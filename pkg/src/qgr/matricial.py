"""Ultramatricial data: Bratteli vectors, endomorphism block sizes, Noetherian and GK-1 reports."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotFiniteGK
from .growth import gk_dimension, strongly_connected_cycles
from .quiver import Quiver, incidence_matrix, transpose


def bratteli(Q: Quiver, n_max: int) -> list[tuple[int, ...]]:
    """p_0 = (1, ..., 1) and p_{m+1} = M^T p_m; p_m[i] counts paths of length m ending at i."""
    mt = transpose(incidence_matrix(Q))
    p = tuple(1 for _ in Q.vertices)
    out = [p]
    for _ in range(n_max):
        p = tuple(sum(x * y for x, y in zip(row, p)) for row in mt)
        out.append(p)
    return out


def _cyclic_set(Q: Quiver) -> set[str]:
    dec = strongly_connected_cycles(Q)
    if dec.offending_components:
        raise NotFiniteGK(dec.doubly_cyclic)
    return {v for c in dec.cycles for v in c.vertices}


def live_vertices(Q: Quiver) -> set[str]:
    """Vertices from which some cycle can be reached."""
    live = set(_cyclic_set(Q))
    todo = list(live)
    while todo:
        v = todo.pop()
        for a in Q.in_arrows(v):
            if a.src not in live:
                live.add(a.src)
                todo.append(a.src)
    return live


def endo_block_dims(Q: Quiver, n_max: int) -> list[dict[str, int]]:
    """For each degree n, the number of live paths of length n from a cyclic vertex to each vertex.

    These are the matrix sizes of the degree-n endomorphism algebra; zero blocks are omitted.
    """
    cyclic = _cyclic_set(Q)
    live = live_vertices(Q)
    counts = {v: int(v in cyclic) for v in Q.vertices}
    out = []
    for _ in range(n_max + 1):
        out.append({v: counts[v] for v in Q.vertices if counts[v] and v in live})
        nxt = dict.fromkeys(Q.vertices, 0)
        for a in Q.arrows:
            if a.tgt in live:
                nxt[a.tgt] += counts[a.src]
        counts = nxt
    return out


def noetherian_check(Q: Quiver) -> tuple[bool, bool]:
    """(left, right): every cyclic vertex has exactly one incoming, resp. outgoing, arrow."""
    dec = strongly_connected_cycles(Q)
    cyclic = [v for c in dec.cycles for v in c.vertices]
    cyclic += [v for comp in dec.offending_components for v in comp]
    left = all(len(Q.in_arrows(v)) == 1 for v in cyclic)
    right = all(len(Q.out_arrows(v)) == 1 for v in cyclic)
    return left, right


@dataclass(frozen=True)
class GK1Report:
    applicable: bool
    n: int = 0
    noetherian: tuple[bool, bool] = (False, False)
    reason: str = ""

    @property
    def summary(self) -> str:
        if not self.applicable:
            return f"not applicable: {self.reason}"
        left, right = self.noetherian
        sides = [s for s, ok in (("left", left), ("right", right)) if ok]
        extra = f"; {' and '.join(sides)} Noetherian" if sides else ""
        return f"QGr kQ is equivalent to Mod k^{self.n}{extra}"

    def to_json(self) -> dict:
        return {
            "applicable": self.applicable,
            "n": self.n if self.applicable else None,
            "noetherian": {"left": self.noetherian[0], "right": self.noetherian[1]},
            "summary": self.summary,
        }


def gk1_report(Q: Quiver) -> GK1Report:
    """When GK-dimension is 1 the quotient category is semisimple, one simple per cyclic vertex."""
    g = gk_dimension(Q)
    noeth = noetherian_check(Q)
    if not g.finite:
        return GK1Report(False, noetherian=noeth, reason="infinite GK-dimension")
    if g.gk != 1:
        return GK1Report(False, noetherian=noeth, reason=f"GK-dimension is {g.gk}")
    return GK1Report(True, len(_cyclic_set(Q)), noeth)


def matricial_report(Q: Quiver, n_max: int) -> dict:
    blocks = endo_block_dims(Q, n_max)
    left, right = noetherian_check(Q)
    return {
        "bratteli": [list(p) for p in bratteli(Q, n_max)],
        "endo_blocks": [{"degree": n, "blocks": b} for n, b in enumerate(blocks)],
        "noetherian": {"left": left, "right": right},
    }
