"""Brute-force reference implementations used to audit the fast algorithms.

Nothing here tries to be efficient; caps raise ExplosionCap instead of truncating.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import ExplosionCap
from .growth import gk_dimension
from .monomial import MonomialPresentation
from .poset import Poset
from .quiver import Arrow, Path, Quiver

PATH_CAP = 200_000
WORD_CAP = 200_000
ISO_CAP = 8


def enumerate_paths(Q: Quiver, max_len: int, cap: int = PATH_CAP) -> dict[tuple[str, str, int], list[Path]]:
    """Every path of length <= max_len, grouped by (source, target, length)."""
    out: dict[tuple[str, str, int], list[Path]] = {}
    layer = [Path((v,)) for v in Q.vertices]
    total = 0
    for length in range(max_len + 1):
        total += len(layer)
        if total > cap:
            raise ExplosionCap(f"more than {cap} paths of length <= {max_len}")
        for p in layer:
            out.setdefault((p.source, p.target, length), []).append(p)
        if length < max_len:
            layer = [p.extend(a) for p in layer for a in Q.out_arrows(p.target)]
    return out


def paths_between(Q: Quiver, u: str, v: str, length: int) -> list[Path]:
    return enumerate_paths(Q, length).get((u, v, length), [])


def enumerate_normal_words(A: MonomialPresentation, max_len: int, cap: int = WORD_CAP) -> list[int]:
    """Number of words of each length 0..max_len containing no relation, by filtering all words."""
    counts = []
    for n in range(max_len + 1):
        if len(A.gens) ** n > cap:
            raise ExplosionCap(f"{len(A.gens)}^{n} words exceed the cap {cap}")
        counts.append(sum(1 for w in itertools.product(A.gens, repeat=n) if A.is_normal(w)))
    return counts


def poset_iso_bruteforce(P1: Poset, P2: Poset) -> tuple[bool, dict[str, str] | None]:
    """Try every bijection."""
    if max(len(P1), len(P2)) > ISO_CAP:
        raise ExplosionCap(f"posets larger than {ISO_CAP} elements")
    if len(P1) != len(P2):
        return False, None
    n = len(P1)
    for perm in itertools.permutations(range(n)):
        if all(P1.less[i][j] == P2.less[perm[i]][perm[j]] for i in range(n) for j in range(n)):
            return True, {P1.elements[i]: P2.elements[perm[i]] for i in range(n)}
    return False, None


def all_posets(n: int, prefix: str = "p") -> list[Poset]:
    """All posets on n elements up to isomorphism.

    Each poset on k + 1 elements arises from one on k elements by adding a new maximal
    element above a down-closed subset; duplicates are removed by brute-force isomorphism.
    """
    if n > ISO_CAP:
        raise ExplosionCap(f"posets larger than {ISO_CAP} elements")
    level = [Poset((), (), "P0")]
    for k in range(n):
        names = tuple(f"{prefix}{i + 1}" for i in range(k + 1))
        found: list[Poset] = []
        for P in level:
            for mask in range(1 << k):
                below = {i for i in range(k) if mask >> i & 1}
                if any(P.less[j][i] and j not in below for i in below for j in range(k)):
                    continue
                less = [list(row) + [i in below] for i, row in enumerate(P.less)]
                less.append([False] * (k + 1))
                Q = Poset(names, tuple(map(tuple, less)), f"P{k + 1}.{len(found)}")
                if not any(_same_profile(Q, R) and poset_iso_bruteforce(Q, R)[0] for R in found):
                    found.append(Q)
        level = found
    return level


def _same_profile(P1: Poset, P2: Poset) -> bool:
    def profile(P):
        n = len(P)
        return sorted((sum(P.less[i]), sum(P.less[j][i] for j in range(n))) for i in range(n))

    return profile(P1) == profile(P2)


# ---------------------------------------------------------------- corpus

def random_quiver(rng: random.Random, max_vertices: int = 6, max_arrows: int = 10, name: str = "R") -> Quiver:
    """Uniformly chosen arrows between 1..max_vertices vertices; GK may be infinite."""
    n = rng.randint(1, max_vertices)
    verts = [f"v{i}" for i in range(n)]
    m = rng.randint(0, max_arrows)
    arrows = [Arrow(f"a{k}", rng.choice(verts), rng.choice(verts)) for k in range(m)]
    return Quiver(name, tuple(verts), tuple(arrows))


def random_finite_gk_quiver(rng: random.Random, max_vertices: int = 6, max_arrows: int = 10, name: str = "F") -> Quiver:
    """A random quiver whose strongly connected components are simple cycles or single vertices.

    Vertices are grouped into cycles and acyclic vertices, the groups are put in a
    random order, and extra arrows only go forward in that order, so no component
    can contain two cycles. Declaration order is shuffled.
    """
    n = rng.randint(1, max_vertices)
    verts = [f"v{i}" for i in range(n)]
    rng.shuffle(verts)
    blocks: list[list[str]] = []
    i = 0
    while i < n:
        size = rng.randint(1, n - i)
        blocks.append(verts[i:i + size])
        i += size
    arrows: list[tuple[str, str]] = []
    cyclic_blocks = []
    for b in blocks:
        if len(b) == 1 and rng.random() < 0.35:
            continue  # acyclic vertex
        cyclic_blocks.append(b)
        arrows += [(b[k], b[(k + 1) % len(b)]) for k in range(len(b))]
    # split cycles that would exceed the arrow budget into acyclic vertices
    while len(arrows) > max_arrows and cyclic_blocks:
        b = cyclic_blocks.pop()
        arrows = [a for a in arrows if a[0] not in b]
        blocks.remove(b)
        blocks.extend([v] for v in b)
    rng.shuffle(blocks)
    position = {v: k for k, b in enumerate(blocks) for v in b}
    budget = rng.randint(0, max(0, max_arrows - len(arrows)))
    for _ in range(budget):
        u, v = rng.sample(verts, 2) if n > 1 else (verts[0], verts[0])
        if position[u] < position[v]:
            arrows.append((u, v))
        elif position[v] < position[u]:
            arrows.append((v, u))
    declared = sorted(verts, key=lambda _: rng.random())
    rng.shuffle(arrows)
    return Quiver(name, tuple(declared), tuple(Arrow(f"a{k}", u, v) for k, (u, v) in enumerate(arrows)))


@dataclass
class Corpus:
    seed: int
    size: int
    max_vertices: int = 6
    max_arrows: int = 10
    mixed: bool = False
    quivers: list[Quiver] = field(default_factory=list)

    def __post_init__(self):
        rng = random.Random(self.seed)
        make = random_quiver if self.mixed else random_finite_gk_quiver
        self.quivers = [make(rng, self.max_vertices, self.max_arrows, f"C{self.seed}_{k}") for k in range(self.size)]

    @property
    def finite(self) -> list[Quiver]:
        return [Q for Q in self.quivers if gk_dimension(Q).finite]

    @property
    def infinite(self) -> list[Quiver]:
        return [Q for Q in self.quivers if not gk_dimension(Q).finite]


def finite_gk_corpus(seed: int, size: int, max_vertices: int = 6, max_arrows: int = 10) -> list[Quiver]:
    return Corpus(seed, size, max_vertices, max_arrows).quivers


def mixed_corpus(seed: int, size: int, max_vertices: int = 6, max_arrows: int = 10) -> Corpus:
    return Corpus(seed, size, max_vertices, max_arrows, mixed=True)
