"""Quivers, paths, incidence matrices and Veronese quivers.

Vertex order is declaration order and every matrix in the package is indexed
by it. Matrix entries are Python integers, so powers never overflow.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path as FilePath
from typing import NamedTuple, Sequence

from .errors import ParseError

IDENT = re.compile(r"[\w.'*]+")

Matrix = tuple[tuple[int, ...], ...]


class Arrow(NamedTuple):
    id: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Path:
    """A path v_0 -a_1-> v_1 ... -a_m-> v_m; m = 0 is the trivial path at v_0."""

    vertices: tuple[str, ...]
    arrows: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.vertices) != len(self.arrows) + 1:
            raise ValueError("a path of length m has m + 1 vertices")

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def source(self) -> str:
        return self.vertices[0]

    @property
    def target(self) -> str:
        return self.vertices[-1]

    def extend(self, arrow: Arrow) -> "Path":
        if arrow.src != self.target:
            raise ValueError(f"arrow {arrow.id} does not start at {self.target}")
        return Path(self.vertices + (arrow.tgt,), self.arrows + (arrow.id,))

    def __str__(self):
        if not self.arrows:
            return f"e_{self.source}"
        return "".join(self.arrows) if all(len(a) == 1 for a in self.arrows) else "*".join(self.arrows)


@dataclass(frozen=True)
class Quiver:
    """A finite directed multigraph with named vertices and arrows.

    Loops and parallel arrows are allowed. Instances are immutable.
    """

    name: str
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(Arrow(*a) for a in self.arrows))
        seen: set[str] = set()
        for v in self.vertices:
            if not IDENT.fullmatch(v):
                raise ParseError(f"invalid vertex identifier {v!r}")
            if v in seen:
                raise ParseError(f"duplicate vertex {v!r}")
            seen.add(v)
        ids: set[str] = set()
        for a in self.arrows:
            if not IDENT.fullmatch(a.id):
                raise ParseError(f"invalid arrow identifier {a.id!r}")
            if a.id in ids:
                raise ParseError(f"duplicate arrow {a.id!r}")
            ids.add(a.id)
            for end in (a.src, a.tgt):
                if end not in seen:
                    raise ParseError(f"arrow {a.id!r} has dangling endpoint {end!r}")

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_by_id(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @cached_property
    def _out(self) -> dict[str, tuple[Arrow, ...]]:
        out: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.src].append(a)
        return {v: tuple(arrs) for v, arrs in out.items()}

    @cached_property
    def _in(self) -> dict[str, tuple[Arrow, ...]]:
        into: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            into[a.tgt].append(a)
        return {v: tuple(arrs) for v, arrs in into.items()}

    def out_arrows(self, v: str) -> tuple[Arrow, ...]:
        return self._out[v]

    def in_arrows(self, v: str) -> tuple[Arrow, ...]:
        return self._in[v]

    def __len__(self):
        return len(self.vertices)


def quiver(vertices: Sequence[str], arrows: Sequence[tuple[str, str, str]], name: str = "Q") -> Quiver:
    """Build a quiver from plain tuples ``(id, src, tgt)``."""
    return Quiver(name, tuple(vertices), tuple(Arrow(*a) for a in arrows))


# ---------------------------------------------------------------- matrices

def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return ()
    cols = list(zip(*b)) if b else []
    if len(a[0]) != len(b):
        raise ValueError("shape mismatch in matrix product")
    return tuple(tuple(sum(x * y for x, y in zip(row, col) if x) for col in cols) for row in a)


def mat_pow(m: Sequence[Sequence[int]], d: int) -> Matrix:
    """Exact integer matrix power by repeated squaring."""
    if d < 0:
        raise ValueError("negative exponent")
    result = identity(len(m))
    base = tuple(tuple(r) for r in m)
    while d:
        if d & 1:
            result = mat_mul(result, base)
        d >>= 1
        if d:
            base = mat_mul(base, base)
    return result


def vec_mat(v: Sequence[int], m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Row vector times matrix."""
    n = len(m[0]) if m else 0
    out = [0] * n
    for x, row in zip(v, m):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return tuple(out)


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*m)) if m else ()


def incidence_matrix(Q: Quiver) -> Matrix:
    """Entry (i, j) is the number of arrows from vertex i to vertex j."""
    n = len(Q.vertices)
    rows = [[0] * n for _ in range(n)]
    for a in Q.arrows:
        rows[Q.index[a.src]][Q.index[a.tgt]] += 1
    return tuple(tuple(r) for r in rows)


def count_paths(Q: Quiver, u: str, v: str, length: int) -> int:
    """Number of paths of the given length from u to v.

    Computed by pushing counts along arrows, independently of the matrix code.
    """
    if length < 0:
        raise ValueError("length must be nonnegative")
    counts = {w: 0 for w in Q.vertices}
    counts[u] = 1
    for _ in range(length):
        nxt = {w: 0 for w in Q.vertices}
        for a in Q.arrows:
            if counts[a.src]:
                nxt[a.tgt] += counts[a.src]
        counts = nxt
    return counts[v]


def veronese(Q: Quiver, d: int) -> Quiver:
    """The quiver whose incidence matrix is the d-th power of Q's.

    Arrows are named ``src__tgt__k`` with k the 0-based ordinal among parallel arrows.
    """
    if d < 1:
        raise ValueError("Veronese degree must be positive")
    m = mat_pow(incidence_matrix(Q), d)
    arrows = []
    for i, src in enumerate(Q.vertices):
        for j, tgt in enumerate(Q.vertices):
            arrows.extend(Arrow(f"{src}__{tgt}__{k}", src, tgt) for k in range(m[i][j]))
    return Quiver(f"{Q.name}^({d})", Q.vertices, tuple(arrows))


# ---------------------------------------------------------------- formats

_ARROW_LINE = re.compile(r"arrow\s+(\S+?)\s*:\s*(\S+?)\s*->\s*(\S+)")


def parse_quiver(text: str) -> Quiver:
    """Parse the line-oriented quiver format.

    ::

        quiver <name>                 # optional header
        vertex <id>
        arrow <id>: <src> -> <tgt>
    """
    name = None
    vertices: list[str] = []
    vertex_set: set[str] = set()
    arrows: list[Arrow] = []
    arrow_lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword = line.split(None, 1)[0]
        if keyword == "quiver":
            if name is not None:
                raise ParseError("duplicate quiver header", lineno)
            if vertices or arrows:
                raise ParseError("quiver header must come first", lineno)
            name = line[len("quiver"):].strip() or "Q"
        elif keyword == "vertex":
            parts = line.split()
            if len(parts) != 2 or not IDENT.fullmatch(parts[1]):
                raise ParseError(f"expected 'vertex <id>', got {line!r}", lineno)
            if parts[1] in vertex_set:
                raise ParseError(f"duplicate vertex {parts[1]!r}", lineno)
            vertices.append(parts[1])
            vertex_set.add(parts[1])
        elif keyword == "arrow":
            m = _ARROW_LINE.fullmatch(line)
            if not m or not all(IDENT.fullmatch(g) for g in m.groups()):
                raise ParseError(f"expected 'arrow <id>: <src> -> <tgt>', got {line!r}", lineno)
            aid, src, tgt = m.groups()
            if aid in arrow_lines:
                raise ParseError(f"duplicate arrow {aid!r}", lineno)
            arrow_lines[aid] = lineno
            arrows.append(Arrow(aid, src, tgt))
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno)
    for a in arrows:
        for end in (a.src, a.tgt):
            if end not in vertex_set:
                raise ParseError(f"arrow {a.id!r} has dangling endpoint {end!r}", arrow_lines[a.id])
    return Quiver(name or "Q", tuple(vertices), tuple(arrows))


def quiver_to_dict(Q: Quiver) -> dict:
    return {
        "name": Q.name,
        "vertices": list(Q.vertices),
        "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in Q.arrows],
    }


def quiver_from_dict(data: dict) -> Quiver:
    try:
        arrows = tuple(Arrow(a["id"], a["src"], a["tgt"]) for a in data.get("arrows", []))
        return Quiver(data.get("name", "Q"), tuple(data.get("vertices", [])), arrows)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed quiver JSON: {exc}") from None


def parse_quiver_json(text: str) -> Quiver:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("quiver JSON must be an object")
    return quiver_from_dict(data)


def serialize(Q: Quiver, format: str = "text") -> str:
    """Render Q as ``text``, ``json`` or ``dot``."""
    if format == "text":
        lines = [f"quiver {Q.name}"]
        lines += [f"vertex {v}" for v in Q.vertices]
        lines += [f"arrow {a.id}: {a.src} -> {a.tgt}" for a in Q.arrows]
        return "\n".join(lines) + "\n"
    if format == "json":
        return json.dumps(quiver_to_dict(Q), indent=2) + "\n"
    if format == "dot":
        q = json.dumps
        lines = [f"digraph {q(Q.name)} {{"]
        lines += [f"  {q(v)};" for v in Q.vertices]
        lines += [f"  {q(a.src)} -> {q(a.tgt)} [label={q(a.id)}];" for a in Q.arrows]
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}")


def load_quiver(path: str | FilePath) -> Quiver:
    """Read a quiver from a ``.json`` file or a text-format file."""
    text = FilePath(path).read_text(encoding="utf-8")
    if str(path).endswith(".json") or text.lstrip().startswith("{"):
        return parse_quiver_json(text)
    return parse_quiver(text)
