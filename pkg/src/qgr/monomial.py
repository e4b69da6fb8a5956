"""Finitely presented monomial algebras and their Ufnarovskii graphs.

A monomial algebra k<gens>/(relations) has the words avoiding every relation as a
basis. With d the longest relation length, the Ufnarovskii graph has the normal
words of length d - 1 as vertices and one arrow for each normal word of length d,
from its prefix to its suffix. Paths of length n in the graph then correspond to
normal words of length n + d - 1.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from pathlib import Path as FilePath

from .errors import ParseError
from .extquiver import ExtQuiver, ext_quiver
from .quiver import Arrow, Quiver

Word = tuple[str, ...]

_GEN = re.compile(r"[\w.']+")


def contains_subword(word: Word, sub: Word) -> bool:
    k = len(sub)
    return any(word[i:i + k] == sub for i in range(len(word) - k + 1))


@dataclass(frozen=True)
class MonomialPresentation:
    gens: tuple[str, ...]
    relations: tuple[Word, ...]
    name: str = "A"

    def __post_init__(self):
        if len(set(self.gens)) != len(self.gens):
            raise ParseError("duplicate generator")
        for r in self.relations:
            if len(r) < 2:
                raise ParseError(f"relation {self.render(r)!r} has length < 2")
            if any(x not in self.gens for x in r):
                raise ParseError(f"relation {self.render(r)!r} uses an undeclared generator")

    @property
    def degree(self) -> int:
        """Length of the longest relation; 1 for a free algebra."""
        return max((len(r) for r in self.relations), default=1)

    def render(self, word: Word) -> str:
        if not word:
            return "1"
        return "".join(word) if all(len(g) == 1 for g in self.gens) else "*".join(word)

    def is_normal(self, word: Word) -> bool:
        return not any(contains_subword(word, r) for r in self.relations)

    def normal_words(self, length: int) -> list[Word]:
        """Normal words of the given length, extended letter by letter."""
        words: list[Word] = [()]
        for _ in range(length):
            words = [w + (g,) for w in words for g in self.gens if self.is_normal(w + (g,))]
        return words


def reduce_relations(relations) -> tuple[Word, ...]:
    """Drop duplicates and relations that contain another relation, warning for each."""
    kept: list[Word] = []
    unique = list(dict.fromkeys(relations))
    for r in unique:
        if any(s != r and contains_subword(r, s) for s in unique):
            warnings.warn(f"relation {'*'.join(r)} is implied by a shorter one and was dropped", stacklevel=3)
        else:
            kept.append(r)
    return tuple(kept)


def _parse_word(token: str, gens: tuple[str, ...], lineno: int) -> Word:
    if any(c in token for c in "+-=^"):
        raise ParseError(f"non-monomial relation {token!r}", lineno)
    parts = token.split("*") if "*" in token else list(token)
    for p in parts:
        if p not in gens:
            raise ParseError(f"unknown generator {p!r} in {token!r}", lineno)
    if len(parts) < 2:
        raise ParseError(f"relation {token!r} has length < 2", lineno)
    return tuple(parts)


def parse_algebra(text: str, name: str = "A") -> MonomialPresentation:
    """Parse ``gens <id> ...`` followed by ``rel <word>`` lines.

    Words concatenate single-character generators or separate generators with ``*``.
    """
    gens: tuple[str, ...] | None = None
    relations: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "gens":
            if gens is not None:
                raise ParseError("duplicate gens line", lineno)
            ids = rest.split()
            if not ids or not all(_GEN.fullmatch(g) for g in ids):
                raise ParseError(f"bad generator list {rest!r}", lineno)
            if len(set(ids)) != len(ids):
                raise ParseError("duplicate generator", lineno)
            gens = tuple(ids)
        elif keyword == "rel":
            if gens is None:
                raise ParseError("rel before gens", lineno)
            tokens = rest.split()
            if len(tokens) != 1:
                raise ParseError(f"non-monomial relation {rest!r}", lineno)
            relations.append(_parse_word(tokens[0], gens, lineno))
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno)
    if gens is None:
        raise ParseError("missing gens line")
    return MonomialPresentation(gens, reduce_relations(relations), name)


def load_algebra(path) -> MonomialPresentation:
    p = FilePath(path)
    return parse_algebra(p.read_text(encoding="utf-8"), p.stem)


def ufnarovskii_graph(A: MonomialPresentation) -> Quiver:
    """Normal (d-1)-words as vertices, one arrow per normal d-word (named by the word)."""
    if not A.relations:
        return Quiver(f"U({A.name})", ("1",), tuple(Arrow(g, "1", "1") for g in A.gens))
    d = A.degree
    vertices = [A.render(w) for w in A.normal_words(d - 1)]
    arrows = [Arrow(A.render(w), A.render(w[:-1]), A.render(w[1:])) for w in A.normal_words(d)]
    return Quiver(f"U({A.name})", tuple(vertices), tuple(arrows))


def ext_quiver_of_algebra(A: MonomialPresentation) -> ExtQuiver:
    return ext_quiver(ufnarovskii_graph(A))
