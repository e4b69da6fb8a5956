import warnings

import pytest
from hypothesis import given, settings, strategies as st

from qgr.errors import NotFiniteGK, ParseError
from qgr.growth import gk_dimension, growth_oracle
from qgr.monomial import MonomialPresentation, ext_quiver_of_algebra, parse_algebra, ufnarovskii_graph
from qgr.oracles import enumerate_normal_words


def test_parse_examples():
    A = parse_algebra("gens x y\nrel xy")
    assert A.gens == ("x", "y") and A.relations == (("x", "y"),)
    B = parse_algebra("gens u v w\nrel uv\nrel vw\nrel wu")
    assert len(B.relations) == 3
    with pytest.raises(ParseError):
        parse_algebra("rel xy")


def test_parse_multichar_generators():
    A = parse_algebra("gens x1 x2\nrel x1*x2*x1")
    assert A.relations == (("x1", "x2", "x1"),)
    assert A.render(("x2", "x1")) == "x2*x1"


@pytest.mark.parametrize(
    "text",
    [
        "gens x y\nrel xy + yx",
        "gens x y\nrel xy-yx",
        "gens x y\nrel xy=0",
        "gens x y\nrel x",
        "gens x y\nrel xz",
        "gens x y\ngens z",
        "gens x x",
        "gens x\nfoo x",
        "",
    ],
)
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        parse_algebra(text)


def test_redundant_relations_dropped_with_warning():
    with pytest.warns(UserWarning, match="dropped"):
        A = parse_algebra("gens x y\nrel xy\nrel xxy\nrel xy")
    assert A.relations == (("x", "y"),)


def test_graph_of_xy():
    U = ufnarovskii_graph(parse_algebra("gens x y\nrel xy"))
    assert U.vertices == ("x", "y")
    assert {(a.id, a.src, a.tgt) for a in U.arrows} == {("xx", "x", "x"), ("yx", "y", "x"), ("yy", "y", "y")}


def test_graph_of_degenerate_sklyanin():
    U = ufnarovskii_graph(parse_algebra("gens u v w\nrel uv\nrel vw\nrel wu"))
    assert len(U.vertices) == 3 and len(U.arrows) == 6
    assert {(a.src, a.tgt) for a in U.arrows} == {("u", "u"), ("v", "v"), ("w", "w"), ("u", "w"), ("w", "v"), ("v", "u")}
    assert not gk_dimension(U).finite


def test_graph_of_free_algebra():
    U = ufnarovskii_graph(parse_algebra("gens x"))
    assert U.vertices == ("1",) and len(U.arrows) == 1
    U2 = ufnarovskii_graph(parse_algebra("gens x y"))
    assert growth_oracle(U2, 5) == [1, 2, 4, 8, 16, 32]


def test_ext_quiver_of_algebras():
    E = ext_quiver_of_algebra(parse_algebra("gens x y\nrel xy"))
    assert E.names == ("x", "y") and E.arrows == (("y", "x"),)
    E = ext_quiver_of_algebra(parse_algebra("gens x"))
    assert len(E.vertices) == 1 and E.arrows == ()
    with pytest.raises(NotFiniteGK) as info:
        ext_quiver_of_algebra(parse_algebra("gens u v w\nrel uu\nrel vv\nrel ww"))
    assert info.value.doubly_cyclic


def test_gk_of_xy_is_two_and_counts_are_linear():
    A = parse_algebra("gens x y\nrel xy")
    assert gk_dimension(ufnarovskii_graph(A)).gk == 2
    assert enumerate_normal_words(A, 8) == [n + 1 for n in range(9)]


@st.composite
def presentations(draw):
    gens = ("a", "b", "c")[: draw(st.integers(1, 3))]
    words = draw(st.lists(st.lists(st.sampled_from(gens), min_size=2, max_size=3).map(tuple), max_size=4))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        text = "gens " + " ".join(gens) + "".join(f"\nrel {''.join(w)}" for w in words)
        return parse_algebra(text)


@settings(max_examples=80, deadline=None)
@given(presentations())
def test_path_counts_match_normal_words(A):
    U = ufnarovskii_graph(A)
    d = A.degree
    shift = d - 1 if A.relations else 0
    words = enumerate_normal_words(A, shift + 8)
    paths = growth_oracle(U, 8)
    for n in range(shift, shift + 9):
        assert words[n] == paths[n - shift]


@settings(max_examples=40, deadline=None)
@given(presentations())
def test_presentation_is_reduced(A):
    for r in A.relations:
        for s in A.relations:
            if r != s:
                assert not any(r[i:i + len(s)] == s for i in range(len(r) - len(s) + 1))


def test_presentation_validation():
    with pytest.raises(ParseError):
        MonomialPresentation(("x",), (("x",),))
    with pytest.raises(ParseError):
        MonomialPresentation(("x",), (("x", "y"),))
