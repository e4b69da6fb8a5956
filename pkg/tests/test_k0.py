import itertools
import random
from fractions import Fraction

import pytest

from helpers import cycle, example8, two_loops
from qgr.errors import NotFiniteGK
from qgr.extquiver import gamma, qgr_equivalent
from qgr.k0 import (
    BinomialPolynomial,
    ConeOracle,
    closed_form_N,
    cyclic_row_basis,
    delta_contains,
    delta_generator_oracle,
    k0,
    n_power_polynomial,
    normalize_for_k0,
    positive_cone_oracle,
    recursive_N,
    solve_N,
    unipotent_power,
)
from qgr.linalg import solve
from qgr.oracles import all_posets
from qgr.poset import Poset, poset_isomorphism
from qgr.quiver import identity, incidence_matrix, mat_mul, mat_pow, quiver


def loops_chain3():
    return quiver(["a", "b", "c"], [("x", "a", "a"), ("y", "b", "b"), ("z", "c", "c"), ("f", "a", "b"), ("g", "b", "c")])


def test_normalize_example8_is_unchanged():
    n = normalize_for_k0(example8())
    assert n.matrix == ((1, 1), (0, 1))
    assert (n.L, n.multiplier, n.perm) == (1, 1, (0, 1))


def test_normalize_three_cycle():
    n = normalize_for_k0(cycle(3))
    assert n.L == 3
    assert n.matrix == identity(3)
    assert n.cyclic == (0, 1, 2)


def test_normalize_disjoint_cycles_of_lengths_two_and_three():
    Q = quiver(list("abcde"), [("1", "a", "b"), ("2", "b", "a"), ("3", "c", "d"), ("4", "d", "e"), ("5", "e", "c")])
    n = normalize_for_k0(Q)
    assert n.L == 6
    assert n.matrix == identity(5)


def test_normalize_relabels_topologically():
    Q = quiver(["b", "a"], [("q", "b", "b"), ("f", "a", "b"), ("p", "a", "a")])
    n = normalize_for_k0(Q)
    assert n.order == ("a", "b")
    assert n.perm == (1, 0)
    assert n.to_normalized((10, 20)) == (20, 10)
    assert n.to_original((20, 10)) == (10, 20)


def test_normalize_uses_a_multiplier_when_paths_lack_arrows():
    n = normalize_for_k0(loops_chain3())
    assert (n.L, n.multiplier) == (1, 2)
    assert n.matrix == ((1, 2, 1), (0, 1, 2), (0, 0, 1))


def test_normalize_rejects_infinite_gk():
    with pytest.raises(NotFiniteGK):
        normalize_for_k0(two_loops())


def test_normalized_quiver_materializes():
    n = normalize_for_k0(loops_chain3())
    assert incidence_matrix(n.quiver) == n.matrix
    assert n.quiver.name == "Q^(2)"


def test_row_basis_examples():
    assert cyclic_row_basis(normalize_for_k0(example8())) == ((1, 1), (0, 1))
    loops = quiver(["a", "b", "c"], [("x", "a", "a"), ("y", "b", "b"), ("z", "c", "c")])
    assert cyclic_row_basis(normalize_for_k0(loops)) == identity(3)
    R = cyclic_row_basis(normalize_for_k0(loops_chain3()))
    assert len(R) == 3 and all(R[i][j] == 0 for i in range(3) for j in range(i))


def test_row_basis_with_acyclic_vertices():
    # s -> a, a loop, a -> t: the cyclic row spans the rows of s and t
    Q = quiver(["s", "a", "t"], [("e", "s", "a"), ("x", "a", "a"), ("g", "a", "t")])
    n = normalize_for_k0(Q)
    assert cyclic_row_basis(n) == ((0, 1, 1),)


def test_solve_N_examples():
    n = normalize_for_k0(example8())
    assert solve_N(n, cyclic_row_basis(n)) == ((1, 1), (0, 1))
    loops = quiver(["a", "b"], [("x", "a", "a"), ("y", "b", "b")])
    n = normalize_for_k0(loops)
    assert solve_N(n, cyclic_row_basis(n)) == identity(2)


def test_N_satisfies_defining_equation(finite_corpus):
    for Q in finite_corpus:
        K = k0(Q)
        assert mat_mul(K.N, K.R) == mat_mul(K.R, K.normalization.matrix)


def test_three_computations_of_N_agree(finite_corpus):
    for Q in finite_corpus:
        n = normalize_for_k0(Q)
        N = solve_N(n, cyclic_row_basis(n))
        assert N == closed_form_N(n) == recursive_N(n)


def test_binomial_polynomial_basics():
    z = BinomialPolynomial((0, 1))
    assert [z(k) for k in range(-2, 3)] == [-2, -1, 0, 1, 2]
    p = BinomialPolynomial((1, -3, 2))  # 1 - 3z + z(z-1)
    assert p.monomial_coefficients() == (1, -4, 1)
    assert p.degree == 2 and p.leading_sign == 1
    assert str(p) == "1 - 4*z + z^2"
    assert BinomialPolynomial((0, 0)).is_zero
    assert (z + p)(3) == 3 + p(3)


def test_power_polynomial_examples():
    b = n_power_polynomial(((1, 1), (0, 1)))
    assert b[0][1] == BinomialPolynomial((0, 1))
    assert str(b[0][1]) == "z"
    I = n_power_polynomial(identity(3))
    assert all(I[i][j].is_zero for i in range(3) for j in range(3) if i != j)


def test_power_polynomials_match_exact_powers(finite_corpus):
    for Q in finite_corpus:
        K = k0(Q)
        b = K.powers
        for z in range(-6, 7):
            Nz = unipotent_power(K.N, z)
            assert all(b[i][j](z) == Nz[i][j] for i in range(K.rank) for j in range(K.rank))


def _inverse_by_solving(N):
    p = len(N)
    rows = [{j: Fraction(N[i][j]) for j in range(p) if N[i][j]} for i in range(p)]
    cols = [solve(rows, [int(i == k) for i in range(p)], p) for k in range(p)]
    return tuple(tuple(int(cols[j][i]) for j in range(p)) for i in range(p))


def test_negative_powers_invert(finite_corpus):
    for Q in finite_corpus[:60]:
        N = k0(Q).N
        inv = _inverse_by_solving(N)
        assert unipotent_power(N, -1) == inv
        assert mat_mul(unipotent_power(N, -3), mat_pow(N, 3)) == identity(len(N))


def test_incomparable_zero_and_cover_linear(finite_corpus):
    for Q in finite_corpus:
        K = k0(Q)
        P, b = K.poset, K.powers
        covers = set(P.covers())
        for i, j in itertools.permutations(range(K.rank), 2):
            x, y = P.elements[i], P.elements[j]
            if not P.less[i][j]:
                assert b[i][j].is_zero
            elif (x, y) in covers:
                assert b[i][j].degree == 1
                assert b[i][j].coeffs[0] == 0 and b[i][j].coeffs[1] > 0
                assert b[i][j].coeffs[1] == K.N[i][j]


def test_delta_contains_examples():
    chain = Poset.chain(2)
    assert delta_contains(chain, (1, -5))
    assert delta_contains(chain, (0, 3))
    assert not delta_contains(chain, (-1, 100))
    for P in all_posets(3):
        assert delta_contains(P, (0, 0, 0))
    with pytest.raises(ValueError):
        delta_contains(chain, (1,))


def test_generator_oracle_examples():
    chain = Poset.chain(2)
    assert delta_generator_oracle(chain, (1, -5), 10)
    assert delta_generator_oracle(Poset.antichain(2), (2, 1), 3)
    for bound in (1, 4, 8):
        assert not delta_generator_oracle(chain, (-1, 0), bound)


def test_delta_matches_generator_search_exhaustively():
    for n in range(5):
        for P in all_posets(n):
            for v in itertools.product(range(-6, 7), repeat=n):
                assert delta_contains(P, v) == delta_generator_oracle(P, v, 6), (P, v)


def test_delta_is_strict():
    rng = random.Random(3)
    posets = [P for n in range(1, 6) for P in all_posets(n)]
    for _ in range(1000):
        P = rng.choice(posets)
        v = tuple(rng.randint(-5, 5) for _ in P.elements)
        if any(v):
            assert not (delta_contains(P, v) and delta_contains(P, tuple(-x for x in v)))


def test_delta_generates_the_group():
    # v = (v + c * ones) - c * ones with both terms in the cone
    rng = random.Random(4)
    for P in all_posets(4):
        for _ in range(20):
            v = tuple(rng.randint(-9, 9) for _ in range(4))
            c = 1 + max(abs(x) for x in v)
            assert delta_contains(P, tuple(x + c for x in v))
            assert delta_contains(P, (c,) * 4)


def test_k0_examples():
    K = k0(example8())
    assert K.rank == 2 and K.basis == ("a", "b")
    assert K.poset.relations() == [("a", "b")]
    assert K.order_unit == (1, 1)
    assert k0(quiver(["a", "b"], [("f", "a", "b")])).rank == 0
    L = k0(quiver(["a"], [("x", "a", "a")]))
    assert L.rank == 1
    assert [L.contains((z,)) for z in (-2, 0, 3)] == [False, True, True]


def test_k0_json():
    assert k0(example8()).to_json() == {
        "rank": 2,
        "basis": ["a", "b"],
        "poset": {"elements": ["a", "b"], "covers": [["a", "b"]]},
        "order_unit": [1, 1],
        "normalization": {"L": 1, "n": 1, "exponent": 1, "perm": [0, 1], "order": ["a", "b"]},
    }


def test_k0_declaration_order_vs_normalized():
    Q = quiver(["b", "a"], [("q", "b", "b"), ("f", "a", "b"), ("p", "a", "a")])
    K = k0(Q)
    assert K.basis == ("a", "b")
    assert K.declaration_basis == ("b", "a")
    assert K.contains((-5, 1), normalized=False)
    assert not K.contains((-5, 1), normalized=True)
    assert K.to_json()["basis"] == ["b", "a"]
    assert K.to_json(normalized=True)["basis"] == ["a", "b"]


def test_rank_and_order_unit_on_corpus(finite_corpus):
    for Q in finite_corpus:
        K = k0(Q)
        assert K.rank == len(K.normalization.cyclic)
        assert K.contains(K.order_unit)


def test_cone_oracle_examples():
    Q = example8()
    v = positive_cone_oracle(Q, (1, -4))
    assert (v.verdict, v.steps) == ("member", 4)
    assert positive_cone_oracle(Q, (0, 0)).verdict == "member"
    K = k0(Q)
    image = tuple(sum(c * r[k] for c, r in zip((-1, 100), K.R)) for k in range(2))
    assert positive_cone_oracle(K, image).verdict == "nonmember"


def test_cone_oracle_reports_inconclusive_honestly():
    v = positive_cone_oracle(example8(), (1, -60), cap=50)
    assert v.verdict == "inconclusive"
    assert positive_cone_oracle(example8(), (1, -60), cap=60).verdict == "member"


def _image(K, v):
    return tuple(sum(c * r[k] for c, r in zip(v, K.R)) for k in range(len(K.normalization.matrix)))


def test_cone_cross_validation_sample(small_finite_corpus):
    rng = random.Random(5)
    for Q in small_finite_corpus:
        K = k0(Q)
        oracle = ConeOracle(K)
        for _ in range(40):
            v = tuple(rng.randint(-10, 10) for _ in range(K.rank))
            verdict = oracle(_image(K, v))
            if verdict.verdict != "inconclusive":
                assert (verdict.verdict == "member") == delta_contains(K.poset, v)


def test_equivalent_quivers_have_isomorphic_k0(finite_corpus):
    for Q in finite_corpus[:80]:
        K = k0(Q)
        G = k0(gamma(K.poset))
        assert qgr_equivalent(Q, gamma(K.poset)).equivalent
        assert G.rank == K.rank
        assert poset_isomorphism(G.poset, K.poset)[0] is not None
