"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

import itertools
import math
import random
import re
import time

import pytest

from helpers import ACCEPTANCE, SEED, cycle, example8
from qgr.errors import NotFiniteGK
from qgr.extquiver import ext_quiver, gamma, has_path_multiple, qgr_equivalent
from qgr.growth import gk_dimension, growth_oracle, strongly_connected_cycles
from qgr.k0 import closed_form_N, cyclic_row_basis, delta_contains, k0, positive_cone_oracle, solve_N, unipotent_power
from qgr.matricial import bratteli, endo_block_dims, gk1_report, noetherian_check
from qgr.monomial import ext_quiver_of_algebra, parse_algebra, ufnarovskii_graph
from qgr.oracles import all_posets
from qgr.points import build_extension, cyclic_point_module, is_split_extension, qgr_hom_dim
from qgr.poset import poset_isomorphism

# Growth window and the ratio bounds of the growth signature.
WINDOW = range(10, 41)
GEOMETRIC_BOUND = 1.1
SPREAD_BOUND = 4
# Every cycle length in a corpus quiver divides lcm(1..6).
MAX_PERIOD = math.lcm(*range(1, 7))


def record(number, ok, detail):
    line = f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


def image(K, v):
    """v in K0 coordinates, sent into Z^|Q0| through the rows R."""
    return tuple(sum(c * r[k] for c, r in zip(v, K.R)) for k in range(len(K.normalization.matrix)))


def test_acceptance_1_example_cone():
    start = time.perf_counter()
    K = k0(example8())
    mismatches = 0
    for z1, z2 in itertools.product(range(-10, 11), repeat=2):
        expected = (z1 == 0 and z2 >= 0) or z1 > 0
        mismatches += K.contains((z1, z2)) != expected
    elapsed = time.perf_counter() - start
    ok = K.rank == 2 and mismatches == 0 and elapsed < 1
    record(1, ok, f"rank {K.rank}, 441 vectors, {mismatches} mismatches, {elapsed:.3f}s")


def test_acceptance_2_gamma_round_trip(finite_corpus):
    start = time.perf_counter()
    failures = posets = 0
    for n in range(6):
        for P in all_posets(n):
            posets += 1
            failures += poset_isomorphism(ext_quiver(gamma(P)).as_poset(), P)[0] is None
    for Q in finite_corpus:
        failures += not qgr_equivalent(Q, gamma(ext_quiver(Q).as_poset())).equivalent
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 30
    record(2, ok, f"{posets} posets, {len(finite_corpus)} quivers, {failures} failures, {elapsed:.1f}s")


def _difference(r, n, step, order):
    return sum((-1) ** k * math.comb(order, k) * r[n + k * step] for k in range(order + 1))


def _finite_signature(Q, d):
    """Polynomial growth of degree d - 1: bounded ratio spread and an exact quasi-polynomial fit."""
    if d == 0:
        return all(x == 0 for x in growth_oracle(Q, WINDOW.stop - 1)[WINDOW.start:])
    L = math.lcm(*(c.length for c in strongly_connected_cycles(Q).cycles))
    r = growth_oracle(Q, WINDOW.stop - 1 + d * L)
    ratios = [r[n] / n ** (d - 1) for n in WINDOW]
    bounded = min(ratios) > 0 and max(ratios) / min(ratios) <= SPREAD_BOUND
    vanishes = all(_difference(r, n, L, d) == 0 for n in WINDOW)
    exact_degree = any(_difference(r, n, L, d - 1) for n in range(WINDOW.start, WINDOW.start + L))
    return bounded and vanishes and exact_degree


def _infinite_signature(Q):
    """Geometric growth over the window, and no quasi-polynomial of degree <= |Q0| fits."""
    order = len(Q.vertices) + 1
    r = growth_oracle(Q, WINDOW.start + MAX_PERIOD + order * MAX_PERIOD)
    lo, hi = WINDOW.start, WINDOW.stop - 1
    geometric = r[lo] > 0 and (r[hi] / r[lo]) ** (1 / (hi - lo)) >= GEOMETRIC_BOUND
    no_fit = any(_difference(r, n, MAX_PERIOD, order) for n in range(lo, lo + MAX_PERIOD))
    return geometric and no_fit


def test_acceptance_3_growth_signature(mixed):
    disagreements = []
    for Q in mixed.quivers:
        g = gk_dimension(Q)
        ok = _finite_signature(Q, g.gk) if g.finite else _infinite_signature(Q)
        if not ok:
            disagreements.append(Q.name)
    detail = f"{len(mixed.finite)} finite, {len(mixed.infinite)} infinite, {len(disagreements)} disagreements"
    record(3, not disagreements, detail + (f" {disagreements[:5]}" if disagreements else ""))


def test_acceptance_4_simple_hom(finite_corpus):
    D = 15
    pairs = failures = 0
    for Q in finite_corpus:
        names = ext_quiver(Q).names
        points = {v: cyclic_point_module(Q, v, D) for v in names}
        for v, w in itertools.product(names, repeat=2):
            pairs += 1
            h = qgr_hom_dim(points[v], points[w], D)
            failures += not (h.stabilized and h.dim == int(v == w))
    record(4, failures == 0, f"{pairs} cyclic pairs at D={D}, {failures} failures")


def test_acceptance_5_ext_criterion(finite_corpus):
    D = 15
    arrows = empty = failures = inconclusive = 0
    for Q in finite_corpus[:50]:
        E = ext_quiver(Q)
        n = E.cycle_length
        K = k0(Q)
        Qn = K.normalization.quiver
        for v, w in itertools.permutations(E.names, 2):
            if (v, w) not in E.arrows:
                empty += 1
                failures += has_path_multiple(Q, v, w, n[v] * n[w])
                continue
            arrows += 1
            r = next(a.id for a in Qn.out_arrows(v) if a.tgt == w)
            ones = is_split_extension(build_extension(Qn, v, w, r, [1] * D, D)).verdict
            unit = is_split_extension(build_extension(Qn, v, w, r, [1] + [0] * (D - 1), D)).verdict
            inconclusive += (ones == "inconclusive") + (unit == "inconclusive")
            failures += (ones, unit) != ("nonsplit", "split")
    ok = failures == 0 and inconclusive == 0
    record(5, ok, f"{arrows} Ext arrows, {empty} empty pairs, {failures} failures, {inconclusive} inconclusive")


def test_acceptance_6_n_matrix(finite_corpus):
    failures = 0
    for Q in finite_corpus:
        K = k0(Q)
        n = K.normalization
        failures += solve_N(n, cyclic_row_basis(n)) != closed_form_N(n)
        b, P = K.powers, K.poset
        for z in range(-6, 7):
            Nz = unipotent_power(K.N, z)
            failures += any(b[i][j](z) != Nz[i][j] for i in range(K.rank) for j in range(K.rank))
        covers = set(P.covers())
        for i, j in itertools.permutations(range(K.rank), 2):
            if not P.less[i][j]:
                failures += not b[i][j].is_zero
            elif (P.elements[i], P.elements[j]) in covers:
                failures += not (b[i][j].degree == 1 and b[i][j].coeffs[0] == 0 and b[i][j].coeffs[1] > 0)
    record(6, failures == 0, f"{len(finite_corpus)} quivers, {failures} failures")


def test_acceptance_7_cone_cross_validation(finite_corpus):
    rng = random.Random(SEED)
    total = inconclusive = disagreements = 0
    for Q in finite_corpus:
        K = k0(Q)
        for _ in range(200):
            v = tuple(rng.randint(-10, 10) for _ in range(K.rank))
            verdict = positive_cone_oracle(K, image(K, v), cap=50).verdict
            total += 1
            if verdict == "inconclusive":
                inconclusive += 1
            else:
                disagreements += (verdict == "member") != delta_contains(K.poset, v)
    rate = inconclusive / total
    ok = disagreements == 0 and rate <= 0.05
    record(7, ok, f"{total} vectors, {disagreements} disagreements, inconclusive {rate:.2%}")


def test_acceptance_8_monomial_pipeline():
    A = parse_algebra("gens x y\nrel xy")
    U = ufnarovskii_graph(A)
    E = ext_quiver_of_algebra(A)
    ok = gk_dimension(U).gk == 2 and len(E.vertices) == 2 and len(E.arrows) == 1
    witnesses = []
    for text in ("gens u v w\nrel uv\nrel vw\nrel wu", "gens u v w\nrel uu\nrel vv\nrel ww"):
        try:
            ext_quiver_of_algebra(parse_algebra(text))
        except NotFiniteGK as exc:
            witnesses.append(exc.doubly_cyclic)
        else:
            witnesses.append(())
    ok = ok and all(witnesses)
    record(8, ok, f"xy: GK {gk_dimension(U).gk}, {len(E.vertices)} simples, E arrows {list(E.arrows)}; witnesses {witnesses}")


def test_acceptance_9_gk_one(finite_corpus):
    checked = failures = 0
    for Q in finite_corpus:
        if gk_dimension(Q).gk != 1:
            continue
        checked += 1
        n = len(ext_quiver(Q).names)
        report = gk1_report(Q)
        tail = endo_block_dims(Q, 3 * len(Q.vertices) + 6)[-3:]
        ok = report.applicable and report.n == n and re.fullmatch(rf"QGr kQ is equivalent to Mod k\^{n}(; .*)?", report.summary)
        ok = ok and all(len(b) == n and set(b.values()) == {1} for b in tail)
        failures += not ok
    for m in range(1, 7):
        report = gk1_report(cycle(m))
        failures += not (report.n == m and report.noetherian == (True, True) and noetherian_check(cycle(m)) == (True, True))
    record(9, failures == 0, f"{checked} GK-1 quivers and cycles 1..6, {failures} failures")


def test_acceptance_10_bratteli(finite_corpus):
    failures = sum([sum(p) for p in bratteli(Q, 12)] != growth_oracle(Q, 12) for Q in finite_corpus)
    record(10, failures == 0, f"{len(finite_corpus)} quivers, m <= 12, {failures} failures")


@pytest.fixture(scope="module", autouse=True)
def _reset():
    ACCEPTANCE.clear()
    yield
