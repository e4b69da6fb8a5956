"""K0 of the quotient category as an ordered abelian group.

Steps: replace Q by a Veronese quiver whose cycles are loops and whose vertices can
be ordered so the incidence matrix M is upper triangular; take the rows R of M at
the p cyclic vertices; solve N R = R M for the unipotent p x p matrix N. K0 is Z^p
and its positive cone is Delta(E_Q): the vectors whose support has only positive
coordinates at its minimal elements.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .errors import InvariantViolation, NotFiniteGK
from .extquiver import ext_quiver
from .growth import strongly_connected_cycles
from .linalg import matrix_rank, solve
from .poset import Poset
from .quiver import Arrow, Matrix, Quiver, identity, incidence_matrix, mat_mul, mat_pow, vec_mat

IntMatrix = tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------- normalization

def _closure(m: Sequence[Sequence[int]]) -> list[list[bool]]:
    """reach[i][j]: a path of positive length from i to j in the graph of m."""
    n = len(m)
    reach = [[bool(m[i][j]) for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return reach


def _topological_order(m: Sequence[Sequence[int]]) -> list[int] | None:
    """Order of the vertices making m upper triangular, ties broken by index; None if impossible."""
    n = len(m)
    indeg = [sum(1 for i in range(n) if i != j and m[i][j]) for j in range(n)]
    ready = sorted(j for j in range(n) if indeg[j] == 0)
    order = []
    while ready:
        i = ready.pop(0)
        order.append(i)
        for j in range(n):
            if j != i and m[i][j]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
                    ready.sort()
    return order if len(order) == n else None


@dataclass(frozen=True, eq=False)
class Normalization:
    """Q^(E) with E = L * multiplier, relabelled so its incidence matrix is upper triangular.

    ``order`` lists the original vertex ids in the new order; ``perm[k]`` is the
    original index of the k-th new vertex; ``cyclic`` are the new indices of the
    cyclic vertices.
    """

    source: Quiver
    L: int
    multiplier: int
    order: tuple[str, ...]
    perm: tuple[int, ...]
    matrix: IntMatrix
    cyclic: tuple[int, ...]

    @property
    def exponent(self) -> int:
        return self.L * self.multiplier

    @cached_property
    def quiver(self) -> Quiver:
        """The normalized quiver itself; can be large since arrow counts grow with E."""
        arrows = []
        for i, src in enumerate(self.order):
            for j, tgt in enumerate(self.order):
                arrows.extend(Arrow(f"{src}__{tgt}__{k}", src, tgt) for k in range(self.matrix[i][j]))
        return Quiver(f"{self.source.name}^({self.exponent})", self.order, tuple(arrows))

    def to_normalized(self, v: Sequence[int]) -> tuple[int, ...]:
        """Reorder a vector indexed by the original vertices."""
        return tuple(v[i] for i in self.perm)

    def to_original(self, v: Sequence[int]) -> tuple[int, ...]:
        out = [0] * len(v)
        for k, i in enumerate(self.perm):
            out[i] = v[k]
        return tuple(out)

    def to_json(self) -> dict:
        return {"L": self.L, "n": self.multiplier, "exponent": self.exponent, "perm": list(self.perm), "order": list(self.order)}


def _check_normal_form(m: IntMatrix, cyclic: Sequence[int]) -> str | None:
    """Reason the upper triangular matrix m fails the normal form, or None."""
    n = len(m)
    cyc = set(cyclic)
    for i in range(n):
        if m[i][i] != (1 if i in cyc else 0):
            return f"diagonal entry {i} is {m[i][i]}"
        if any(m[i][j] for j in range(i)):
            return "not upper triangular"
    if matrix_rank(m) != len(cyclic):
        return "rank differs from the number of cyclic vertices"
    reach = _closure(m)
    for i in cyclic:
        for j in cyclic:
            if i != j and reach[i][j] and not m[i][j]:
                return f"path without arrow between cyclic vertices {i} and {j}"
    return None


def normalize_for_k0(Q: Quiver) -> Normalization:
    """Veronese by L = lcm of cycle lengths, then by the least multiplier k <= |Q0|
    giving the normal form: loops only, upper triangular, rank = number of cyclic
    vertices, and an arrow between cyclic vertices whenever there is a path.
    The multiplier |Q0| always works; smaller ones are tried first.
    """
    dec = strongly_connected_cycles(Q)
    if dec.offending_components:
        raise NotFiniteGK(dec.doubly_cyclic)
    L = math.lcm(*(c.length for c in dec.cycles)) if dec.cycles else 1
    cyclic_set = {v for c in dec.cycles for v in c.vertices}
    base = mat_pow(incidence_matrix(Q), L)
    power = identity(len(Q.vertices))
    for k in range(1, max(1, len(Q.vertices)) + 1):
        power = mat_mul(power, base)
        order = _topological_order(power)
        if order is None:
            continue
        m = tuple(tuple(power[i][j] for j in order) for i in order)
        cyclic = tuple(k2 for k2, i in enumerate(order) if Q.vertices[i] in cyclic_set)
        if _check_normal_form(m, cyclic) is None:
            return Normalization(Q, L, k, tuple(Q.vertices[i] for i in order), tuple(order), m, cyclic)
    raise InvariantViolation(f"normal form not reached with exponent {L} * {len(Q.vertices)}")


# ---------------------------------------------------------------- R and N

def cyclic_row_basis(norm: Normalization) -> IntMatrix:
    """Rows of the normalized matrix at the cyclic vertices.

    They are independent and every row of M is an integer combination of them.
    """
    R = tuple(norm.matrix[i] for i in norm.cyclic)
    for row in norm.matrix:
        if row_coordinates(R, norm.cyclic, row) is None:
            raise InvariantViolation("a row of M is not an integer combination of the cyclic rows")
    if R and matrix_rank(R) != len(R):
        raise InvariantViolation("cyclic rows are dependent")
    return R


def row_coordinates(R: Sequence[Sequence[int]], pivots: Sequence[int], x: Sequence[int]) -> tuple[int, ...] | None:
    """Integer c with c . R = x, using that row i of R starts with a 1 in column pivots[i]."""
    residual = list(x)
    coords = []
    for row, p in zip(R, pivots):
        c = residual[p]
        coords.append(c)
        if c:
            for j, y in enumerate(row):
                residual[j] -= c * y
    return tuple(coords) if not any(residual) else None


def solve_N(norm: Normalization, R: Sequence[Sequence[int]]) -> IntMatrix:
    """The p x p matrix N with N R = R M, by exact rational elimination."""
    p, n = len(R), len(norm.matrix)
    RM = mat_mul(R, norm.matrix) if R else ()
    # x R = y  <=>  R^T x^T = y^T : n equations in p unknowns
    eqs = [{i: Fraction(R[i][k]) for i in range(p) if R[i][k]} for k in range(n)]
    rows = []
    for y in RM:
        x = solve(eqs, y, p)
        if x is None or any(v.denominator != 1 for v in x):
            raise InvariantViolation("N R = R M has no integer solution")
        rows.append(tuple(int(v) for v in x))
    N = tuple(rows)
    for i in range(p):
        if N[i][i] != 1 or any(N[i][j] for j in range(i)):
            raise InvariantViolation("N is not unipotent upper triangular")
    return N


def closed_form_N(norm: Normalization) -> IntMatrix:
    """N from the entries of M and M^2 at the cyclic vertices.

    With a = M, a2 = M^2 restricted to cyclic indices and c_j = a2[i][i+j] - a[i][i+j],
    b[i][i+l] = c_l + sum over 1 <= j_1 < ... < j_d <= l-1 of
    (-1)^d c_{j_1} a[i+j_1][i+j_2] ... a[i+j_d][i+l].
    """
    cyc = norm.cyclic
    p = len(cyc)
    M = norm.matrix
    M2 = mat_mul(M, M)
    a = [[M[x][y] for y in cyc] for x in cyc]
    a2 = [[M2[x][y] for y in cyc] for x in cyc]
    N = [[int(i == j) for j in range(p)] for i in range(p)]
    for i in range(p):
        for l in range(1, p - i):
            c = [a2[i][i + j] - a[i][i + j] for j in range(l + 1)]
            total = c[l]
            for d in range(1, l):
                for js in itertools.combinations(range(1, l), d):
                    term = c[js[0]]
                    for s, t in zip(js, js[1:] + (l,)):
                        term *= a[i + s][i + t]
                        if not term:
                            break
                    total += (-1) ** d * term
            N[i][i + l] = total
    return tuple(map(tuple, N))


def recursive_N(norm: Normalization) -> IntMatrix:
    """N from b[i][i+l] = a2 - a - sum_{j<l} b[i][i+j] a[i+j][i+l] at cyclic indices."""
    cyc = norm.cyclic
    p = len(cyc)
    M = norm.matrix
    M2 = mat_mul(M, M)
    a = [[M[x][y] for y in cyc] for x in cyc]
    a2 = [[M2[x][y] for y in cyc] for x in cyc]
    N = [[int(i == j) for j in range(p)] for i in range(p)]
    for i in range(p):
        for l in range(1, p - i):
            N[i][i + l] = a2[i][i + l] - a[i][i + l] - sum(N[i][i + j] * a[i + j][i + l] for j in range(1, l))
    return tuple(map(tuple, N))


# ---------------------------------------------------------------- powers of N

@dataclass(frozen=True)
class BinomialPolynomial:
    """sum_l coeffs[l] * C(z, l); integer valued whenever the coefficients are integers."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs]
        while c and not c[-1]:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __call__(self, z: int) -> Fraction:
        total = Fraction(0)
        binom = Fraction(1)
        for l, c in enumerate(self.coeffs):
            if l:
                binom = binom * (z - l + 1) / l
            total += c * binom
        return total

    def __add__(self, other: "BinomialPolynomial") -> "BinomialPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        pad = lambda c: list(c) + [0] * (n - len(c))
        return BinomialPolynomial(tuple(x + y for x, y in zip(pad(self.coeffs), pad(other.coeffs))))

    def scale(self, k) -> "BinomialPolynomial":
        return BinomialPolynomial(tuple(k * c for c in self.coeffs))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree in z; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading_sign(self) -> int:
        """Sign of the leading coefficient, i.e. the eventual sign for large z."""
        return 0 if self.is_zero else (1 if self.coeffs[-1] > 0 else -1)

    def monomial_coefficients(self) -> tuple[Fraction, ...]:
        """Coefficients in the basis 1, z, z^2, ..."""
        out = [Fraction(0)] * max(1, len(self.coeffs))
        falling = [Fraction(1)]
        for l, c in enumerate(self.coeffs):
            if l:
                # falling *= (z - l + 1)
                nxt = [Fraction(0)] * (len(falling) + 1)
                for k, x in enumerate(falling):
                    nxt[k + 1] += x
                    nxt[k] -= (l - 1) * x
                falling = nxt
            fact = math.factorial(l)
            for k, x in enumerate(falling):
                out[k] += c * x / fact
        return tuple(out)

    def __str__(self):
        terms = []
        for k, c in enumerate(self.monomial_coefficients()):
            if c:
                mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
                coef = str(c) if (k == 0 or c not in (1, -1)) else ("" if c == 1 else "-")
                terms.append(f"{coef}{'*' if coef not in ('', '-') and mono else ''}{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def n_power_polynomial(N: Sequence[Sequence[int]]) -> tuple[tuple[BinomialPolynomial, ...], ...]:
    """Entries of N^z as polynomials: b_ij(z) = sum_l C(z, l) (U^l)_ij with U = N - I."""
    p = len(N)
    U = tuple(tuple(N[i][j] - int(i == j) for j in range(p)) for i in range(p))
    powers = [identity(p)]
    for _ in range(1, p):
        powers.append(mat_mul(powers[-1], U))
    return tuple(
        tuple(BinomialPolynomial(tuple(P[i][j] for P in powers)) for j in range(p)) for i in range(p)
    )


def unipotent_power(N: Sequence[Sequence[int]], z: int) -> IntMatrix:
    """N^z for any integer z, via the exact inverse for negative z."""
    if z >= 0:
        return mat_pow(N, z)
    p = len(N)
    U = tuple(tuple(N[i][j] - int(i == j) for j in range(p)) for i in range(p))
    inv = identity(p)
    term = identity(p)
    neg = tuple(tuple(-x for x in row) for row in U)
    for _ in range(1, p):
        term = mat_mul(term, neg)
        inv = tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(inv, term))
    return mat_pow(inv, -z)


# ---------------------------------------------------------------- the cone

def delta_contains(P: Poset, v: Sequence[int]) -> bool:
    """Membership in Delta(P): v = 0 or every minimal element of supp(v) has v > 0."""
    if len(v) != len(P):
        raise ValueError(f"vector has length {len(v)}, poset has {len(P)} elements")
    support = [i for i, x in enumerate(v) if x]
    return all(v[i] > 0 for i in P.minimal(support))


_GENERATOR_SEARCH: dict = {}


def _generator_search(P: Poset, bound: int):
    key = (P.elements, P.less, bound)
    if key in _GENERATOR_SEARCH:
        return _GENERATOR_SEARCH[key]
    order = P.linear_extension()
    n = len(order)
    pos = {i: t for t, i in enumerate(order)}
    succ = [[pos[k] for k in range(n) if P.less[i][k]] for i in order]
    span = range(-bound, bound + 1)

    @lru_cache(maxsize=None)
    def reach(t: int, residual: tuple[int, ...]) -> bool:
        # residual[q] is what remains to be produced at coordinate order[t + q]
        if t == n:
            return True
        k = residual[0]
        if k < 0 or k > bound:
            return False
        rest = residual[1:]
        if k == 0:
            return reach(t + 1, rest)
        slots = [q - t - 1 for q in succ[t]]
        choices = [sorted(span, key=lambda z, r=rest[s]: (z != r, abs(z))) for s in slots]
        for zs in itertools.product(*choices):
            nxt = list(rest)
            for s, z in zip(slots, zs):
                nxt[s] -= z
            if reach(t + 1, tuple(nxt)):
                return True
        return False

    _GENERATOR_SEARCH[key] = (reach, order)
    return reach, order


def delta_generator_oracle(P: Poset, v: Sequence[int], bound: int) -> bool:
    """Brute force: is v a sum of one element from each Delta_i, coefficients within bound?

    Delta_i = {n e_i + sum_{i<k} z_k e_k : 1 <= n} together with 0. Elements are
    processed along a linear extension, so the coefficient n for element i is
    forced by what earlier choices left at coordinate i, and every z_k is tried.
    """
    if len(v) != len(P):
        raise ValueError("length mismatch")
    reach, order = _generator_search(P, bound)
    return reach(0, tuple(v[i] for i in order))


# ---------------------------------------------------------------- K0

@dataclass(frozen=True, eq=False)
class OrderedK0:
    """(Z^p, Delta(E_Q), (1,...,1)), coordinates indexed by ``basis`` (normalized order)."""

    rank: int
    basis: tuple[str, ...]
    poset: Poset
    normalization: Normalization
    R: IntMatrix
    N: IntMatrix

    @property
    def order_unit(self) -> tuple[int, ...]:
        return (1,) * self.rank

    @cached_property
    def declaration_basis(self) -> tuple[str, ...]:
        Q = self.normalization.source
        return tuple(sorted(self.basis, key=Q.index.__getitem__))

    def from_declaration_order(self, v: Sequence[int]) -> tuple[int, ...]:
        """Reorder a vector indexed by the cyclic vertices in declaration order."""
        pos = {x: i for i, x in enumerate(self.declaration_basis)}
        return tuple(v[pos[x]] for x in self.basis)

    def contains(self, v: Sequence[int], normalized: bool = True) -> bool:
        if not normalized:
            v = self.from_declaration_order(v)
        return delta_contains(self.poset, v)

    @cached_property
    def powers(self):
        return n_power_polynomial(self.N)

    def to_json(self, normalized: bool = False) -> dict:
        poset = self.poset if normalized else self.poset.relabel(self.declaration_basis)
        return {
            "rank": self.rank,
            "basis": list(poset.elements),
            "poset": poset.to_dict(),
            "order_unit": list(self.order_unit),
            "normalization": self.normalization.to_json(),
        }


def k0(Q: Quiver) -> OrderedK0:
    norm = normalize_for_k0(Q)
    R = cyclic_row_basis(norm)
    N = solve_N(norm, R)
    if N != closed_form_N(norm):
        raise InvariantViolation("linear solve and closed formula disagree on N")
    basis = tuple(norm.order[i] for i in norm.cyclic)
    poset = ext_quiver(Q).as_poset().relabel(basis)
    # the Ext order must be the reachability order of the normalized quiver
    reach = _closure(norm.matrix)
    for a, i in enumerate(norm.cyclic):
        for b, j in enumerate(norm.cyclic):
            if poset.less[a][b] != (a != b and reach[i][j]):
                raise InvariantViolation("Ext order differs from normalized reachability")
    return OrderedK0(len(basis), basis, poset, norm, R, N)


@dataclass(frozen=True)
class ConeVerdict:
    verdict: str
    steps: int | None = None
    reason: str = ""

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "steps": self.steps, "reason": self.reason}


class ConeOracle:
    """Positivity in the direct limit of Z^n under x -> x M, by iteration.

    x is positive iff some x M^m is entrywise nonnegative. For a certified negative,
    x M = c R for an integer c, so x M^{1+m} = c N^m R has entries that are
    polynomials in m; a negative leading coefficient means the entry stays negative.
    """

    def __init__(self, K: OrderedK0):
        self.K = K
        norm = K.normalization
        self.M = norm.matrix
        n = len(self.M)
        zero = BinomialPolynomial(())
        # T[i][k](m) = (N^m R)_{ik}
        self.T = [
            [
                sum((K.powers[i][j].scale(K.R[j][k]) for j in range(K.rank)), zero)
                for k in range(n)
            ]
            for i in range(K.rank)
        ]

    def __call__(self, x: Sequence[int], cap: int = 50) -> ConeVerdict:
        y = tuple(x)
        for m in range(cap + 1):
            if all(c >= 0 for c in y):
                return ConeVerdict("member", m, f"x M^{m} >= 0")
            y = vec_mat(y, self.M)
        K = self.K
        c = row_coordinates(K.R, K.normalization.cyclic, vec_mat(x, self.M))
        if c is None:
            raise InvariantViolation("x M is not in the span of the cyclic rows")
        zero = BinomialPolynomial(())
        for k in range(len(self.M)):
            poly = sum((self.T[i][k].scale(c[i]) for i in range(K.rank)), zero)
            if poly.leading_sign < 0:
                return ConeVerdict("nonmember", None, f"coordinate {K.normalization.order[k]} is eventually negative")
        return ConeVerdict("inconclusive", None, f"no nonnegative iterate within {cap} steps")


def positive_cone_oracle(Q: Quiver | OrderedK0, x: Sequence[int], cap: int = 50) -> ConeVerdict:
    """Cone membership of x in Z^{|Q0|}, indexed in the normalized vertex order."""
    K = Q if isinstance(Q, OrderedK0) else k0(Q)
    return ConeOracle(K)(x, cap)
