import random
from collections import Counter
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from conftest import lp
from toriczeta.euler import EulerCache, EulerFailure
from toriczeta.polyhedra import HalfOpenCone, generating_function, substitute_monomial
from toriczeta.toric import ToricDatum, balance, is_regular, simplify
from toriczeta.topeval import (BadGamma, ModularSum, RationalFunction1V, SimpleTermSum, VerificationMismatch,
                               candidate_denominator, choose_gamma, cone_CJ, euler_coefficient,
                               evaluate_topologically, interpolate, word_primes, wj_reduction)
from toriczeta.verify import random_cone, random_polynomial


def rf(num, factors, constant=1):
    return RationalFunction1V.build(num, Counter(factors), constant)


def limit_oracle(C, A, s, eps=Fraction(1, 10 ** 5)):
    """(q-1)^d · gen_C^A(q^-1, q^-s) at q = 1 + eps, from the generating function itself."""
    G = substitute_monomial(generating_function(C), A)
    q = 1 + eps
    y = [1 / q, q ** (-s)]
    total = Fraction(0)
    for c, num, den in G.pieces:
        val = sum(y[0] ** b[0] * y[1] ** b[1] for b in num)
        for r in den:
            val /= 1 - y[0] ** r[0] * y[1] ** r[1]
        total += c * val
    return (q - 1) ** C.dim * total


def test_cone_CJ_examples():
    C = HalfOpenCone.orthant(2)
    T = ToricDatum(C, [])
    assert cone_CJ(T, (), []) == C
    f = lp({(-1, 0): 1, (0, -1): -1}, 2)
    T2 = ToricDatum(HalfOpenCone(2, weak=[(1, -1), (-1, 1)]), [f])
    gam = choose_gamma(T2)
    CJ = cone_CJ(T2, (0,), gam)
    assert CJ.n == 3
    assert (gam[0] + (1,)) in CJ.weak and (0, 0, 1) in CJ.strict
    C0 = cone_CJ(T2, (), gam)
    assert gam[0] in C0.weak
    with pytest.raises(BadGamma):
        cone_CJ(T2, (), [(5, 5)])


def test_wj_single_ray():
    C = HalfOpenCone(2, weak=[(1, -1), (-1, 1)])  # the ray (1,1)
    # beta picks the first coordinate, shift 0: factor (1*s + 2)
    S = wj_reduction(C, [[1, 0]], [0], 1)
    assert S == {((1, -2),): 1}


def test_wj_unimodular():
    S = wj_reduction(HalfOpenCone.orthant(2), [[1, 0], [0, 1]], [1, 2], 2)
    assert len(S) == 1 and list(S.values()) == [1]


def test_wj_wedge_against_limit_oracle():
    wedge = HalfOpenCone(2, weak=[(2, -1)])  # cone((1,0),(1,2))
    S = wj_reduction(wedge, [[1, 0]], [0], 2)
    assert S.evaluate(1) == Fraction(2, 8)
    assert S.evaluate(3) == Fraction(2, 4 * 6)
    for s in (1, 3):
        assert abs(float(limit_oracle(wedge, [[1, 1], [1, 0]], s)) - float(S.evaluate(s))) < 1e-3


def test_euler_coefficient_empty_system():
    T = ToricDatum(HalfOpenCone.orthant(2), [])
    assert euler_coefficient(T, ()) == 1


def test_euler_coefficient_line():
    f = lp({(0, 0): 1, (-1, 0): 1, (0, -1): 1}, 2)  # 1 + X1^-1 + X2^-1, every term tied at the origin
    origin = HalfOpenCone(2, weak=[(1, 0), (-1, 0), (0, 1), (0, -1)])
    T = ToricDatum(origin, [f])
    # V(f) is P^1 minus three points, chi = -1
    assert euler_coefficient(T, (0,)) == -1
    assert euler_coefficient(T, ()) == 1


def test_evaluate_trivial_and_abelian():
    empty = HalfOpenCone(2, strict=[(1, -1), (-1, 1)])
    assert evaluate_topologically(ToricDatum(empty, []), [[1, 0]], [1]) == {}
    # Z^2: n = 3, beta picks x11 and x22, shifts 1, 2
    S = evaluate_topologically(ToricDatum(HalfOpenCone.orthant(3), []), [[1, 0, 0], [0, 0, 1]], [1, 2])
    assert interpolate(S) == rf([1], {(1, 0): 1, (1, 1): 1})


def test_candidate_denominator_examples():
    S = SimpleTermSum()
    S.add_term([(1, 0), (1, 1)], 1)
    S.add_term([(1, 0)], 1)
    assert candidate_denominator(S) == Counter({(1, 0): 1, (1, 1): 1})
    T = SimpleTermSum()
    T.add_term([(2, 3), (1, 0)], 5)
    assert candidate_denominator(T) == Counter({(2, 3): 1, (1, 0): 1})
    U = SimpleTermSum()
    U.add_term([(1, 0), (1, 0)], 1)
    U.add_term([(1, 0)], 1)
    assert candidate_denominator(U) == Counter({(1, 0): 2})


def test_interpolate_examples():
    S = SimpleTermSum()
    # 1/(s(s-1)) = 1/(s-1) - 1/s
    S.add_term([(1, 1)], 1)
    S.add_term([(1, 0)], -1)
    R = interpolate(S, Counter({(1, 0): 1, (1, 1): 1}))
    assert R == rf([1], {(1, 0): 1, (1, 1): 1})
    assert interpolate(SimpleTermSum()).is_zero()


def test_rational_function_canonical_form():
    a = rf([-6, 6], {(1, 1): 2, (2, 0): 1})  # 6(s-1)/((s-1)^2 * 2s) = 3/(s(s-1))
    assert a == rf([3], {(1, 0): 1, (1, 1): 1})
    assert a.degree == -2
    assert rf([3], {(1, 0): 1, (1, 1): 1}, 2).constant == 2
    assert RationalFunction1V.from_dict(a.to_dict()) == a


def test_magic_of_published_formulas():
    fil4 = rf([-28569052512, 161557332768, -404678115300, 589429290044, -550262853249, 341501393670,
               -140917681751, 37286908278, -5741480808, 392031360],
              {(15, 26): 1, (7, 12): 1, (7, 13): 1, (6, 11): 3, (5, 8): 1, (5, 9): 1, (4, 7): 2, (3, 4): 1,
               (2, 3): 1, (1, 1): 1, (1, 0): 1}, 3)
    assert fil4.degree == -5
    assert fil4.magic(5) == Fraction(463, 1350)
    assert rf([1], {(1, 0): 1, (1, 1): 1}).magic(2) == 1


# -- properties -------------------------------------------------------------------------

seeds = st.integers(0, 10 ** 6)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_wj_triangulation_independent(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    C = random_cone(rng, n, max_strict=1)
    if C.is_empty():
        return
    beta = [[rng.randint(0, 2) for _ in range(n)] for _ in range(rng.randint(1, 2))]
    shifts = [rng.randint(0, 3) for _ in beta]
    d = C.dim
    order = list(range(len(C.closure().rays)))
    rng.shuffle(order)
    a = wj_reduction(C, beta, shifts, d)
    b = wj_reduction(C, beta, shifts, d, order=order)
    c = wj_reduction(C, beta, shifts, d, method="pulling")
    for _ in range(5):
        s = Fraction(rng.randint(50, 5000), rng.randint(1, 13))
        assert a.evaluate(s) == b.evaluate(s) == c.evaluate(s)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_wj_degree_bounds_and_emptiness(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    C = random_cone(rng, n, max_strict=1)
    if C.is_empty():
        return
    beta = [[rng.randint(1, 2) for _ in range(n)]]
    d = C.dim
    S = wj_reduction(C, beta, [0], d)
    assert S  # top-dimensional cones always contribute
    R = interpolate(S)
    assert -d <= R.degree <= 0
    assert wj_reduction(C, beta, [0], d + 1) == {} if d + 1 <= n else True


def _regular_samples(rng, count):
    out = []
    while len(out) < count:
        n = 2
        polys = [f for f in (random_polynomial(rng, n, bound=1),) if f]
        polys = [f.shift((-1, -1)) for f in polys]
        for P in balance(ToricDatum(random_cone(rng, n, max_strict=1), polys)):
            S = simplify(P)
            if not S.is_trivial() and S.polys and is_regular(S):
                out.append(S)
    return out[:count]


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_gamma_choice_does_not_matter(seed):
    rng = random.Random(seed)
    beta, shifts = [[1, 0], [0, 1]], [1, 2]
    for T in _regular_samples(rng, 2):
        inits = T.initial_forms()
        alt = [max(g.terms) for g in inits]
        try:
            a = evaluate_topologically(T, beta, shifts, EulerCache())
            b = evaluate_topologically(T, beta, shifts, EulerCache(), gamma=alt)
        except EulerFailure:
            continue
        for _ in range(5):
            s = Fraction(rng.randint(10, 500), rng.randint(1, 7))
            assert a.evaluate(s) == b.evaluate(s)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.lists(st.tuples(st.integers(1, 4), st.integers(-3, 6)), min_size=1, max_size=3),
                          st.integers(-5, 5).filter(bool)), min_size=1, max_size=12))
def test_interpolation_is_exact(terms):
    S = SimpleTermSum()
    for facs, c in terms:
        S.add_term([(A // gcd(A, B), B // gcd(A, B)) for A, B in facs], c)
    R = interpolate(S)
    for s in (Fraction(7, 3), Fraction(101, 5), Fraction(-13, 7)):
        if all(A * s != B for key in S for A, B in key):
            assert R(s) == S.evaluate(s)


_term_lists = st.lists(st.tuples(st.lists(st.tuples(st.integers(1, 4), st.integers(-3, 6)), max_size=3),
                                 st.fractions(min_value=-20, max_value=20, max_denominator=50).filter(bool)),
                       max_size=10)


def _sum_of(terms):
    S = SimpleTermSum()
    for facs, c in terms:
        S.add_term([(A // gcd(A, B), B // gcd(A, B)) for A, B in facs], c)
    return S


@settings(max_examples=40, deadline=None)
@given(_term_lists, _term_lists)
def test_modular_reconstruction_matches_exact(a, b):
    S, T = _sum_of(a), _sum_of(b)
    total = SimpleTermSum()
    total.merge(S)
    total.merge(T)
    # every term has degree <= 0, so deg num + deg den <= 2 deg g
    fit = 2 * sum(candidate_denominator(total).values()) + 2
    M, N = ModularSum(fit=fit), ModularSum(fit=fit)
    M.add(S)
    N.add(T)
    M.merge_state(N.state())
    assert M.reconstruct() == interpolate(total)


def test_modular_merge_order_is_irrelevant():
    rng = random.Random(5)
    parts = [_sum_of([([(rng.randint(1, 3), rng.randint(-2, 4))], Fraction(rng.randint(1, 9), rng.randint(1, 9)))])
             for _ in range(6)]
    states = []
    for p in parts:
        M = ModularSum()
        M.add(p)
        states.append(M.state())
    A, B = ModularSum(), ModularSum()
    for s in states:
        A.merge_state(s)
    for s in reversed(states):
        B.merge_state(s)
    assert (A.acc == B.acc).all() and A.denominator == B.denominator


def test_modular_wedge_and_zero():
    S = SimpleTermSum({((1, -1),): Fraction(1), ((1, -3),): Fraction(-1)})
    M = ModularSum()
    M.add(S)
    assert M.reconstruct() == rf([2], {(1, -1): 1, (1, -3): 1})
    Z = ModularSum()
    Z.add(SimpleTermSum({((1, 0),): Fraction(1)}))
    Z.add(SimpleTermSum({((1, 0),): Fraction(1)}), scale=-1)
    assert Z.reconstruct().is_zero()


def test_modular_too_few_points_is_detected():
    S = SimpleTermSum()
    for B in range(8):
        S.add_term([(1, B)], Fraction(B + 1))
    M = ModularSum(fit=6)
    M.add(S)
    with pytest.raises(VerificationMismatch):
        M.reconstruct()
    M = ModularSum(fit=20)
    M.add(S)
    assert M.reconstruct() == interpolate(S)


def test_word_primes():
    ps = word_primes(4)
    assert ps == (2147483647, 2147483629, 2147483587, 2147483579)
