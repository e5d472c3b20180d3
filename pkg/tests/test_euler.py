import random
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from toriczeta.euler import (CacheFormatError, EulerCache, EulerFailure, bkk_euler, canonical_system,
                             euler_characteristic, euler_result, khovanskii_nondegenerate, mixed_volume,
                             read_cache_records, system_hash, torus_split)
from toriczeta.laurent import LaurentPolynomial
from toriczeta.polyhedra import Polytope

x = LaurentPolynomial.var
one = LaurentPolynomial.const


def test_torus_split_examples():
    A, red, r = torus_split([x(0, 2) - x(1, 2)], 2)
    assert r == 1 and red[0].nvars == 1
    assert sorted(red[0].terms.values()) == [-1, 1] and len(red[0]) == 2
    _, red, r = torus_split([LaurentPolynomial.monomial((2, -1), 3)], 2)
    assert red[0].nvars == 0 and red[0].is_constant()
    f = x(0, 2) + one(1, 2)
    A, red, r = torus_split([f], 2)
    assert r == 1 and red == [x(0, 1) + one(1, 1)]


def test_nondegeneracy_examples():
    assert khovanskii_nondegenerate([x(0, 2) + x(1, 2) + one(1, 2)], 2)
    lin = x(1, 2) - x(0, 2)
    quad = x(1, 2) * x(1, 2) - x(0, 2) * x(0, 2)
    assert not khovanskii_nondegenerate([lin, quad], 2)
    assert khovanskii_nondegenerate([], 3)


def _simplex(n):
    return Polytope([tuple(int(i == j) for j in range(n)) for i in range(-1, n)])


def test_mixed_volume_examples():
    assert mixed_volume([_simplex(2), _simplex(2)]) == 1
    assert mixed_volume([Polytope([(0, 0), (1, 0)]), Polytope([(0, 0), (0, 1)])]) == 1
    for n in (1, 2, 3):
        cube = Polytope([tuple((k >> i) & 1 for i in range(n)) for k in range(2 ** n)])
        assert mixed_volume([cube] * n) == factorial(n)


def test_bkk_examples():
    line = x(0, 2) + x(1, 2) + one(1, 2)
    assert bkk_euler([line], 2) == -1
    assert bkk_euler([x(0, 1) + one(1, 1)], 1) == 1
    # hypersurface case: (-1)^(n-1) n! Vol
    assert bkk_euler([line], 2) == (-1) ** 1 * line.newton_polytope().normalized_volume()


def test_euler_examples():
    assert euler_characteristic([x(0, 2) - x(1, 2)], 2) == 0
    for n in range(1, 5):
        assert euler_characteristic([], n) == 0
    assert euler_characteristic([], 0) == 1
    assert euler_characteristic([x(0, 2) + x(1, 2) + one(1, 2)], 2) == -1
    assert euler_characteristic([LaurentPolynomial.zero(2), x(0, 2) + x(1, 2) + one(1, 2)], 2) == -1
    assert euler_characteristic([one(3, 2)], 2) == 0


def test_degenerate_hypersurfaces_by_decomposition():
    X1, X2, o = x(0, 2), x(1, 2), one(1, 2)
    # two coordinate lines through (1,1): 0 + 0 - 1
    assert euler_characteristic([(X1 - o) * (X2 - o)], 2) == -1
    # graph of (X1+1)^2 over the torus minus X1 = -1
    assert euler_characteristic([X2 - (X1 + o) * (X1 + o)], 2) == -1
    y = x(0, 1)
    assert euler_characteristic([(y - one(1, 1)) * (y - one(2, 1))], 1) == 2
    assert euler_characteristic([(y - one(1, 1)) * (y - one(1, 1))], 1) == 1


def test_failure_is_explicit():
    X1, X2, o = x(0, 2), x(1, 2), one(1, 2)
    sq = (X1 + X2 + o) * (X1 + X2 + o)
    res = euler_result([sq], 2, EulerCache())
    assert res.failed and res.reason
    with pytest.raises(EulerFailure):
        euler_characteristic([sq], 2, EulerCache())


def test_cache_roundtrip(tmp_path):
    path = str(tmp_path / "chi.tsv")
    c = EulerCache(path)
    f = x(0, 2) + x(1, 2) + one(1, 2)
    assert euler_characteristic([f], 2, c) == -1
    c.flush()
    recs = read_cache_records(path)
    assert recs
    again = EulerCache(path)
    h = system_hash(canonical_system([f], 2))
    assert again.get(h) == -1


def test_corrupt_cache_rejected(tmp_path):
    p = tmp_path / "bad.tsv"
    p.write_text("nothex\t2\t5\n")
    with pytest.raises(CacheFormatError):
        read_cache_records(str(p))


# -- properties -------------------------------------------------------------------------

seeds = st.integers(0, 10 ** 6)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_binomial_subtori_have_zero_euler_characteristic(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    a = [rng.randint(0, 3) for _ in range(n)]
    b = [rng.randint(0, 3) for _ in range(n)]
    if a == b:
        b[0] += 1
    f = LaurentPolynomial({tuple(a): 1, tuple(b): -rng.choice([1, 2])}, n)
    assert euler_characteristic([f], n, EulerCache()) == 0


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_product_with_torus_is_zero(seed):
    # a curve in T^2 times an extra torus factor
    rng = random.Random(seed)
    coeffs = [rng.choice([1, -1, 2, 3]) for _ in range(3)]
    exps = [(0, 0, 0), (rng.randint(1, 2), 0, 0), (0, rng.randint(1, 2), 0)]
    f = LaurentPolynomial(dict(zip(exps, coeffs)), 3)
    _, _, r = torus_split([f], 3)
    assert r >= 1
    assert euler_characteristic([f], 3, EulerCache()) == 0


pts2 = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1, max_size=4)


@settings(max_examples=30, deadline=None)
@given(pts2, pts2, pts2)
def test_mixed_volume_symmetric_and_additive(p, q, r):
    P, Q, R = Polytope(p), Polytope(q), Polytope(r)
    assert mixed_volume([P, R]) == mixed_volume([R, P])
    assert mixed_volume([P.minkowski_sum(Q), R]) == mixed_volume([P, R]) + mixed_volume([Q, R])


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_cache_key_stable(seed):
    rng = random.Random(seed)
    terms = {(rng.randint(-1, 2), rng.randint(-1, 2)): rng.choice([1, -1, 2]) for _ in range(3)}
    f = LaurentPolynomial(terms, 2)
    if not f:
        return
    g = f.shift((1, -1), 3)
    assert canonical_system([f], 2) == canonical_system([g, f], 2)
    assert euler_result([f], 2, EulerCache()) == euler_result([g], 2, EulerCache())
