"""Euler characteristics of closed subvarieties of algebraic tori.

The pipeline: drop zero polynomials, split off torus factors, simplify the
ideal, then use the Bernstein-Khovanskii-Kushnirenko formula for
nondegenerate systems, count points of zero-dimensional ones, or eliminate
a variable X_n = w and recurse.  Anything else is reported as a failure,
never guessed.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, factorial
from typing import Iterable, Sequence

from .ideals import (PolyIdeal, grevlex_key, groebner, is_unit, jacobian_minors, normal_form, radical_contains,
                     saturate_by_coordinates, to_poly, torus_empty)
from .laurent import LaurentPolynomial
from .polyhedra.lattice import complete_to_unimodular, dot, smith_normal_form, solve_integer, vecmat
from .polyhedra.polytopes import Polytope


class EulerFailure(Exception):
    """The Euler characteristic could not be determined by the available methods."""


class Degenerate(ValueError):
    pass


@dataclass(frozen=True)
class EulerResult:
    value: int | None
    reason: str | None = None

    @property
    def failed(self) -> bool:
        return self.value is None


@dataclass(frozen=True)
class TorusVariety:
    polys: tuple[LaurentPolynomial, ...]
    n: int


# -- canonical forms ----------------------------------------------------------


def canonical_poly(f: LaurentPolynomial) -> tuple:
    g, _ = f.min_shift()
    g = g.monic()
    return tuple(sorted(g.terms.items()))


def canonical_system(polys: Iterable[LaurentPolynomial], n: int) -> tuple:
    """Key invariant under reordering, duplication, scaling and monomial shifts."""
    keys = sorted({canonical_poly(f) for f in polys if f})
    return (n, tuple(keys))


def system_hash(key: tuple) -> str:
    n, polys = key
    doc = [n, [[[list(e), c.numerator, c.denominator] for e, c in p] for p in polys]]
    return hashlib.sha256(json.dumps(doc, separators=(",", ":")).encode()).hexdigest()


# -- torus splitting ------------------------------------------------------------


def torus_split(polys: Sequence[LaurentPolynomial], n: int):
    """Return (A, reduced, torus_rank).

    With α_i the lexicographically smallest exponent of f_i, the support
    lattice M of the X^{-α_i} f_i has rank d; A ∈ GL_n(Z) from the Smith
    normal form moves M into the first d coordinates, and ``reduced`` are
    the (X^{-α_i} f_i)^A as Laurent polynomials in d variables.
    """
    shifted = []
    for f in polys:
        if not f:
            raise ValueError("zero polynomial in torus_split")
        a = min(f.terms)
        shifted.append(f.shift(tuple(-x for x in a)))
    rows = sorted({e for g in shifted for e in g.terms if any(e)})
    if not rows:
        A = [[int(i == j) for j in range(n)] for i in range(n)]
        return A, [LaurentPolynomial({(): c for c in g.terms.values()}, 0) for g in shifted], n
    _, D, A = smith_normal_form(rows)
    d = sum(1 for i in range(min(len(D), n)) if D[i][i])
    reduced = []
    for g in shifted:
        h = g.transform(A)
        reduced.append(LaurentPolynomial({e[:d]: c for e, c in h.terms.items()}, d))
    return A, reduced, n - d


def support_rank(polys: Sequence[LaurentPolynomial], n: int) -> int:
    from .polyhedra.lattice import rank

    rows = []
    for f in polys:
        a = min(f.terms)
        rows.extend(tuple(x - y for x, y in zip(e, a)) for e in f.terms if e != a)
    return rank(rows) if rows else 0


# -- rank condition (smoothness of the zero set on the torus) --------------------

_rank_cache: dict[tuple, bool] = {}
_rank_lock = threading.Lock()


def rank_condition(polys: Sequence[LaurentPolynomial], n: int) -> bool:
    """Whether at every common torus zero of the polys the Jacobian has rank = #polys."""
    polys = [f for f in polys]
    if not polys:
        return True
    if any(not f for f in polys):
        # a zero polynomial has a zero gradient everywhere on the torus
        return False
    if any(f.is_monomial() for f in polys):
        return True
    key = canonical_system(polys, n)
    if len(key[1]) != len(polys):
        # duplicates up to units: rank drops wherever they vanish
        return torus_empty_laurent(polys, n)
    got = _rank_cache.get(key)
    if got is not None:
        return got
    _, red, _ = torus_split(polys, n)
    d = red[0].nvars if red else 0
    res = _rank_condition_full(red, d)
    with _rank_lock:
        _rank_cache[key] = res
    return res


def _rank_condition_full(red: list[LaurentPolynomial], d: int) -> bool:
    if any(f.is_monomial() for f in red):
        return True
    P = [to_poly(f.clear_denominators()[0]) for f in red]
    k = len(P)
    if k > d:
        return torus_empty(P, d)
    minors = [m for m in jacobian_minors(P, d) if m]
    mon = {(1,) * d: 1}
    return radical_contains(PolyIdeal(P + minors, d), mon)


def torus_empty_laurent(polys: Sequence[LaurentPolynomial], n: int) -> bool:
    if any(f.is_monomial() for f in polys if f):
        return True
    _, red, _ = torus_split([f for f in polys if f], n)
    d = red[0].nvars if red else 0
    if any(f.is_monomial() for f in red):
        return True
    return torus_empty([to_poly(f.clear_denominators()[0]) for f in red], d)


# -- nondegeneracy and mixed volumes -----------------------------------------------


def face_directions(P: Polytope) -> list[tuple]:
    """One direction in the relative interior of each normal cone of P (0 for P itself)."""
    facets = P.facets
    verts = P.vertices
    out = []
    for face in P.faces():
        w = [0] * P.n
        for (a, _) in facets:
            if all(dot(a, (1,) + verts[i]) == 0 for i in face):
                for j, x in enumerate(a[1:]):
                    w[j] += x
        out.append(tuple(w))
    return out


def khovanskii_nondegenerate(polys: Sequence[LaurentPolynomial], n: int) -> bool:
    """Rank condition for the initial system of every face of Newton(Π f_i)."""
    polys = [f for f in polys if f]
    if not polys:
        return True
    N = None
    for f in polys:
        Q = f.newton_polytope()
        N = Q if N is None else N.minkowski_sum(Q)
    for w in face_directions(N):
        inits = [f.initial_form(w) for f in polys]
        if not rank_condition(inits, n):
            return False
    return True


def _minkowski_combination(polys: Sequence[Polytope], coeffs: Sequence[int], n: int) -> Polytope:
    acc = Polytope([(0,) * n])
    for P, a in zip(polys, coeffs):
        if a:
            acc = acc.minkowski_sum(P.scaled(a))
    return acc


def mixed_volume(polytopes: Sequence[Polytope]) -> int:
    """Normalized mixed volume, MV(P,...,P) = n!·Vol(P)."""
    n = len(polytopes)
    if n == 0:
        return 1
    if any(P.n != n for P in polytopes):
        raise ValueError("need n polytopes in R^n")
    distinct: list[Polytope] = []
    counts: list[int] = []
    for P in polytopes:
        for i, Q in enumerate(distinct):
            if Q == P:
                counts[i] += 1
                break
        else:
            distinct.append(P)
            counts.append(1)
    return _mv_grouped(distinct, counts, n, {})


def _mv_grouped(distinct, counts, n, vol_cache) -> int:
    total = 0
    for a in product(*[range(m + 1) for m in counts]):
        s = sum(a)
        if s == 0:
            continue
        v = vol_cache.get(a)
        if v is None:
            v = _minkowski_combination(distinct, a, n).normalized_volume()
            vol_cache[a] = v
        coef = 1
        for ai, mi in zip(a, counts):
            coef *= comb(mi, ai)
        total += (-1) ** (n - s) * coef * v
    # the alternating sum of normalized volumes is n! times the mixed volume
    q, r = divmod(total, factorial(n))
    assert r == 0
    return q


def bkk_euler(polys: Sequence[LaurentPolynomial], n: int) -> int:
    """Khovanskii's formula χ = (-1)^{n-k} Σ_{m_i >= 1, Σm_i = n} MV(Δ_1^{m_1}, ..., Δ_k^{m_k})."""
    polys = [f for f in polys if f]
    k = len(polys)
    if k == 0:
        return 1 if n == 0 else 0
    if k > n:
        return 0
    newton = [f.newton_polytope() for f in polys]
    if k == 1:
        return (-1) ** (n - 1) * newton[0].normalized_volume()
    cache: dict = {}
    total = 0
    for m in _compositions(n, k):
        # regroup equal polytopes so the volume cache is shared
        total += _mv_grouped(newton, list(m), n, cache)
    return (-1) ** (n - k) * total


def _compositions(n: int, k: int):
    for cuts in combinations(range(1, n), k - 1):
        b = (0,) + cuts + (n,)
        yield tuple(b[i + 1] - b[i] for i in range(k))


# -- point counting ------------------------------------------------------------------


def _standard_monomials(G: list[dict], n: int) -> list[tuple] | None:
    lms = [max(g, key=grevlex_key) for g in G]
    bounds = [None] * n
    for lm in lms:
        nz = [i for i, x in enumerate(lm) if x]
        if len(nz) == 1:
            i = nz[0]
            bounds[i] = lm[i] if bounds[i] is None else min(bounds[i], lm[i])
    if any(b is None for b in bounds):
        return None
    return [e for e in product(*[range(b) for b in bounds])
            if not any(all(x <= y for x, y in zip(lm, e)) for lm in lms)]


def _univariate_eliminant(G: list[dict], n: int, i: int, basis: list[tuple]) -> list[Fraction]:
    """Minimal polynomial of X_i modulo the zero-dimensional ideal with basis G (low degree first)."""
    pos = {e: k for k, e in enumerate(basis)}
    rows: list[list[Fraction]] = []   # echelonized normal forms, with combination tags
    combos: list[list[Fraction]] = []
    pivots: list[int] = []
    d = 0
    while True:
        e = tuple(d if j == i else 0 for j in range(n))
        vec = [Fraction(0)] * len(basis)
        for m, c in _rational_normal_form(e, G).items():
            vec[pos[m]] = c
        comb_ = [Fraction(0)] * (d + 1)
        comb_[d] = Fraction(1)
        for r, cmb, p in zip(rows, combos, pivots):
            if vec[p]:
                f = vec[p] / r[p]
                vec = [a - f * b for a, b in zip(vec, r)]
                cmb = cmb + [Fraction(0)] * (len(comb_) - len(cmb))
                comb_ = [a - f * b for a, b in zip(comb_, cmb)]
        if not any(vec):
            return comb_
        p = next(k for k, x in enumerate(vec) if x)
        rows.append(vec)
        combos.append(comb_)
        pivots.append(p)
        d += 1


def _rational_normal_form(e, G) -> dict:
    """Normal form of the monomial X^e modulo G with exact (unscaled) coefficients."""
    key = grevlex_key
    lms = [max(g, key=key) for g in G]
    p = {e: Fraction(1)}
    r: dict = {}
    while p:
        lm = max(p, key=key)
        c = p[lm]
        for g, glm in zip(G, lms):
            if all(x <= y for x, y in zip(glm, lm)):
                f = c / g[glm]
                sh = tuple(x - y for x, y in zip(lm, glm))
                for t, x in g.items():
                    u = tuple(a + b for a, b in zip(t, sh))
                    s = p.get(u, 0) - f * x
                    if s:
                        p[u] = s
                    else:
                        p.pop(u, None)
                break
        else:
            r[lm] = c
            del p[lm]
    return r


def _upoly_trim(a):
    while a and not a[-1]:
        a = a[:-1]
    return a


def _upoly_rem(a, b):
    a = list(a)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        k = len(a) - len(b)
        for j, x in enumerate(b):
            a[k + j] -= f * x
        a = _upoly_trim(a[:-1] + [a[-1]]) if a[-1] else _upoly_trim(a)
    return a


def _upoly_gcd(a, b):
    a, b = _upoly_trim(a), _upoly_trim(b)
    while b:
        a, b = b, _upoly_rem(a, b)
    return a


def _upoly_quo(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and _upoly_trim(a):
        f = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = f
        for j, x in enumerate(b):
            a[k + j] -= f * x
        a = a[:-1]
    return q


def _zero_dim_count(P: list[dict], n: int) -> int | None:
    """Number of torus points if the saturated ideal is zero-dimensional, else None.

    The radical is obtained by adding the squarefree parts of the univariate
    eliminants; the count is the number of standard monomials.
    """
    sat = saturate_by_coordinates(PolyIdeal(P, n))
    G = groebner(sat.gens)
    if is_unit(G):
        return 0
    basis = _standard_monomials(G, n)
    if basis is None:
        return None
    extra = []
    for i in range(n):
        m = _univariate_eliminant(G, n, i, basis)
        dm = [k * c for k, c in enumerate(m)][1:]
        g = _upoly_gcd(m, dm)
        if len(g) > 1:
            sq = _upoly_quo(m, g)
            extra.append(to_poly({tuple(k if j == i else 0 for j in range(n)): c
                                  for k, c in enumerate(sq) if c}))
    if extra:
        G = groebner(list(G) + extra)
        basis = _standard_monomials(G, n)
    return len(basis)


# -- simplification -----------------------------------------------------------------


def _total_support(polys) -> int:
    return sum(len(p) for p in polys)


def simplify_system(polys: Sequence[LaurentPolynomial], n: int) -> list[LaurentPolynomial] | None:
    """Simpler generators of the same torus ideal; None if the variety is empty.

    Saturate once, then reduce each generator by the others while that
    shrinks its support.
    """
    P = [to_poly(f.clear_denominators()[0]) for f in polys]
    sat = saturate_by_coordinates(PolyIdeal(P, n))
    G = groebner(sat.gens)
    if is_unit(G):
        return None
    if G and _total_support(G) < _total_support(P):
        P = [dict(g) for g in G]
    changed = True
    while changed:
        changed = False
        for i in range(len(P)):
            others = [P[j] for j in range(len(P)) if j != i and P[j]]
            if not others or not P[i]:
                continue
            h = normal_form(P[i], others)
            if len(h) < len(P[i]):
                P[i] = h
                changed = True
        P = [p for p in P if p]
    return [LaurentPolynomial(p, n) for p in P]


# -- decomposition via X_n = w ----------------------------------------------------------


_MAX_SPLIT_TERMS = 10
_MAX_DEPTH = 24
_depth = threading.local()


def _eliminations(polys: Sequence[LaurentPolynomial], n: int):
    """Yield (i, S1, A): after X ↦ X^A (and a monomial shift) f_i = X_n·u - v with u, v free of X_n.

    S1 is the set of terms landing in X_n·u.  Smaller S1 first, so the plain
    X_n = w form is preferred.
    """
    order = sorted(range(len(polys)), key=lambda i: (len(polys[i]), i))
    for size in range(1, _MAX_SPLIT_TERMS):
        for i in order:
            terms = sorted(polys[i].terms)
            if len(terms) > _MAX_SPLIT_TERMS or size >= len(terms) or 2 * size > len(terms) + 1:
                continue
            for S1 in combinations(terms, size):
                s1 = set(S1)
                S0 = [e for e in terms if e not in s1]
                base = S0[0]
                rows = [tuple(x - y for x, y in zip(e, base)) for e in S0[1:]]
                rhs = [0] * len(rows)
                for e in S1:
                    rows.append(tuple(x - y for x, y in zip(e, base)))
                    rhs.append(1)
                ell = solve_integer(rows, rhs)
                if ell is None:
                    continue
                yield i, base, complete_to_unimodular(ell, position=n - 1)


def _substitute_ratio(f: LaurentPolynomial, u: LaurentPolynomial, v: LaurentPolynomial, n: int) -> LaurentPolynomial:
    """Numerator of f(X_1..X_{n-1}, v/u) cleared by powers of u and v (n-1 vars)."""
    lo = min(e[-1] for e in f.terms)
    hi = max(e[-1] for e in f.terms)
    acc = LaurentPolynomial.zero(n - 1)
    for e, c in f.terms.items():
        k = e[-1]
        acc = acc + (v ** (k - lo) * u ** (hi - k)).shift(e[:-1], c)
    return acc


def _decompose(polys: list[LaurentPolynomial], n: int, cache) -> int | None:
    """Split along one equation written as X_n·u = v.

    Where uv ≠ 0 the torus points are those of V' = {f̃_j = 0} off {uv = 0},
    with X_n = v/u; where u = v = 0, X_n is constrained only by the others.
    """
    for i, base, A in _eliminations(polys, n):
        g = polys[i].transform(A)
        g = g.shift(tuple(-x for x in vecmat(base, A)))
        u = LaurentPolynomial({e[:-1]: c for e, c in g.terms.items() if e[-1] == 1}, n - 1)
        v = LaurentPolynomial({e[:-1]: -c for e, c in g.terms.items() if e[-1] == 0}, n - 1)
        rest = [h.transform(A) for j, h in enumerate(polys) if j != i]
        V = [h for h in (_substitute_ratio(h, u, v, n) for h in rest) if h]
        try:
            val = _euler(V, n - 1, cache) - _euler(V + [u * v], n - 1, cache)
            if not u.is_monomial():
                lift = lambda h: LaurentPolynomial({e + (0,): c for e, c in h.terms.items()}, n)
                val += _euler([lift(u), lift(v)] + rest, n, cache)
        except EulerFailure:
            continue
        return val
    return None


# -- driver -----------------------------------------------------------------------------


class EulerCache:
    """Memo of Euler characteristics keyed by canonical system hashes, optionally on disk."""

    def __init__(self, path: str | None = None):
        self.path = path
        self.values: dict[str, int | None] = {}
        self.fresh: dict[str, tuple[int, int | None]] = {}
        self._lock = threading.Lock()
        if path and os.path.exists(path):
            for lineno, rec in enumerate(read_cache_records(path), 1):
                h, n, v = rec
                self.values[h] = v

    def get(self, h: str):
        return self.values.get(h, _MISSING)

    def put(self, h: str, n: int, v: int | None):
        with self._lock:
            if h not in self.values:
                self.values[h] = v
                self.fresh[h] = (n, v)

    def merge(self, entries: dict):
        for h, (n, v) in entries.items():
            self.put(h, n, v)

    def flush(self):
        if not self.path or not self.fresh:
            return
        with self._lock:
            with open(self.path, "a") as fh:
                for h in sorted(self.fresh):
                    n, v = self.fresh[h]
                    fh.write(f"{h}\t{n}\t{'FAIL' if v is None else v}\n")
            self.fresh = {}


_MISSING = object()


class CacheFormatError(ValueError):
    pass


def read_cache_records(path: str) -> list[tuple[str, int, int | None]]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise CacheFormatError(f"line {lineno}: expected 3 fields: {line!r}")
            h, n, v = parts
            if len(h) != 64 or any(c not in "0123456789abcdef" for c in h):
                raise CacheFormatError(f"line {lineno}: bad hash: {line!r}")
            try:
                n_i = int(n)
                v_i = None if v == "FAIL" else int(v)
            except ValueError:
                raise CacheFormatError(f"line {lineno}: bad number: {line!r}") from None
            if n_i < 0:
                raise CacheFormatError(f"line {lineno}: negative dimension: {line!r}")
            out.append((h, n_i, v_i))
    return out


_default_cache = EulerCache()


def euler_characteristic(polys: Sequence[LaurentPolynomial], n: int, cache: EulerCache | None = None) -> int:
    """χ of {f_1 = ... = f_r = 0} in the n-dimensional torus; raises EulerFailure."""
    return _euler([f for f in polys], n, cache if cache is not None else _default_cache)


def euler_result(polys, n, cache=None) -> EulerResult:
    try:
        return EulerResult(euler_characteristic(polys, n, cache))
    except EulerFailure as exc:
        return EulerResult(None, str(exc))


def _euler(polys: list[LaurentPolynomial], n: int, cache: EulerCache) -> int:
    polys = [f for f in polys if f]
    if any(f.is_monomial() for f in polys):
        return 0
    if not polys:
        return 1 if n == 0 else 0
    key = canonical_system(polys, n)
    h = system_hash(key)
    got = cache.get(h)
    if got is not _MISSING:
        if got is None:
            raise EulerFailure(f"cached failure for system {h[:12]}")
        return got
    level = getattr(_depth, "level", 0)
    if level > _MAX_DEPTH:
        raise EulerFailure("decomposition too deep")
    _depth.level = level + 1
    try:
        value = _euler_uncached(polys, n, cache)
    except EulerFailure:
        if level == 0:
            cache.put(h, n, None)
        raise
    finally:
        _depth.level = level
    cache.put(h, n, value)
    return value


def _euler_uncached(polys: list[LaurentPolynomial], n: int, cache: EulerCache) -> int:
    _, red, r = torus_split(polys, n)
    if r >= 1:
        return 0
    polys = red
    if khovanskii_nondegenerate(polys, n):
        return bkk_euler(polys, n)
    simp = simplify_system(polys, n)
    if simp is None:
        return 0
    if _total_support(simp) < _total_support(polys) or len(simp) < len(polys):
        return _euler(simp, n, cache)
    if len(polys) >= n:
        cnt = _zero_dim_count([to_poly(f.clear_denominators()[0]) for f in polys], n)
        if cnt is not None:
            return cnt
    val = _decompose(polys, n, cache)
    if val is not None:
        return val
    raise EulerFailure(f"degenerate system in {n} variables: " + "; ".join(str(f) for f in polys))
