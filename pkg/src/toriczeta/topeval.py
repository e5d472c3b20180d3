"""Topological evaluation of regular toric data and recovery of the final rational function.

For a regular datum the topological zeta function is Σ_J e_J · W_J(s) where
e_J is a signed sum of Euler characteristics of initial-form varieties and
W_J is read off a triangulation of an auxiliary cone C0^J: each top-dimensional
simplicial cone σ contributes mult(σ) / Π_ρ ⟨ρA, (1, s_1, ..., s_m)⟩.  The
specialization s_j ↦ s - c_j is applied to every factor on the spot, so a
contribution is a sum of terms c / Π (A·s - B).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd, isqrt
from typing import Iterable, Sequence

import numpy as np

from .euler import EulerCache, euler_characteristic, support_rank, torus_split
from .laurent import LaurentPolynomial
from .polyhedra.cones import DimensionMismatch, HalfOpenCone
from .polyhedra.lattice import dot
from .polyhedra.triangulation import triangulate
from .toric import ToricDatum

Factor = tuple[int, int]  # (A, B) meaning A·s - B, with A > 0 and gcd(A, B) = 1


class BadGamma(ValueError):
    pass


class VerificationMismatch(ArithmeticError):
    pass


class SimpleTermSum(dict):
    """Mapping from a sorted tuple of linear factors to its total coefficient."""

    def add_term(self, factors: Sequence[Factor], coef) -> None:
        if not coef:
            return
        key = tuple(sorted(factors))
        v = self.get(key, 0) + Fraction(coef)
        if v:
            self[key] = v
        else:
            self.pop(key, None)

    def merge(self, other: "SimpleTermSum", scale=1) -> None:
        for key, v in other.items():
            self.add_term(key, scale * v)

    def evaluate(self, s) -> Fraction:
        s = Fraction(s)
        vals: dict[Factor, Fraction] = {}
        total = Fraction(0)
        for key, c in self.items():
            den = Fraction(1)
            for f in key:
                v = vals.get(f)
                if v is None:
                    v = vals[f] = f[0] * s - f[1]
                den *= v
            total += c / den
        return total

    def to_list(self) -> list:
        return [[[list(f) for f in key], v.numerator, v.denominator] for key, v in sorted(self.items())]

    @classmethod
    def from_list(cls, data) -> "SimpleTermSum":
        S = cls()
        for key, a, b in data:
            S.add_term([tuple(f) for f in key], Fraction(a, b))
        return S


def normalize_factor(A: int, B: int) -> tuple[Factor | None, Fraction]:
    """(factor, scalar) with A·s - B = scalar·factor; factor None for constants."""
    if A == 0:
        return None, Fraction(-B)
    g = gcd(A, B)
    if A < 0:
        g = -g
    return (A // g, B // g), Fraction(g)


# -- the auxiliary cones ---------------------------------------------------------------


def choose_gamma(T: ToricDatum) -> list[tuple]:
    inits = T.initial_forms()
    return [min(g.terms) for g in inits]


def cone_CJ(T: ToricDatum, J: Sequence[int], gamma: Sequence[tuple]) -> HalfOpenCone:
    """(C0 × strict orthant^J) ∩ {⟨γ_i, ξ⟩ + ⟨δ_iJ, o⟩ >= 0 for all i}."""
    inits = T.initial_forms()
    for g, gi in zip(inits, gamma):
        if tuple(gi) not in g.terms:
            raise BadGamma(f"{gi} is not an exponent of {g}")
    k = len(J)
    pos = {j: t for t, j in enumerate(J)}
    weak = []
    for i, gi in enumerate(gamma):
        extra = [0] * k
        if i in pos:
            extra[pos[i]] = 1
        weak.append(tuple(gi) + tuple(extra))
    return T.cone.product_with_orthant(k, strict=True).refine(weak=weak)


def wj_reduction(C: HalfOpenCone, beta: Sequence[Sequence[int]], shifts: Sequence[int], d: int,
                 order=None, method: str = "placing") -> SimpleTermSum:
    """Reduction mod q-1 of (q-1)^d times the substituted generating function of C.

    Only top-dimensional simplicial cones of a triangulation of the closure
    contribute; the result is empty when dim C < d.
    """
    S = SimpleTermSum()
    if C.is_empty():
        return S
    dim = C.dim
    if dim > d:
        raise DimensionMismatch(f"cone of dimension {dim} exceeds {d}")
    if dim < d:
        return S
    n = len(beta[0]) if beta else 0
    per_ray: dict = {}  # ray -> (normalized factor or None, scale)

    def factor_of(rho):
        got = per_ray.get(rho)
        if got is None:
            A = 0
            B = -sum(rho)
            for bj, cj in zip(beta, shifts):
                v = dot(bj, rho[:n])
                A += v
                B += cj * v
            f, scale = normalize_factor(A, B)
            got = per_ray[rho] = (f, int(scale))
        return got

    for sigma in triangulate(C.closure(), order=order, method=method):
        if len(sigma.rays) != d:
            continue
        den = 1
        factors = []
        for rho in sigma.rays:
            f, scale = factor_of(rho)
            den *= scale
            if f is not None:
                factors.append(f)
        S.add_term(factors, Fraction(sigma.multiplicity(), den))
    return S


# -- Euler coefficients ---------------------------------------------------------------------


def _torus_part_euler(polys: list[LaurentPolynomial], n: int, cache) -> int:
    """χ(U) where V(polys) ≅ U × torus, U in the torus of dimension d(polys)."""
    if not polys:
        return 1
    _, red, _ = torus_split(polys, n)
    d = red[0].nvars
    return euler_characteristic(red, d, cache)


class EulerTable:
    """χ(U_T) for the subsets T of one datum, computed on demand."""

    def __init__(self, T: ToricDatum, cache: EulerCache | None):
        self.inits = T.initial_forms()
        self.n = T.n
        self.cache = cache
        self.dims: dict[tuple, int] = {}
        self.chis: dict[tuple, int] = {}

    def d(self, Tp: tuple) -> int:
        got = self.dims.get(Tp)
        if got is None:
            got = self.dims[Tp] = support_rank([self.inits[i] for i in Tp], self.n) if Tp else 0
        return got

    def chi(self, Tp: tuple) -> int:
        got = self.chis.get(Tp)
        if got is None:
            got = self.chis[Tp] = _torus_part_euler([self.inits[i] for i in Tp], self.n, self.cache)
        return got


def euler_coefficient(T: ToricDatum, J: Sequence[int], dim_CJ: int | None = None,
                      cache: EulerCache | None = None, table: EulerTable | None = None) -> int:
    """e_J = Σ_{T' ⊇ J, n - d(T') + |J| = dim C0^J} (-1)^{|J|+|T'|} χ(U_T')."""
    J = tuple(J)
    if table is None:
        table = EulerTable(T, cache)
    if dim_CJ is None:
        C = cone_CJ(T, J, choose_gamma(T))
        if C.is_empty():
            return 0
        dim_CJ = C.dim
    r = len(table.inits)
    rest = [i for i in range(r) if i not in J]
    total = 0
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            Tp = tuple(sorted(J + extra))
            if T.n - table.d(Tp) + len(J) != dim_CJ:
                continue
            total += (-1) ** k * table.chi(Tp)
    return total


def evaluate_topologically(T: ToricDatum, beta, shifts, cache: EulerCache | None = None,
                           gamma=None, order=None, method: str = "placing",
                           stats: dict | None = None) -> SimpleTermSum:
    out = SimpleTermSum()
    if T.is_trivial():
        return out
    inits = T.initial_forms()
    if inits is None:
        raise ValueError("evaluate_topologically needs a balanced datum")
    r = len(inits)
    if gamma is None:
        gamma = choose_gamma(T)
    table = EulerTable(T, cache)
    dim_tau = table.d(tuple(range(r)))
    for k in range(r + 1):
        for J in combinations(range(r), k):
            C = cone_CJ(T, J, gamma)
            if C.is_empty():
                continue
            dimC = C.dim
            e = euler_coefficient(T, J, dimC, table=table)
            if stats is not None:
                stats["subsets"] = stats.get("subsets", 0) + 1
            if not e:
                continue
            W = wj_reduction(C, beta, shifts, T.n - dim_tau + k, order=order, method=method)
            if stats is not None:
                stats["terms"] = stats.get("terms", 0) + len(W)
            out.merge(W, e)
    return out


# -- one-variable rational functions ------------------------------------------------------------


def candidate_denominator(S: SimpleTermSum) -> Counter:
    g: Counter = Counter()
    for key in S:
        for f, m in Counter(key).items():
            if m > g[f]:
                g[f] = m
    return g


def _poly_eval(p: Sequence, s):
    acc = 0
    for c in reversed(p):
        acc = acc * s + c
    return acc


def _lagrange(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients (ascending) of the interpolating polynomial, by Newton divided differences."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly*(x - xs[i]) + coef[i]
        new = [Fraction(0)] * n
        for k in range(n - 1):
            if poly[k]:
                new[k + 1] += poly[k]
                new[k] -= xs[i] * poly[k]
        new[0] += coef[i]
        poly = new
    while poly and not poly[-1]:
        poly.pop()
    return poly


def _divide_linear(p: list, A: int, B: int) -> list | None:
    """p / (A·s - B) if exact."""
    # synthetic division by (s - B/A)
    r = Fraction(B, A)
    n = len(p)
    q = [Fraction(0)] * (n - 1)
    acc = Fraction(0)
    for k in range(n - 1, 0, -1):
        acc = acc * r + p[k]
        q[k - 1] = acc
    rem = acc * r + p[0]
    if rem:
        return None
    return [c / A for c in q]


@dataclass(frozen=True)
class RationalFunction1V:
    """numerator(s) / (constant · Π (A·s - B)^m), in lowest terms.

    The numerator has integer coefficients (ascending powers), the constant is
    a positive integer coprime to the numerator's content, and no factor divides
    the numerator.
    """
    numerator: tuple
    constant: int
    factors: tuple  # sorted ((A, B), m)

    @classmethod
    def build(cls, numerator: Sequence, factors: Counter | dict, constant=1) -> "RationalFunction1V":
        num = [Fraction(c) for c in numerator]
        while num and not num[-1]:
            num.pop()
        if not num:
            return cls((), 1, ())
        fac = Counter()
        const = Fraction(constant)
        for (A, B), m in dict(factors).items():
            f, scale = normalize_factor(A, B)
            if f is None:
                const *= scale ** m
            else:
                fac[f] += m
                const *= scale ** m
        for f in sorted(fac):
            while fac[f]:
                q = _divide_linear(num, *f)
                if q is None:
                    break
                num = q
                fac[f] -= 1
        # numerator = ints/den, so f = ints·cd / (cn·Π) with cn/cd = den·const
        den = 1
        for c in num:
            den = den * c.denominator // gcd(den, c.denominator)
        total = const * den
        cn, cd = total.numerator, total.denominator
        ints = [int(c * den) * cd for c in num]
        g = cn
        for c in ints:
            g = gcd(g, c)
        if cn < 0:
            g = -g
        ints = [c // g for c in ints]
        cn //= g
        return cls(tuple(ints), cn, tuple(sorted((f, m) for f, m in fac.items() if m)))

    def is_zero(self) -> bool:
        return not self.numerator

    def __call__(self, s) -> Fraction:
        s = Fraction(s)
        den = Fraction(self.constant)
        for (A, B), m in self.factors:
            den *= (A * s - B) ** m
        return _poly_eval(self.numerator, s) / den

    @property
    def degree(self) -> int:
        if self.is_zero():
            return -(10 ** 9)
        return len(self.numerator) - 1 - sum(m for _, m in self.factors)

    def denominator_polynomial(self) -> list[int]:
        p = [self.constant]
        for (A, B), m in self.factors:
            for _ in range(m):
                new = [0] * (len(p) + 1)
                for k, c in enumerate(p):
                    new[k + 1] += A * c
                    new[k] -= B * c
                p = new
        return p

    def magic(self, d: int) -> Fraction | None:
        """lim_{s→∞} s^d·f(s), i.e. f(1/s)·s^{-d} at s = 0 (None if infinite)."""
        if self.is_zero():
            return Fraction(0)
        k = sum(m for _, m in self.factors)
        e = k - (len(self.numerator) - 1) - d  # leftover power of s at s = 0
        if e < 0:
            return None
        if e > 0:
            return Fraction(0)
        den = Fraction(self.constant)
        for (A, _), m in self.factors:
            den *= A ** m
        return Fraction(self.numerator[-1]) / den

    def to_dict(self) -> dict:
        return {"numerator": list(self.numerator), "constant": self.constant,
                "factors": [[A, B, m] for (A, B), m in self.factors]}

    @classmethod
    def from_dict(cls, d: dict) -> "RationalFunction1V":
        return cls.build(d["numerator"], Counter({(A, B): m for A, B, m in d["factors"]}), d["constant"])

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k in range(len(self.numerator) - 1, -1, -1):
            c = self.numerator[k]
            if not c:
                continue
            mon = "" if k == 0 else ("s" if k == 1 else f"s^{k}")
            if mon and abs(c) == 1:
                t = mon
            else:
                t = f"{abs(c)}" + (f"*{mon}" if mon else "")
            terms.append(("-" if c < 0 else "+") + t)
        num = " ".join(terms).lstrip("+")
        if num.startswith("-"):
            num = "-" + num[1:]
        num = num.replace("+", "+ ").replace(" -", " - ")
        parts = [] if self.constant == 1 else [str(self.constant)]
        for (A, B), m in self.factors:
            lin = ("s" if A == 1 else f"{A}*s")
            if B:
                lin += f" - {B}" if B > 0 else f" + {-B}"
            parts.append(f"({lin})" + (f"^{m}" if m > 1 else ""))
        den = "*".join(parts) or "1"
        return f"({num}) / ({den})"


def evaluation_points(g: Counter, count: int) -> list[Fraction]:
    M = 1
    for (A, B) in g:
        M = max(M, 1 + -(-B // A))
    return [Fraction(M + k) for k in range(count)]


def interpolate(S: SimpleTermSum, g: Counter | None = None) -> RationalFunction1V:
    """Recover S as numerator/g by exact evaluation, interpolation and one check point."""
    if g is None:
        g = candidate_denominator(S)
    deg = sum(g.values())
    pts = evaluation_points(g, deg + 2)
    vals = [numerator_value(S, g, s) for s in pts]
    num = _lagrange(pts[:-1], vals[:-1])
    if _poly_eval(num, pts[-1]) != vals[-1]:
        raise VerificationMismatch("numerator does not match at the check point")
    if len(num) - 1 > deg:
        raise VerificationMismatch("numerator degree exceeds the candidate denominator")
    return RationalFunction1V.build(num, g)


def numerator_value(S: SimpleTermSum, g: Counter, s: Fraction) -> Fraction:
    """g(s)·S(s) computed term by term without division."""
    vals = {f: f[0] * s - f[1] for f in g}
    total = Fraction(0)
    for key, c in S.items():
        have = Counter(key)
        prod = c
        for f, m in g.items():
            e = m - have.get(f, 0)
            if e:
                prod *= vals[f] ** e
        total += prod
    return total


def numerator_values(S: SimpleTermSum, g: Counter, pts: Iterable[Fraction]) -> list[Fraction]:
    return [numerator_value(S, g, s) for s in pts]


# -- streaming modular accumulation -------------------------------------------------------
#
# A large problem produces millions of distinct terms, so the global sum is never
# materialized.  Every datum's terms are folded into residues of S(s_k) modulo a few
# word-size primes at fixed points s_k.  At the end each prime gives a rational function
# by interpolation and extended Euclid, and the coefficients are lifted by CRT and
# rational number reconstruction.  Addition mod p is order-free, so the result does
# not depend on how data are distributed over workers.

FIT_POINTS = 56
CHECK_POINTS = 4
NUM_PRIMES = 8
POINT_BASE = 1_000_003
_CHUNK = 4096


@lru_cache(maxsize=None)
def word_primes(count: int, below: int = 2 ** 31) -> tuple[int, ...]:
    out = []
    c = below - 1
    while len(out) < count:
        if c % 2 and all(c % q for q in range(3, isqrt(c) + 1, 2)):
            out.append(c)
        c -= 2 if c % 2 else 1
    return tuple(out)


_tables: dict = {}


def _factor_table(f: Factor, primes: tuple, points: tuple):
    """Inverses of A·s_k - B mod p as a (primes, points) array; 0 where it vanishes."""
    key = (f, primes, points)
    t = _tables.get(key)
    if t is None:
        A, B = f
        rows = []
        for p in primes:
            row = []
            for s in points:
                v = (A * s - B) % p
                row.append(pow(v, -1, p) if v else 0)
            rows.append(row)
        t = _tables[key] = np.array(rows, dtype=np.int64)
    return t


class ModularSum:
    """Residues of a SimpleTermSum at fixed points modulo fixed primes."""

    def __init__(self, nprimes: int = NUM_PRIMES, fit: int = FIT_POINTS, check: int = CHECK_POINTS):
        self.primes = word_primes(nprimes)
        self.points = tuple(POINT_BASE + k for k in range(fit + check))
        self.check = check
        self.acc = np.zeros((nprimes, fit + check), dtype=np.int64)
        self.poison = np.zeros((nprimes, fit + check), dtype=bool)
        self.denominator: Counter = Counter()  # largest multiplicity of each factor seen
        self.terms = 0

    @property
    def _p(self):
        return np.array(self.primes, dtype=np.int64)[:, None]

    def add(self, S: SimpleTermSum, scale=1) -> None:
        if not S:
            return
        self.terms += len(S)
        factors = sorted({f for key in S for f in key})
        fid = {f: i for i, f in enumerate(factors)}
        tabs = np.stack([_factor_table(f, self.primes, self.points) for f in factors] or
                        [np.zeros_like(self.acc)])
        for f in factors:
            self.poison |= tabs[fid[f]] == 0
        for key in S:
            for f, m in Counter(key).items():
                if m > self.denominator[f]:
                    self.denominator[f] = m
        pcol = self._p
        by_len: dict[int, list] = {}
        for key, c in S.items():
            by_len.setdefault(len(key), []).append((key, c * scale))
        inv_cache: dict = {}
        for L, items in sorted(by_len.items()):
            coef = np.empty((len(items), len(self.primes)), dtype=np.int64)
            for j, p in enumerate(self.primes):
                col = []
                for _, c in items:
                    d = c.denominator
                    inv = inv_cache.get((d, p))
                    if inv is None:
                        inv = inv_cache[(d, p)] = pow(d % p, -1, p)
                    col.append(c.numerator % p * inv % p)
                coef[:, j] = col
            ids = np.array([[fid[f] for f in key] for key, _ in items], dtype=np.int64).reshape(len(items), L)
            for lo in range(0, len(items), _CHUNK):
                prod = np.broadcast_to(coef[lo:lo + _CHUNK, :, None],
                                       (min(_CHUNK, len(items) - lo),) + self.acc.shape)
                for j in range(L):
                    prod = prod * tabs[ids[lo:lo + _CHUNK, j]] % pcol
                self.acc = (self.acc + prod.sum(axis=0) % pcol) % pcol

    def state(self) -> tuple:
        return (self.acc, self.poison, dict(self.denominator), self.terms)

    def merge_state(self, state: tuple) -> None:
        acc, poison, den, terms = state
        self.acc = (self.acc + acc) % self._p
        self.poison |= poison
        for f, m in den.items():
            if m > self.denominator[f]:
                self.denominator[f] = m
        self.terms += terms

    def reconstruct(self) -> "RationalFunction1V":
        if not self.acc.any():
            return RationalFunction1V.build([], {})
        shapes: dict[tuple, list] = {}
        for i, p in enumerate(self.primes):
            got = self._solve_mod(i)
            if got is not None:
                num, den = got
                shapes.setdefault((len(num), len(den)), []).append((p, num, den))
        if not shapes:
            raise VerificationMismatch("no prime gave a consistent rational function; "
                                       "the result may need more evaluation points")
        # a prime dividing a leading coefficient gives a smaller shape; take the largest group
        sols = max(shapes.values(), key=len)
        coeffs = None
        for k in range(1, len(sols)):
            coeffs = _lift([s[1] + s[2] for s in sols[:k]], [s[0] for s in sols[:k]])
            if coeffs is not None and all(_agrees(coeffs, s[1] + s[2], s[0]) for s in sols[k:]):
                break
            coeffs = None
        if coeffs is None:
            raise VerificationMismatch("rational reconstruction did not stabilize over the primes")
        nn = len(sols[0][1])
        num, den = coeffs[:nn], coeffs[nn:]
        fac: Counter = Counter()
        for f in sorted(self.denominator):
            while len(den) > 1:
                q = _divide_linear(den, *f)
                if q is None:
                    break
                den = q
                fac[f] += 1
        if len(den) != 1:
            raise VerificationMismatch("denominator has a factor outside the candidate set")
        return RationalFunction1V.build(num, fac, den[0])

    def _solve_mod(self, i: int):
        p = self.primes[i]
        keep = [k for k in range(len(self.points)) if not self.poison[i, k]]
        if len(keep) <= self.check:
            return None
        xs = [self.points[k] for k in keep]
        ys = [int(self.acc[i, k]) for k in keep]
        fit = len(xs) - self.check
        num, den = _rational_interpolation_mod(xs[:fit], ys[:fit], p)
        for x, y in zip(xs[fit:], ys[fit:]):
            dv = _peval_mod(den, x, p)
            if not dv or _peval_mod(num, x, p) * pow(dv, -1, p) % p != y:
                return None
        return num, den


# -- polynomials over Z/p, ascending coefficient lists --------------------------------------


def _trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _peval_mod(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def _psub_mul(a, q, b, p):
    """a - q·b mod p."""
    out = list(a) + [0] * max(0, len(q) + len(b) - 1 - len(a))
    for i, qi in enumerate(q):
        if qi:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] - qi * bj) % p
    return _trim(out)


def _pdivmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for j, bj in enumerate(b):
            a[k + j] = (a[k + j] - c * bj) % p
        _trim(a)
    return _trim(q), a


def _rational_interpolation_mod(xs, ys, p):
    """num, den (den monic) with num/den = y at every x and deg num + deg den minimal."""
    n = len(xs)
    coef = [y % p for y in ys]  # Newton divided differences
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * pow(xs[i] - xs[i - j], -1, p) % p
    P: list = []
    for i in range(n - 1, -1, -1):
        P = _psub_mul([0] + P, [xs[i] % p], P, p) if P else []  # P·(x - x_i)
        P = P or [0]
        P[0] = (P[0] + coef[i]) % p
    M = [1]
    for x in xs:
        M = _psub_mul([0] + M, [x % p], M, p)  # M·x - x_k·M
    r0, r1, t0, t1 = M, _trim(P), [], [1]
    best = None
    while r1:
        size = len(r1) + len(t1)
        if best is None or size < best[0]:
            best = (size, r1, t1)
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        t0, t1 = t1, _psub_mul(t0, q, t1, p)
    _, num, den = best
    inv = pow(den[-1], -1, p)
    return [c * inv % p for c in num], [c * inv % p for c in den]


def _crt(residues, primes):
    x, m = 0, 1
    for r, p in zip(residues, primes):
        x += m * ((r - x) * pow(m, -1, p) % p)
        m *= p
    return x, m


def _ratrecon(a: int, m: int) -> Fraction | None:
    """The fraction r/t ≡ a (mod m) with |r|, t <= sqrt(m/2), if any."""
    bound = isqrt(m // 2)
    r0, r1, t0, t1 = m, a % m, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


def _lift(residue_vectors, primes):
    out = []
    for col in zip(*residue_vectors):
        x, m = _crt(col, primes)
        f = _ratrecon(x, m)
        if f is None:
            return None
        out.append(f)
    return out


def _agrees(coeffs, residues, p) -> bool:
    return all((c.numerator - r * c.denominator) % p == 0 for c, r in zip(coeffs, residues))
