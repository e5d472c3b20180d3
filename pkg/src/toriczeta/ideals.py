"""Polynomial ideals over Q: Buchberger, radical membership, saturation, Jacobian minors.

Polynomials are dicts from exponent tuples (nonnegative) to integers; every
polynomial handled here is kept primitive (content 1, positive leading
coefficient), which is harmless since ideals over Q ignore scalars.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Callable, Iterable, Sequence

from .laurent import LaurentPolynomial

Poly = dict  # exponent tuple -> int


def grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def elimination_key(e):
    """Block order eliminating the first variable, grevlex on the rest."""
    return (e[0], sum(e[1:]), tuple(-x for x in reversed(e[1:])))


ORDERS: dict[str, Callable] = {"grevlex": grevlex_key, "elim": elimination_key}


class MoreEquationsThanVariables(ValueError):
    pass


def to_poly(f) -> Poly:
    """Primitive integer dict from a LaurentPolynomial with nonnegative exponents or a dict."""
    terms = f.terms if isinstance(f, LaurentPolynomial) else f
    if not terms:
        return {}
    den = 1
    for c in terms.values():
        c = Fraction(c)
        den = den * c.denominator // gcd(den, c.denominator)
    out = {}
    for e, c in terms.items():
        if min(e, default=0) < 0:
            raise ValueError("negative exponent in polynomial")
        out[tuple(e)] = int(Fraction(c) * den)
    return _primitive(out)


def to_laurent(p: Poly, n: int) -> LaurentPolynomial:
    return LaurentPolynomial(p, n)


def _primitive(p: Poly, key=None) -> Poly:
    if not p:
        return p
    g = 0
    for c in p.values():
        g = gcd(g, c)
        if g == 1:
            break
    lead = max(p, key=key or grevlex_key)
    if p[lead] < 0:
        g = -g
    if g != 1:
        p = {e: c // g for e, c in p.items()}
    return p


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


class _Basis:
    """Polynomials with cached leading monomials under a fixed order."""

    def __init__(self, key):
        self.key = key
        self.polys: list[Poly] = []
        self.lms: list[tuple] = []

    def add(self, p: Poly) -> int:
        self.polys.append(p)
        self.lms.append(max(p, key=self.key))
        return len(self.polys) - 1


def _reduce(f: Poly, polys: Sequence[Poly], lms: Sequence[tuple], key, active=None) -> Poly:
    """Full normal form of f (primitive) modulo the given polynomials."""
    p = dict(f)
    r: Poly = {}
    idx = range(len(polys)) if active is None else active
    while p:
        lm = max(p, key=key)
        c = p[lm]
        for i in idx:
            g_lm = lms[i]
            if _divides(g_lm, lm):
                g = polys[i]
                lc = g[g_lm]
                gg = gcd(lc, c)
                a, b = lc // gg, c // gg
                if a < 0:
                    a, b = -a, -b
                shift = tuple(x - y for x, y in zip(lm, g_lm))
                if a != 1:
                    p = {e: a * x for e, x in p.items()}
                    if r:
                        r = {e: a * x for e, x in r.items()}
                for e, x in g.items():
                    t = tuple(u + v for u, v in zip(e, shift))
                    s = p.get(t, 0) - b * x
                    if s:
                        p[t] = s
                    else:
                        p.pop(t, None)
                break
        else:
            r[lm] = c
            del p[lm]
        if p and abs(p[next(iter(p))]) > _BIG:
            # keep coefficient growth in check
            g = 0
            for x in p.values():
                g = gcd(g, x)
            for x in r.values():
                g = gcd(g, x)
            if g > 1:
                p = {e: x // g for e, x in p.items()}
                r = {e: x // g for e, x in r.items()}
    return _primitive(r, key)


_BIG = 1 << 64


def _spoly(f: Poly, g: Poly, lf, lg) -> Poly:
    L = _lcm(lf, lg)
    cf, cg = f[lf], g[lg]
    gg = gcd(cf, cg)
    a, b = cg // gg, cf // gg
    sf = tuple(x - y for x, y in zip(L, lf))
    sg = tuple(x - y for x, y in zip(L, lg))
    out: Poly = {}
    for e, x in f.items():
        t = tuple(u + v for u, v in zip(e, sf))
        out[t] = out.get(t, 0) + a * x
    for e, x in g.items():
        t = tuple(u + v for u, v in zip(e, sg))
        s = out.get(t, 0) - b * x
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return {e: x for e, x in out.items() if x}


def groebner(gens: Iterable[Poly], order: str = "grevlex") -> list[Poly]:
    """Reduced Gröbner basis (Buchberger with product and chain criteria).

    The computation stops as soon as a nonzero constant appears and returns [1].
    """
    key = ORDERS[order]
    F = [_primitive(dict(g), key) for g in gens if g]
    if not F:
        return []
    n = len(next(iter(F[0])))
    one = {(0,) * n: 1}
    B = _Basis(key)
    pairs: set[tuple[int, int]] = set()
    for f in sorted(F, key=lambda p: key(max(p, key=key))):
        h = _reduce(f, B.polys, B.lms, key)
        if not h:
            continue
        if len(h) == 1 and not any(next(iter(h))):
            return [one]
        j = B.add(h)
        for i in range(j):
            pairs.add((i, j))
    done: set[tuple[int, int]] = set()
    while pairs:
        i, j = min(pairs, key=lambda ij: (key(_lcm(B.lms[ij[0]], B.lms[ij[1]])), ij))
        pairs.discard((i, j))
        done.add((i, j))
        li, lj = B.lms[i], B.lms[j]
        if _coprime(li, lj):
            continue
        L = _lcm(li, lj)
        skip = False
        for k in range(len(B.polys)):
            if k == i or k == j:
                continue
            if _divides(B.lms[k], L):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik not in pairs and pjk not in pairs:
                    skip = True
                    break
        if skip:
            continue
        s = _spoly(B.polys[i], B.polys[j], li, lj)
        h = _reduce(s, B.polys, B.lms, key)
        if not h:
            continue
        if len(h) == 1 and not any(next(iter(h))):
            return [one]
        k = B.add(h)
        for t in range(k):
            pairs.add((t, k))
    return _interreduce(B.polys, key)


def _interreduce(polys: list[Poly], key) -> list[Poly]:
    lms = [max(p, key=key) for p in polys]
    keep = []
    for i, p in enumerate(polys):
        dominated = False
        for j in range(len(polys)):
            if j != i and _divides(lms[j], lms[i]) and (lms[j] != lms[i] or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    G = [polys[i] for i in keep]
    L = [lms[i] for i in keep]
    out = []
    for i in range(len(G)):
        others = [t for t in range(len(G)) if t != i]
        h = _reduce(G[i], G, L, key, active=others)
        out.append(h)
    out.sort(key=lambda p: key(max(p, key=key)))
    return out


def normal_form(f: Poly, G: Sequence[Poly], order: str = "grevlex") -> Poly:
    key = ORDERS[order]
    return _reduce(_primitive(dict(f), key), list(G), [max(g, key=key) for g in G], key)


def is_unit(G: Sequence[Poly]) -> bool:
    return any(len(g) == 1 and not any(next(iter(g))) for g in G)


class PolyIdeal:
    """Ideal of Q[X_1..X_n] given by generators; the basis is computed on demand."""

    def __init__(self, gens: Iterable, nvars: int, order: str = "grevlex"):
        self.nvars = nvars
        self.order = order
        self.gens = [p for p in (to_poly(g) for g in gens) if p]
        self._gb = None

    def groebner_basis(self) -> list[Poly]:
        if self._gb is None:
            self._gb = groebner(self.gens, self.order)
        return self._gb

    def contains(self, f) -> bool:
        return not normal_form(to_poly(f), self.groebner_basis(), self.order)

    def is_unit(self) -> bool:
        return is_unit(self.groebner_basis())


def groebner_basis(I: PolyIdeal) -> list[Poly]:
    return I.groebner_basis()


def _extend(p: Poly, front: int = 0, back: int = 0) -> Poly:
    return {(0,) * front + e + (0,) * back: c for e, c in p.items()}


def radical_contains(I: PolyIdeal, g) -> bool:
    """g ∈ √I, via 1 ∈ I + ⟨1 − T·g⟩ with one extra variable T (placed last)."""
    g = to_poly(g)
    if not g:
        return True
    gens = [_extend(p, back=1) for p in I.gens]
    n = I.nvars
    rab = {(0,) * (n + 1): 1}
    for e, c in g.items():
        t = e + (1,)
        rab[t] = rab.get(t, 0) - c
    gens.append(rab)
    return is_unit(groebner(gens, "grevlex"))


def torus_empty(polys: Sequence[Poly], n: int) -> bool:
    """Whether the polynomials have no common zero in the torus (X_1⋯X_n invertible)."""
    if not polys:
        return False
    mon = {(1,) * n: 1}
    return radical_contains(PolyIdeal(polys, n), mon)


def saturate_by_coordinates(I: PolyIdeal) -> PolyIdeal:
    """I : (X_1⋯X_n)^∞ via the extra variable T (first) and an elimination order."""
    n = I.nvars
    if not I.gens:
        return PolyIdeal([], n, I.order)
    gens = [_extend(p, front=1) for p in I.gens]
    t = {(0,) * (n + 1): 1, (1,) * (n + 1): -1}
    gens.append(t)
    G = groebner(gens, "elim")
    out = [{e[1:]: c for e, c in g.items()} for g in G if all(e[0] == 0 for e in g)]
    J = PolyIdeal([], n, I.order)
    J.gens = out
    return J


def _poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            s = out.get(e, 0) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _poly_add(a: Poly, b: Poly, scale: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + scale * c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _derivative(p: Poly, i: int) -> Poly:
    out = {}
    for e, c in p.items():
        if e[i]:
            f = list(e)
            f[i] -= 1
            out[tuple(f)] = c * e[i]
    return out


def jacobian_minors(polys: Sequence, n: int) -> list[Poly]:
    """All k×k minors (k = number of polys) of the Jacobian matrix, in column-subset order."""
    P = [to_poly(p) if not isinstance(p, dict) else p for p in polys]
    k = len(P)
    if k > n:
        raise MoreEquationsThanVariables(f"{k} polynomials in {n} variables")
    if k == 0:
        return [{(0,) * n: 1}]
    J = [[_derivative(p, j) for j in range(n)] for p in P]
    # minors of the first t rows, indexed by column subsets
    prev: dict[tuple[int, ...], Poly] = {(): {(0,) * n: 1}}
    for t in range(k):
        cur: dict[tuple[int, ...], Poly] = {}
        for S in combinations(range(n), t + 1):
            acc: Poly = {}
            for pos, j in enumerate(S):
                sub = S[:pos] + S[pos + 1:]
                m = prev.get(sub)
                if not m or not J[t][j]:
                    continue
                sign = 1 if pos % 2 == t % 2 else -1
                acc = _poly_add(acc, _poly_mul(J[t][j], m), sign)
            cur[S] = acc
        prev = cur
    return [prev[S] for S in combinations(range(n), k)]
