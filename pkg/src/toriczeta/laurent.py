"""Exact Laurent polynomials over Q with dense integer exponent vectors."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .polyhedra.cones import EmptyConeError, HalfOpenCone
from .polyhedra.lattice import dot, vecmat
from .polyhedra.polytopes import Polytope

Exponent = tuple[int, ...]


class ZeroPolynomial(ValueError):
    pass


class NotBalanced(Exception):
    pass


class LaurentPolynomial:
    """Immutable finite map exponent -> nonzero rational."""

    __slots__ = ("terms", "nvars", "_key", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], object] | Iterable, nvars: int):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        d: dict[Exponent, Fraction] = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has length {len(e)}, expected {nvars}")
            c = Fraction(c)
            if c:
                s = d.get(e, 0) + c
                if s:
                    d[e] = s
                else:
                    d.pop(e, None)
        self.terms: dict[Exponent, Fraction] = d
        self.nvars = nvars
        self._key = None
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "LaurentPolynomial":
        return cls({}, n)

    @classmethod
    def const(cls, c, n: int) -> "LaurentPolynomial":
        return cls({(0,) * n: c}, n)

    @classmethod
    def monomial(cls, e: Sequence[int], c=1) -> "LaurentPolynomial":
        return cls({tuple(e): c}, len(e))

    @classmethod
    def var(cls, i: int, n: int) -> "LaurentPolynomial":
        return cls({tuple(int(j == i) for j in range(n)): 1}, n)

    @classmethod
    def _raw(cls, d: dict, n: int) -> "LaurentPolynomial":
        p = cls.__new__(cls)
        p.terms = d
        p.nvars = n
        p._key = None
        p._hash = None
        return p

    # -- identity ---------------------------------------------------------

    def key(self):
        if self._key is None:
            self._key = (self.nvars, tuple(sorted(self.terms.items())))
        return self._key

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPolynomial.const(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            if other.nvars != self.nvars:
                raise ValueError("mismatched variable counts")
            return other
        return LaurentPolynomial.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        d = dict(self.terms)
        for e, c in other.terms.items():
            s = d.get(e, 0) + c
            if s:
                d[e] = s
            else:
                d.pop(e, None)
        return LaurentPolynomial._raw(d, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._raw({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPolynomial):
            c = Fraction(other)
            if not c:
                return LaurentPolynomial.zero(self.nvars)
            return LaurentPolynomial._raw({e: c * x for e, x in self.terms.items()}, self.nvars)
        other = self._coerce(other)
        d: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = d.get(e, 0) + c1 * c2
                if s:
                    d[e] = s
                else:
                    d.pop(e, None)
        return LaurentPolynomial._raw(d, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have negative powers")
            (e, c), = self.terms.items()
            return LaurentPolynomial({tuple(k * x for x in e): c ** k}, self.nvars)
        out = LaurentPolynomial.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, alpha: Sequence[int], c=1) -> "LaurentPolynomial":
        """c·X^alpha·self."""
        c = Fraction(c)
        return LaurentPolynomial._raw(
            {tuple(a + b for a, b in zip(e, alpha)): c * x for e, x in self.terms.items()}, self.nvars)

    def transform(self, A: Sequence[Sequence[int]]) -> "LaurentPolynomial":
        """Monomial change of variables X^α ↦ X^{αA} (A has nvars rows)."""
        m = len(A[0]) if A else 0
        return LaurentPolynomial([(vecmat(e, A), c) for e, c in self.terms.items()], m)

    def monic(self) -> "LaurentPolynomial":
        """Scale so that the coefficient of the lexicographically smallest exponent is 1."""
        if not self.terms:
            return self
        c = self.terms[min(self.terms)]
        return self * (1 / c)

    # -- queries ----------------------------------------------------------

    def support(self) -> set[Exponent]:
        return set(self.terms)

    def newton_polytope(self) -> Polytope:
        if not self.terms:
            raise ZeroPolynomial("Newton polytope of zero")
        return Polytope(self.terms)

    def initial_form(self, w: Sequence) -> "LaurentPolynomial":
        if not self.terms:
            raise ZeroPolynomial("initial form of zero")
        vals = {e: dot(e, w) for e in self.terms}
        m = min(vals.values())
        return LaurentPolynomial._raw({e: c for e, c in self.terms.items() if vals[e] == m}, self.nvars)

    def initial_form_on_cone(self, C0: HalfOpenCone) -> "LaurentPolynomial":
        """The common initial form over C0, or raise NotBalanced."""
        if C0.is_empty():
            raise EmptyConeError("initial form over an empty cone")
        init = balanced_initial_form(self, C0)
        if init is None:
            raise NotBalanced("initial form varies over the cone")
        return init

    def clear_denominators(self) -> tuple["LaurentPolynomial", Exponent]:
        """(X^γ·self, γ) with γ the componentwise-minimal shift making exponents >= 0."""
        if not self.terms:
            raise ZeroPolynomial("cannot clear denominators of zero")
        n = self.nvars
        gamma = tuple(max(0, -min(e[i] for e in self.terms)) for i in range(n))
        return self.shift(gamma), gamma

    def min_shift(self) -> tuple["LaurentPolynomial", Exponent]:
        """(X^{-μ}·self, μ) with μ the componentwise minimum exponent (no monomial factor left)."""
        n = self.nvars
        mu = tuple(min(e[i] for e in self.terms) for i in range(n))
        return self.shift(tuple(-x for x in mu)), mu

    def derivative(self, i: int) -> "LaurentPolynomial":
        d = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                d[tuple(f)] = c * e[i]
        return LaurentPolynomial._raw(d, self.nvars)

    def degree_in(self, i: int) -> tuple[int, int]:
        vals = [e[i] for e in self.terms]
        return min(vals), max(vals)

    def exact_divide(self, g: "LaurentPolynomial") -> "LaurentPolynomial | None":
        """The Laurent polynomial q with self = q·g, or None if g does not divide self."""
        if not g.terms:
            raise ZeroPolynomial("division by zero")
        if not self.terms:
            return self
        if g.is_monomial():
            (e, c), = g.terms.items()
            return self.shift(tuple(-x for x in e), 1 / c)
        F, mf = self.min_shift()
        G, mg = g.min_shift()
        q = _poly_divide(F.terms, G.terms)
        if q is None:
            return None
        shift = tuple(a - b for a, b in zip(mf, mg))
        return LaurentPolynomial(q, self.nvars).shift(shift)

    # -- serialization ----------------------------------------------------

    def to_list(self) -> list:
        out = []
        for e, c in sorted(self.terms.items()):
            out.append([list(e), c.numerator, c.denominator])
        return out

    @classmethod
    def from_list(cls, data, nvars: int) -> "LaurentPolynomial":
        return cls({tuple(e): Fraction(a, b) for e, a, b in data}, nvars)

    def __repr__(self):
        return f"LaurentPolynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mon = "*".join(f"X{i + 1}" + (f"^{x}" if x != 1 else "") for i, x in enumerate(e) if x)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


def _poly_divide(F: dict, G: dict) -> dict | None:
    """Exact division of polynomials (nonnegative exponents) in lex order, or None."""
    lt_g = max(G)
    lc_g = G[lt_g]
    rem = dict(F)
    q: dict = {}
    while rem:
        lt = max(rem)
        diff = tuple(a - b for a, b in zip(lt, lt_g))
        if min(diff) < 0:
            return None
        c = rem[lt] / lc_g
        q[diff] = c
        for e, x in G.items():
            t = tuple(a + b for a, b in zip(e, diff))
            s = rem.get(t, 0) - c * x
            if s:
                rem[t] = s
            else:
                rem.pop(t, None)
    return q


def balanced_initial_form(f: LaurentPolynomial, C0: HalfOpenCone) -> LaurentPolynomial | None:
    """init_ω(f) if it is the same for all ω in the nonempty cone C0, else None."""
    if not f.terms:
        raise ZeroPolynomial("initial form of zero")
    if len(f.terms) == 1:
        return f
    rays = C0.rays
    w = C0.interior_point()
    vals = {e: dot(e, w) for e in f.terms}
    m = min(vals.values())
    low = [e for e in f.terms if vals[e] == m]
    a0 = low[0]
    # terms tied at the interior point must tie on all of C0
    for b in low[1:]:
        d = tuple(x - y for x, y in zip(b, a0))
        if any(dot(d, r) for r in rays):
            return None
    # the remaining terms must be strictly larger everywhere on C0
    for b in f.terms:
        if vals[b] == m:
            continue
        d = tuple(x - y for x, y in zip(b, a0))
        zero = []
        for i, r in enumerate(rays):
            v = dot(d, r)
            if v < 0:
                return None
            if v == 0:
                zero.append(i)
        if C0.meets_face(zero):
            return None
    return LaurentPolynomial._raw({e: f.terms[e] for e in low}, f.nvars)


def support(f: LaurentPolynomial) -> set[Exponent]:
    return f.support()


def newton_polytope(f: LaurentPolynomial) -> Polytope:
    return f.newton_polytope()


def initial_form(f: LaurentPolynomial, w) -> LaurentPolynomial:
    return f.initial_form(w)


def initial_form_on_cone(f: LaurentPolynomial, C0: HalfOpenCone) -> LaurentPolynomial:
    return f.initial_form_on_cone(C0)


def clear_denominators(f: LaurentPolynomial) -> tuple[LaurentPolynomial, Exponent]:
    return f.clear_denominators()
