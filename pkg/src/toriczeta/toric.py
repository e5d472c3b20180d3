"""Toric data (C0; f_1, ..., f_r) and the operations of the first stage.

A toric datum pairs a half-open cone C0 in R^n with finitely many Laurent
polynomials.  Simplifying, balancing and reducing keep the associated
integral unchanged up to partition; a datum is regular when every subfamily
of its initial forms cuts out a smooth subvariety of the torus.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Sequence

from .euler import canonical_system, rank_condition
from .laurent import LaurentPolynomial, NotBalanced, balanced_initial_form
from .polyhedra.cones import HalfOpenCone
from .polyhedra.polytopes import normal_fan_pieces


class ReduceFailure(Exception):
    """Reduction could not make progress on a singular datum."""

    def __init__(self, reason: str, datum: "ToricDatum | None" = None):
        super().__init__(reason)
        self.reason = reason
        self.datum = datum


class IsRegular(Exception):
    pass


class ToricDatum:
    __slots__ = ("cone", "polys", "depth", "_inits")

    def __init__(self, cone: HalfOpenCone, polys: Sequence[LaurentPolynomial], depth: int = 0):
        for f in polys:
            if f.nvars != cone.n:
                raise ValueError("polynomial and cone dimensions differ")
        self.cone = cone
        self.polys = tuple(polys)
        self.depth = depth
        self._inits = None

    @property
    def n(self) -> int:
        return self.cone.n

    def is_trivial(self) -> bool:
        return self.cone.is_empty()

    def initial_forms(self) -> tuple[LaurentPolynomial, ...] | None:
        """The initial forms on C0, or None if some polynomial is not balanced."""
        if self._inits is None:
            out = []
            for f in self.polys:
                if not f:
                    out.append(f)
                    continue
                g = balanced_initial_form(f, self.cone)
                if g is None:
                    self._inits = False
                    return None
                out.append(g)
            self._inits = tuple(out)
        return None if self._inits is False else self._inits

    def is_balanced(self) -> bool:
        if self.is_trivial():
            return True
        return self.initial_forms() is not None

    def key(self):
        return (self.cone.key(), tuple(f.key() for f in self.polys), self.depth)

    def __eq__(self, other):
        return isinstance(other, ToricDatum) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_dict(self) -> dict:
        return {"cone": self.cone.to_dict(), "polys": [f.to_list() for f in self.polys], "depth": self.depth}

    @classmethod
    def from_dict(cls, d: dict) -> "ToricDatum":
        C = HalfOpenCone.from_dict(d["cone"])
        return cls(C, [LaurentPolynomial.from_list(p, C.n) for p in d["polys"]], d.get("depth", 0))

    def __repr__(self):
        return f"ToricDatum(n={self.n}, polys={[str(f) for f in self.polys]}, depth={self.depth})"


def is_balanced(T: ToricDatum) -> bool:
    return T.is_balanced()


def weight(T: ToricDatum) -> int:
    """Total number of terms in the initial forms."""
    inits = T.initial_forms()
    if inits is None:
        raise NotBalanced("weight of an unbalanced datum")
    return sum(len(g) for g in inits)


# -- simplification --------------------------------------------------------------


def _strip_integral_terms(f: LaurentPolynomial, C: HalfOpenCone) -> LaurentPolynomial:
    keep = {e: c for e, c in f.terms.items() if not C.dual_contains(e)}
    if len(keep) == len(f.terms):
        return f
    return LaurentPolynomial(keep, f.nvars)


def simplify(T: ToricDatum) -> ToricDatum:
    """Apply the four simplification rules until none fires.

    (a) drop terms X^α with α in the dual of C0 (they are integral there);
    (b) drop zero polynomials;
    (c) drop f_i when f_i/f_j is a Laurent polynomial supported in the dual of C0;
    (d) a polynomial whose initial form on C0 is a monomial c·X^α is replaced by
        the constraint α·ω >= 0 on the cone.
    """
    C = T.cone
    polys = list(T.polys)
    while True:
        if C.is_empty():
            return ToricDatum(C, tuple(polys), T.depth)
        changed = False
        polys = [_strip_integral_terms(f, C) for f in polys]
        polys = [f for f in polys if f]
        i = 0
        while i < len(polys):
            for j in range(len(polys)):
                if j == i:
                    continue
                q = polys[i].exact_divide(polys[j])
                if q is not None and all(C.dual_contains(e) for e in q.terms):
                    del polys[i]
                    changed = True
                    break
            else:
                i += 1
        for i, f in enumerate(polys):
            init = balanced_initial_form(f, C)
            if init is not None and init.is_monomial():
                (alpha, _), = init.terms.items()
                del polys[i]
                C = C.refine(weak=[alpha])
                changed = True
                break
        if not changed:
            return ToricDatum(C, tuple(polys), T.depth)


def is_simple(T: ToricDatum) -> bool:
    return simplify(T) == T


# -- balancing -----------------------------------------------------------------------


def balance(T: ToricDatum) -> list[ToricDatum]:
    """Partition C0 so that every polynomial is balanced on each piece.

    Each unbalanced polynomial refines the current pieces along the normal fan
    of its Newton polytope; already balanced pieces are left alone.
    """
    if T.is_trivial():
        return []
    pieces = [T.cone]
    for f in T.polys:
        if not f or f.is_monomial():
            continue
        P = None
        nxt = []
        for C in pieces:
            if balanced_initial_form(f, C) is not None:
                nxt.append(C)
                continue
            if P is None:
                P = f.newton_polytope()
            nxt.extend(piece for _, piece in normal_fan_pieces(P, C))
        pieces = nxt
    return [ToricDatum(C, T.polys, T.depth) for C in pieces]


# -- regularity ------------------------------------------------------------------------


def _init_system(T: ToricDatum) -> tuple[LaurentPolynomial, ...]:
    inits = T.initial_forms()
    if inits is None:
        raise NotBalanced("regularity of an unbalanced datum")
    return inits


def find_min_singular_subset(T: ToricDatum) -> tuple[int, ...] | None:
    """The first singular J (by size, then lexicographically), or None if T is regular."""
    if T.is_trivial():
        return None
    inits = _init_system(T)
    r = len(inits)
    for size in range(1, r + 1):
        for J in combinations(range(r), size):
            if not rank_condition([inits[j] for j in J], T.n):
                return J
    return None


def is_regular(T: ToricDatum) -> bool:
    return find_min_singular_subset(T) is None


def init_system_key(T: ToricDatum):
    return canonical_system(_init_system(T), T.n)


# -- reduction ---------------------------------------------------------------------------


@dataclass
class Candidate:
    i: int
    j: int
    ti: tuple
    tj: tuple
    pieces: list
    singular: list

    @property
    def score(self) -> Fraction:
        if not self.singular:
            return Fraction(0)
        return Fraction(sum(weight(P) for P in self.singular), len(self.singular))

    def describe(self) -> dict:
        return {"i": self.i, "j": self.j, "ti": list(self.ti), "tj": list(self.tj),
                "pieces": len(self.pieces), "singular": len(self.singular)}


def _refine(T: ToricDatum) -> list[ToricDatum]:
    """simplify, balance, simplify each piece; trivial pieces are dropped."""
    S = simplify(T)
    if S.is_trivial():
        return []
    out = []
    for P in balance(S):
        P = simplify(P)
        if not P.is_trivial():
            out.append(P)
    return out


def candidate_pieces(T: ToricDatum, i: int, j: int, ti: tuple, tj: tuple) -> list[ToricDatum]:
    """Split C0 by comparing two initial terms and cancel the smaller one.

    Where X^{α_i} ≤ X^{α_j} (weakly), f_j loses its term t_j by subtracting a
    multiple of f_i; where it is strictly larger, f_i loses t_i instead.
    """
    C = T.cone
    fi, fj = T.polys[i], T.polys[j]
    ci, cj = fi.terms[ti], fj.terms[tj]
    d = tuple(b - a for a, b in zip(ti, tj))
    nd = tuple(-x for x in d)
    le = list(T.polys)
    le[j] = fj - fi.shift(d, cj / ci)
    gt = list(T.polys)
    gt[i] = fi - fj.shift(nd, ci / cj)
    out = []
    out.extend(_refine(ToricDatum(C.refine(weak=[d]), le, T.depth)))
    out.extend(_refine(ToricDatum(C.refine(strict=[nd]), gt, T.depth)))
    return out


def reduce(T: ToricDatum, depth_cap: int = 3, on_candidate: Callable | None = None) -> list[ToricDatum]:
    """One reduction step on a balanced, simple, singular datum.

    Candidates (i < j in the minimal singular J, t_i a term of init f_i, t_j of
    init f_j) are tried in lexicographic order; the first whose output has no
    singular pieces wins, otherwise the one whose singular pieces have the least
    mean weight (earliest on ties).  Singular outputs heavier than T go one
    level deeper; exceeding ``depth_cap`` is a failure.
    """
    J = find_min_singular_subset(T)
    if J is None:
        raise IsRegular("datum is regular")
    if len(J) == 1:
        raise ReduceFailure(f"single singular initial form {T.initial_forms()[J[0]]}", T)
    inits = T.initial_forms()
    best: Candidate | None = None
    for i, j in combinations(J, 2):
        for ti, tj in product(sorted(inits[i].terms), sorted(inits[j].terms)):
            pieces = candidate_pieces(T, i, j, ti, tj)
            singular = [P for P in pieces if not is_regular(P)]
            cand = Candidate(i, j, ti, tj, pieces, singular)
            if on_candidate is not None:
                on_candidate(cand)
            if not singular:
                best = cand
                break
            if best is None or cand.score < best.score:
                best = cand
        if best is not None and not best.singular:
            break
    w = weight(T)
    sing = {id(P) for P in best.singular}
    out = []
    for P in best.pieces:
        depth = T.depth
        if id(P) in sing and weight(P) > w:
            depth += 1
            if depth > depth_cap:
                raise ReduceFailure(f"depth cap {depth_cap} exceeded", T)
        out.append(ToricDatum(P.cone, P.polys, depth))
    return out
