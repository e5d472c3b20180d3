"""Closed rational cones, half-open cones inside the orthant, and their models.

A half-open cone C0 is stored as weak constraints φ (φ·ω >= 0) and strict
constraints χ (χ·ω > 0).  All queries go through the closed relaxation
K = {φ >= 0, χ >= 0}: when C0 is nonempty it is dense in K, so K is its
closure.  C0 is the union of the relative interiors of those faces of K on
which no χ vanishes identically.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Sequence

from .dd import DDState, double_description
from .lattice import Vector, dot, integralize, primitive, rank


class EmptyConeError(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def _canon(vectors: Iterable[Sequence[int]]) -> tuple[Vector, ...]:
    out = set()
    for v in vectors:
        p = primitive(tuple(int(x) for x in v))
        out.add(p)
    return tuple(sorted(out))


def _unit(n: int, i: int) -> Vector:
    return tuple(int(i == j) for j in range(n))


class Cone:
    """Closed polyhedral cone, given by inequalities and/or generators."""

    def __init__(self, n: int, constraints=None, equalities=(), rays=None, lineality=()):
        self.n = n
        self._lock = threading.Lock()
        if constraints is None and rays is None:
            raise ValueError("need constraints or rays")
        self._constraints = None if constraints is None else tuple(tuple(c) for c in constraints)
        self._equalities = tuple(tuple(e) for e in equalities) if constraints is not None else None
        if rays is not None:
            seen = {}
            for r in rays:
                if any(r):
                    seen.setdefault(primitive(tuple(r)), None)
            rays = tuple(seen)
        self._rays = rays
        self._lineality = tuple(tuple(l) for l in lineality) if rays is not None else None

    @classmethod
    def from_rays(cls, n, rays, lineality=()):
        return cls(n, rays=rays, lineality=lineality)

    def _fill_v(self):
        with self._lock:
            if self._rays is not None:
                return
            st = double_description(self.n, self._constraints, self._equalities)
            self._rays = tuple(sorted(set(st.rays)))
            self._lineality = tuple(st.lineality)

    def _fill_h(self):
        with self._lock:
            if self._constraints is not None:
                return
            st = double_description(self.n, self._rays, [l for l in self._lineality])
            self._constraints = tuple(sorted(set(st.rays)))
            self._equalities = tuple(st.lineality)

    @property
    def rays(self) -> tuple[Vector, ...]:
        if self._rays is None:
            self._fill_v()
        return self._rays

    @property
    def lineality(self) -> tuple[Vector, ...]:
        if self._rays is None:
            self._fill_v()
        return self._lineality

    @property
    def constraints(self) -> tuple[Vector, ...]:
        if self._constraints is None:
            self._fill_h()
        return self._constraints

    @property
    def equalities(self) -> tuple[Vector, ...]:
        if self._constraints is None:
            self._fill_h()
        return self._equalities

    @property
    def dim(self) -> int:
        return rank(list(self.rays) + list(self.lineality))

    def is_pointed(self) -> bool:
        return not self.lineality

    def contains(self, w: Sequence) -> bool:
        return all(dot(c, w) >= 0 for c in self.constraints) and all(dot(e, w) == 0 for e in self.equalities)

    def facet_masks(self) -> list[int]:
        """For each inequality, the bitmask of rays on which it vanishes."""
        masks = []
        for c in self.constraints:
            m = 0
            for i, r in enumerate(self.rays):
                if dot(c, r) == 0:
                    m |= 1 << i
            masks.append(m)
        return masks

    def __repr__(self):
        return f"Cone(n={self.n}, rays={list(self.rays)}, lineality={list(self.lineality)})"


class HalfOpenCone:
    """Half-open rational cone in the nonnegative orthant."""

    def __init__(self, n: int, weak: Iterable[Sequence[int]] = (), strict: Iterable[Sequence[int]] = (),
                 _seed=None):
        self.n = n
        weak = list(weak)
        strict = list(strict)
        for v in weak + strict:
            if len(v) != n:
                raise DimensionMismatch(f"constraint {v} has length {len(v)}, expected {n}")
        self.weak: tuple[Vector, ...] = _canon(weak + [_unit(n, i) for i in range(n)])
        self.weak = tuple(w for w in self.weak if any(w))
        self.strict: tuple[Vector, ...] = _canon(strict)
        self._seed = _seed
        self._lock = threading.Lock()
        self._rays = None
        self._dd_constraints = None
        self._smasks = None
        self._dim = None

    @classmethod
    def orthant(cls, n: int) -> "HalfOpenCone":
        return cls(n)

    # -- structural data -------------------------------------------------

    def _fill(self):
        with self._lock:
            if self._rays is not None:
                return
            n = self.n
            if any(not any(c) for c in self.strict):
                rays = ()
                cons = []
            else:
                allc = list(self.weak) + [c for c in self.strict if c not in set(self.weak)]
                if self._seed is not None:
                    prays, pcons = self._seed
                    st = DDState.from_generators(n, prays, [], pcons)
                    done = set(pcons)
                    todo = [c for c in allc if c not in done]
                else:
                    st = DDState(n)
                    todo = allc
                weak_set = set(self.weak)
                eqs, ineqs, skip = [], [], set()
                for c in todo:
                    neg = tuple(-x for x in c)
                    if c in skip:
                        continue
                    if c in weak_set and neg in weak_set:
                        eqs.append(c)
                        skip.add(neg)
                    else:
                        ineqs.append(c)
                double_description(n, ineqs, eqs, start=st)
                if st.lineality:
                    raise AssertionError("half-open cone is not contained in the orthant")
                rays = tuple(sorted(set(st.rays)))
                cons = list(st.constraints)
            smasks = []
            for r in rays:
                m = 0
                for j, chi in enumerate(self.strict):
                    if dot(chi, r) > 0:
                        m |= 1 << j
                smasks.append(m)
            self._dd_constraints = cons
            self._smasks = smasks
            self._rays = rays
            self._seed = None

    @property
    def rays(self) -> tuple[Vector, ...]:
        """Extreme rays of the closed relaxation, sorted lexicographically."""
        if self._rays is None:
            self._fill()
        return self._rays

    @property
    def strict_masks(self) -> list[int]:
        if self._rays is None:
            self._fill()
        return self._smasks

    @property
    def full_mask(self) -> int:
        return (1 << len(self.strict)) - 1

    def is_empty(self) -> bool:
        if any(not any(c) for c in self.strict):
            return True
        acc = 0
        for m in self.strict_masks:
            acc |= m
        return acc != self.full_mask

    @property
    def dim(self) -> int:
        if self.is_empty():
            return -1
        if self._dim is None:
            self._dim = rank(self.rays)
        return self._dim

    def meets_face(self, ray_indices: Iterable[int]) -> bool:
        """Whether C0 meets the face of its closure spanned by the given rays."""
        acc = 0
        sm = self.strict_masks
        for i in ray_indices:
            acc |= sm[i]
        return acc == self.full_mask

    def interior_point(self) -> Vector:
        """A point in the relative interior of the closure (lies in C0 if nonempty)."""
        pt = [0] * self.n
        for r in self.rays:
            for i, x in enumerate(r):
                if x:
                    pt[i] += x
        return tuple(pt)

    def contains(self, w: Sequence) -> bool:
        return all(dot(c, w) >= 0 for c in self.weak) and all(dot(c, w) > 0 for c in self.strict)

    def dual_contains(self, alpha: Sequence[int]) -> bool:
        if self.is_empty():
            raise EmptyConeError("dual of an empty cone")
        return all(dot(alpha, r) >= 0 for r in self.rays)

    def closure(self) -> Cone:
        if self.is_empty():
            raise EmptyConeError("closure of an empty cone")
        return Cone(self.n, constraints=list(self.weak) + list(self.strict), rays=self.rays)

    def model(self) -> "PolyhedralModel":
        return PolyhedralModel(self.n, self.weak, self.strict)

    # -- constructions ---------------------------------------------------

    def refine(self, weak: Iterable[Sequence[int]] = (), strict: Iterable[Sequence[int]] = ()) -> "HalfOpenCone":
        """Intersection with further constraints; reuses this cone's rays."""
        weak = list(weak)
        strict = list(strict)
        seed = None
        if self._rays is not None and self._dd_constraints is not None:
            seed = (self._rays, self._dd_constraints)
        return HalfOpenCone(self.n, list(self.weak) + weak, list(self.strict) + strict, _seed=seed)

    def intersect(self, other: "HalfOpenCone") -> "HalfOpenCone":
        if other.n != self.n:
            raise DimensionMismatch("cones live in different dimensions")
        return self.refine(other.weak, other.strict)

    def product_with_orthant(self, k: int, strict: bool = True) -> "HalfOpenCone":
        """C0 × (strict) orthant of dimension k, placed in the trailing coordinates."""
        n = self.n
        m = n + k
        pad = (0,) * k
        weak = [w + pad for w in self.weak] + [_unit(m, n + i) for i in range(k)]
        stricts = [c + pad for c in self.strict]
        if strict:
            stricts += [_unit(m, n + i) for i in range(k)]
        seed = None
        if self._rays is not None and self._dd_constraints is not None and not self.is_empty():
            rays = [r + pad for r in self._rays] + [_unit(m, n + i) for i in range(k)]
            cons = [c + pad for c in self._dd_constraints] + [_unit(m, n + i) for i in range(k)]
            seed = (tuple(rays), cons)
        return HalfOpenCone(m, weak, stricts, _seed=seed)

    # -- identity --------------------------------------------------------

    def key(self):
        return (self.n, self.weak, self.strict)

    def __eq__(self, other):
        return isinstance(other, HalfOpenCone) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"HalfOpenCone(n={self.n}, weak={list(self.weak)}, strict={list(self.strict)})"

    def to_dict(self) -> dict:
        return {"n": self.n, "weak": [list(w) for w in self.weak], "strict": [list(s) for s in self.strict]}

    @classmethod
    def from_dict(cls, d: dict) -> "HalfOpenCone":
        return cls(d["n"], d.get("weak", ()), d.get("strict", ()))


class PolyhedralModel:
    """The polyhedron {φ·ω >= 0, χ·ω >= 1}; it has the same lattice points as C0."""

    def __init__(self, n, weak, strict):
        self.n = n
        self.weak = tuple(weak)
        self.strict = tuple(strict)
        self._vr = None

    def contains(self, w) -> bool:
        return all(dot(c, w) >= 0 for c in self.weak) and all(dot(c, w) >= 1 for c in self.strict)

    def _homogenized(self):
        if self._vr is None:
            n = self.n
            ineqs = [(0,) + tuple(c) for c in self.weak]
            ineqs += [(-1,) + tuple(c) for c in self.strict]
            ineqs.append((1,) + (0,) * n)
            st = double_description(n + 1, ineqs)
            pts, rec = [], []
            for r in st.rays:
                if r[0] > 0:
                    pts.append(tuple(Fraction(x, r[0]) for x in r[1:]))
                else:
                    rec.append(r[1:])
            self._vr = (pts, rec, [l[1:] for l in st.lineality])
        return self._vr

    def vertices(self):
        return self._homogenized()[0]

    def recession_rays(self):
        return self._homogenized()[1]

    def is_empty(self) -> bool:
        return not self.vertices()

    def closure_cone(self) -> Cone:
        """Smallest closed cone containing the model."""
        pts, rec, lin = self._homogenized()
        gens = [integralize(p) for p in pts] + list(rec)
        return Cone.from_rays(self.n, gens, lin)
