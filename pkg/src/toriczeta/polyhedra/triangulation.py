"""Simplicial cones; placing and pulling triangulations of cones."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from .cones import Cone
from .dd import DDState
from .lattice import Vector, dot, lattice_index, rank, smith_normal_form


class SimplicialCone:
    __slots__ = ("rays", "_mult")

    def __init__(self, rays: Sequence[Sequence[int]], multiplicity: int | None = None):
        self.rays: tuple[Vector, ...] = tuple(tuple(r) for r in rays)
        self._mult = multiplicity

    @property
    def dim(self) -> int:
        return len(self.rays)

    def multiplicity(self) -> int:
        if self._mult is None:
            self._mult = lattice_index(self.rays) if self.rays else 1
        return self._mult

    def parallelepiped_points(self) -> list[Vector]:
        return parallelepiped_points(self)

    def __eq__(self, other):
        return isinstance(other, SimplicialCone) and set(self.rays) == set(other.rays)

    def __hash__(self):
        return hash(frozenset(self.rays))

    def __repr__(self):
        return f"SimplicialCone({list(self.rays)})"


def _fundamental_coords(rays: Sequence[Vector]) -> list[list[Fraction]]:
    """Coordinates a (in [0,1)^e) of all lattice points Σ a_i ρ_i of the parallelepiped."""
    e = len(rays)
    if e == 0:
        return [[]]
    C, D, _ = smith_normal_form([list(r) for r in rays])
    diag = [D[i][i] for i in range(e)]
    out = []
    for ks in product(*[range(d) for d in diag]):
        a = [Fraction(0)] * e
        for i, k in enumerate(ks):
            if k:
                f = Fraction(k, diag[i])
                row = C[i]
                for j in range(e):
                    if row[j]:
                        a[j] += f * row[j]
        out.append([x - (x.numerator // x.denominator) for x in a])
    return out


def parallelepiped_points(sigma: SimplicialCone) -> list[Vector]:
    """Lattice points of {Σ a_i ρ_i : 0 <= a_i < 1}."""
    rays = sigma.rays
    n = len(rays[0]) if rays else 0
    pts = []
    for a in _fundamental_coords(rays):
        v = [Fraction(0)] * n
        for ai, r in zip(a, rays):
            if ai:
                for j, x in enumerate(r):
                    if x:
                        v[j] += ai * x
        pts.append(tuple(int(x) for x in v))
    return sorted(pts)


def open_parallelepiped_points(sigma: SimplicialCone) -> list[Vector]:
    """Lattice points of {Σ a_i ρ_i : 0 < a_i <= 1}."""
    rays = sigma.rays
    n = len(rays[0]) if rays else 0
    pts = []
    for a in _fundamental_coords(rays):
        v = [Fraction(0)] * n
        for ai, r in zip(a, rays):
            c = ai if ai else Fraction(1)
            for j, x in enumerate(r):
                if x:
                    v[j] += c * x
        pts.append(tuple(int(x) for x in v))
    return sorted(pts)


def pulling_triangulation(ngens: int, facet_masks: Sequence[int], dim: int,
                          priority: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """Index tuples of a pulling triangulation of a pointed cone.

    ``facet_masks`` are bitmasks (over the ``ngens`` generators) of the zero sets of
    valid inequalities including all facets; redundant entries are harmless.
    The generator pulled first in every face is the one of smallest priority.
    """
    if priority is None:
        priority = list(range(ngens))
    order = sorted(range(ngens), key=lambda i: priority[i])
    hmasks = sorted(set(facet_masks))
    memo: dict[int, list[int]] = {}

    def facets_of(mask: int) -> list[int]:
        cands = set()
        for h in hmasks:
            x = mask & h
            if x != mask:
                cands.add(x)
        cl = sorted(cands, key=lambda m: -m.bit_count())
        maximal: list[int] = []
        for c in cl:
            if not any((c & m) == c for m in maximal):
                maximal.append(c)
        return maximal

    def pull(mask: int, d: int) -> list[int]:
        if mask.bit_count() == d:
            return [mask]
        got = memo.get(mask)
        if got is not None:
            return got
        v = next(1 << i for i in order if mask >> i & 1)
        out = []
        for g in facets_of(mask):
            if g & v:
                continue
            for s in pull(g, d - 1):
                out.append(s | v)
        memo[mask] = out
        return out

    if dim == 0:
        return [()]
    full = (1 << ngens) - 1
    result = []
    for m in pull(full, dim):
        result.append(tuple(i for i in range(ngens) if m >> i & 1))
    return result


def placing_triangulation(gens: Sequence[Sequence[int]], order: Sequence[int] | None = None,
                          multiplicities: bool = False):
    """Index tuples of the placing triangulation of the pointed cone spanned by ``gens``.

    Generators are inserted in the given order (default: as listed).  A new
    generator outside the current linear span is coned over every simplex;
    otherwise it is joined to every boundary face of the current triangulation
    lying in a facet it sees from outside.  Generators already inside are skipped.

    With ``multiplicities=True`` returns (tuples, multiplicities).  Joining g to
    a face t of a simplex s = t + v on a facet with normal a gives
    mult(t + g) = mult(s)·|a·g| / |a·v|, so only pyramid steps need lattice indices.
    """
    gens = [tuple(g) for g in gens]
    if not gens:
        return ([()], [1]) if multiplicities else [()]
    n = len(gens[0])
    if order is None:
        order = list(range(len(gens)))
    dual = DDState(n)  # dual cone of the current cone: rays are facet normals
    simplices = [0]  # bitmasks over generator indices
    mults = [1]
    # codimension-one boundary faces (mask, multiplicity of the simplex it came from,
    # the vertex opposite to it there), grouped by the facet normal containing them
    faces_on: dict[Vector, list[tuple[int, int, int]]] = {}
    zeros: dict[Vector, int] = {}  # facet normal -> generators placed on it
    placed: list[int] = []

    def zero_mask(a):
        m = 0
        for i in placed:
            if dot(a, gens[i]) == 0:
                m |= 1 << i
        return m

    def file_face(rec, normals):
        f = rec[0]
        for a in normals:
            if not f & ~zeros[a]:
                faces_on.setdefault(a, []).append(rec)
                return

    def rays_of(m):
        return [gens[i] for i in range(m.bit_length()) if m >> i & 1]

    for gi in order:
        g = gens[gi]
        if not any(g):
            continue
        bit = 1 << gi
        if any(dot(l, g) for l in dual.lineality):
            # pyramid over the current cone: the old simplices become boundary faces
            new_mult = {m: lattice_index(rays_of(m | bit)) for m in simplices}
            faces = [(t | bit, new_mult[t | 1 << v], v) for recs in faces_on.values() for t, _, v in recs]
            faces += [(m, new_mult[m], gi) for m in simplices]
            mults = [new_mult[m] for m in simplices]
            simplices = [m | bit for m in simplices]
            placed.append(gi)
            dual.add_inequality(g)
            zeros = {a: zero_mask(a) for a in dual.rays}
            faces_on = {}
            for rec in faces:
                file_face(rec, dual.rays)
            continue
        vals = [(a, dot(a, g)) for a in dual.rays]
        visible = [(a, -v) for a, v in vals if v < 0]
        if not visible:
            continue
        through = [a for a, v in vals if v == 0]
        seen = [(rec, a, ag) for a, ag in visible for rec in faces_on.pop(a, ())]
        placed.append(gi)
        dual.add_inequality(g)
        for a, _ in visible:
            del zeros[a]
        for a in through:
            zeros[a] |= bit
        fresh = [a for a in dual.rays if a not in zeros]
        for a in fresh:
            zeros[a] = zero_mask(a)
        # faces containing g can only lie on facets through g
        normals = through + fresh
        # a ridge shared by two coned faces gives an interior face
        ridges: dict[int, int] = {}
        for (t, _, _), _, _ in seen:
            rest = t
            while rest:
                low = rest & -rest
                rest ^= low
                ridges[t ^ low] = ridges.get(t ^ low, 0) + 1
        for (t, src_mult, v), a, ag in seen:
            num = src_mult * ag
            den = dot(a, gens[v])
            mult = num // den
            assert mult * den == num, "placing multiplicity not integral"
            simplices.append(t | bit)
            mults.append(mult)
            rest = t
            while rest:
                low = rest & -rest
                rest ^= low
                if ridges[t ^ low] == 1:
                    file_face(((t ^ low) | bit, mult, low.bit_length() - 1), normals)
    idx = [tuple(i for i in range(m.bit_length()) if m >> i & 1) for m in simplices]
    return (idx, mults) if multiplicities else idx


def _pointed_simplices(rays, masks, dim, priority=None) -> list[SimplicialCone]:
    idx = pulling_triangulation(len(rays), masks, dim, priority)
    return [SimplicialCone([rays[i] for i in t]) for t in idx]


def triangulate(C: Cone, order: Sequence[int] | None = None, method: str = "placing") -> list[SimplicialCone]:
    """Fan of simplicial cones with support C.

    Generators are taken in the cone's ray order (lexicographic for cones built
    from constraints, as given for cones built from generators); ``order``
    optionally permutes them.  ``method`` is "placing" (default) or "pulling".
    Cones with lineality are split into pointed sectors along a lineality basis.
    """
    rays = list(C.rays)
    lin = list(C.lineality)
    if order is not None and len(order) != len(rays):
        raise ValueError("order must permute the rays")
    if lin:
        out = []
        for signs in product((1, -1), repeat=len(lin)):
            gens = rays + [tuple(s * x for x in l) for s, l in zip(signs, lin)]
            out.extend(triangulate(Cone.from_rays(C.n, gens), method=method))
        return out
    if method == "pulling":
        return _pointed_simplices(rays, C.facet_masks(), rank(rays), order)
    if method != "placing":
        raise ValueError(f"unknown triangulation method {method!r}")
    idx, mults = placing_triangulation(rays, order, multiplicities=True)
    return [SimplicialCone([rays[i] for i in t], m) for t, m in zip(idx, mults) if t or not rays]
