"""Lattice polytopes: facets, face lattice, normal cones, exact volumes."""

from __future__ import annotations

from typing import Iterable, Sequence

from .cones import HalfOpenCone
from .dd import double_description
from .lattice import Vector, det, dot, rank
from .triangulation import pulling_triangulation


class Polytope:
    """Convex hull of finitely many integer points."""

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = sorted(set(tuple(int(x) for x in p) for p in points))
        if not pts:
            raise ValueError("empty polytope")
        self.points: tuple[Vector, ...] = tuple(pts)
        self.n = len(pts[0])
        self._h = None
        self._vertices = None
        self._faces = None
        self._edges = None

    # -- H-description of the homogenized cone --------------------------

    def _hrep(self):
        if self._h is None:
            gens = [(1,) + p for p in self.points]
            st = double_description(self.n + 1, gens)
            facets = []
            for a in sorted(set(st.rays)):
                mask = 0
                for i, g in enumerate(gens):
                    if dot(a, g) == 0:
                        mask |= 1 << i
                if mask:
                    facets.append((a, mask))
            self._h = (facets, list(st.lineality))
        return self._h

    @property
    def dim(self) -> int:
        return self.n - len(self._hrep()[1])

    @property
    def affine_equations(self) -> list[Vector]:
        """Vectors (c, a) with c + a·x = 0 on the polytope."""
        return self._hrep()[1]

    @property
    def facets(self) -> list[tuple[Vector, int]]:
        """Pairs ((c, a), point mask) with c + a·x >= 0 valid and tight on the mask."""
        return self._hrep()[0] if self.dim > 0 else []

    @property
    def vertices(self) -> tuple[Vector, ...]:
        if self._vertices is None:
            pts = self.points
            if len(pts) == 1:
                self._vertices = pts
            else:
                full = (1 << len(pts)) - 1
                verts = []
                for i in range(len(pts)):
                    acc = full
                    for _, m in self.facets:
                        if m >> i & 1:
                            acc &= m
                    if acc == 1 << i:
                        verts.append(pts[i])
                self._vertices = tuple(verts)
        return self._vertices

    def _vertex_facet_masks(self) -> list[int]:
        """For each facet, the bitmask of vertices on it."""
        verts = self.vertices
        out = []
        for (a, _) in self.facets:
            m = 0
            for i, v in enumerate(verts):
                if dot(a, (1,) + v) == 0:
                    m |= 1 << i
            out.append(m)
        return out

    def faces(self) -> list[frozenset[int]]:
        """All nonempty faces as sets of vertex indices, including the polytope itself."""
        if self._faces is None:
            nv = len(self.vertices)
            full = (1 << nv) - 1
            fmasks = sorted(set(self._vertex_facet_masks()))
            seen = {full}
            frontier = list(fmasks)
            for m in fmasks:
                seen.add(m)
            while frontier:
                nxt = []
                for f in frontier:
                    for g in fmasks:
                        h = f & g
                        if h and h not in seen:
                            seen.add(h)
                            nxt.append(h)
                frontier = nxt
            masks = sorted(seen, key=lambda m: (m.bit_count(), m))
            self._faces = [frozenset(i for i in range(nv) if m >> i & 1) for m in masks]
        return self._faces

    def edges(self) -> list[frozenset[int]]:
        if self._edges is None:
            # a face with exactly two vertices is a segment
            self._edges = [f for f in self.faces() if len(f) == 2]
        return self._edges

    def face_dim(self, face: Iterable[int]) -> int:
        vs = [self.vertices[i] for i in face]
        v0 = vs[0]
        return rank([tuple(a - b for a, b in zip(v, v0)) for v in vs[1:]])

    def face_for_direction(self, w: Sequence) -> frozenset[int]:
        vals = [dot(v, w) for v in self.vertices]
        m = min(vals)
        return frozenset(i for i, x in enumerate(vals) if x == m)

    def normal_cone(self, face: Iterable[int]) -> tuple[list[Vector], list[Vector]]:
        """(equalities, strict inequalities) describing the relatively open normal cone.

        The face is minimised by ω exactly when ω is constant on its vertices and
        strictly larger at every vertex joined to the face by an edge.
        """
        face = sorted(face)
        verts = self.vertices
        v0 = verts[face[0]]
        eqs = []
        for i in face[1:]:
            d = tuple(a - b for a, b in zip(verts[i], v0))
            eqs.append(d)
        fs = set(face)
        nbrs = set()
        if len(fs) < len(verts):
            for e in self.edges():
                if e & fs and not e <= fs:
                    nbrs |= e - fs
        strict = [tuple(a - b for a, b in zip(verts[u], v0)) for u in sorted(nbrs)]
        return eqs, strict

    def normalized_volume(self) -> int:
        """n!·Vol(P) in the ambient dimension (0 unless full-dimensional)."""
        if self.dim < self.n:
            return 0
        verts = self.vertices
        gens = [(1,) + v for v in verts]
        simplices = pulling_triangulation(len(gens), self._vertex_facet_masks(), self.n + 1)
        return sum(abs(det([gens[i] for i in s])) for s in simplices)

    def minkowski_sum(self, other: "Polytope") -> "Polytope":
        pts = {tuple(a + b for a, b in zip(u, v)) for u in self.vertices for v in other.vertices}
        P = Polytope(pts)
        return Polytope(P.vertices)

    def scaled(self, k: int) -> "Polytope":
        return Polytope([tuple(k * x for x in v) for v in self.vertices])

    def __eq__(self, other):
        return isinstance(other, Polytope) and set(self.vertices) == set(other.vertices)

    def __hash__(self):
        return hash(frozenset(self.vertices))

    def __repr__(self):
        return f"Polytope(vertices={list(self.vertices)})"


def normal_fan_pieces(P: Polytope, C0: HalfOpenCone) -> list[tuple[frozenset[int], HalfOpenCone]]:
    """All (τ, C0 ∩ N_τ(P)) with nonempty intersection, τ given by vertex indices."""
    out = []
    for face in P.faces():
        eqs, strict = P.normal_cone(face)
        weak = eqs + [tuple(-x for x in e) for e in eqs]
        piece = C0.refine(weak=weak, strict=strict)
        if not piece.is_empty():
            out.append((face, piece))
    return out
