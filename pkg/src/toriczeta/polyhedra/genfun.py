"""Lattice-point generating functions of half-open cones."""

from __future__ import annotations

from collections import defaultdict
from typing import Sequence

from .cones import HalfOpenCone
from .lattice import Vector, dot, vecmat
from .triangulation import SimplicialCone, open_parallelepiped_points, placing_triangulation, pulling_triangulation


class GeneratingFunction:
    """Formal sum of c·(Σ λ^β)/Π(1 − λ^ρ) over a list of pieces."""

    def __init__(self, nvars: int, pieces=()):
        self.nvars = nvars
        self.pieces: list[tuple[int, tuple[Vector, ...], tuple[Vector, ...]]] = [
            (int(c), tuple(map(tuple, num)), tuple(map(tuple, den))) for c, num, den in pieces
        ]
        for _, _, den in self.pieces:
            for r in den:
                if not any(r) or min(r) < 0:
                    raise ValueError(f"bad denominator ray {r}")

    def series(self, degree: int) -> dict[Vector, int]:
        """Power-series coefficients of all monomials of total degree <= degree."""
        total: dict[Vector, int] = defaultdict(int)
        for c, num, den in self.pieces:
            part: dict[Vector, int] = defaultdict(int)
            for b in num:
                if sum(b) <= degree:
                    part[b] += 1
            for r in den:
                nxt: dict[Vector, int] = defaultdict(int)
                for v, x in part.items():
                    w = v
                    while sum(w) <= degree:
                        nxt[w] += x
                        w = tuple(a + b for a, b in zip(w, r))
                part = nxt
            for v, x in part.items():
                total[v] += c * x
        return {v: x for v, x in total.items() if x}

    def __repr__(self):
        return f"GeneratingFunction({self.pieces})"


def generating_function(C0: HalfOpenCone, order: Sequence[int] | None = None,
                        method: str = "placing") -> GeneratingFunction:
    """Generating function of the lattice points of C0.

    The closure is triangulated; C0 is the disjoint union of the relative
    interiors of those cones of the triangulation whose relative interior
    lies in C0, and each such open simplicial cone contributes its open
    parallelepiped over the product of the ray factors.
    """
    n = C0.n
    if C0.is_empty():
        return GeneratingFunction(n)
    K = C0.closure()
    rays = list(K.rays)
    dim = C0.dim
    if method == "pulling":
        simplices = pulling_triangulation(len(rays), K.facet_masks(), dim, order)
    else:
        simplices = placing_triangulation(rays, order)
    faces: set[int] = set()
    for s in simplices:
        mask = 0
        for i in s:
            mask |= 1 << i
        sub = mask
        while True:
            faces.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & mask
    pieces = []
    for f in sorted(faces):
        idx = [i for i in range(len(rays)) if f >> i & 1]
        x = [0] * n
        for i in idx:
            for j, v in enumerate(rays[i]):
                x[j] += v
        if all(dot(chi, x) > 0 for chi in C0.strict):
            sc = SimplicialCone([rays[i] for i in idx])
            num = open_parallelepiped_points(sc) if idx else [tuple([0] * n)]
            pieces.append((1, num, sc.rays))
    return GeneratingFunction(n, pieces)


def substitute_monomial(G: GeneratingFunction, A: Sequence[Sequence[int]]) -> GeneratingFunction:
    """Apply λ^v ↦ Y^{vA}; A is n×(m+1) nonnegative with first column all ones."""
    if len(A) != G.nvars:
        raise ValueError("substitution matrix has the wrong number of rows")
    if any(row[0] != 1 for row in A):
        raise ValueError("first column of the substitution matrix must be all ones")
    if any(x < 0 for row in A for x in row):
        raise ValueError("substitution matrix must be nonnegative")
    m1 = len(A[0])
    pieces = []
    for c, num, den in G.pieces:
        pieces.append((c, [vecmat(b, A) for b in num], [vecmat(r, A) for r in den]))
    return GeneratingFunction(m1, pieces)


def brute_force_points(C0: HalfOpenCone, degree: int) -> dict[Vector, int]:
    """Lattice points of C0 of total degree <= degree, by enumeration."""
    from itertools import product

    out = {}
    for w in product(range(degree + 1), repeat=C0.n):
        if sum(w) <= degree and C0.contains(w):
            out[tuple(w)] = 1
    return out
