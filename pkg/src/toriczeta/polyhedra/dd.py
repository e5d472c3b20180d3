"""Double description method over the integers.

Computes extreme rays and a lineality basis of {x : a·x >= 0, e·x = 0}.
Rays are kept as primitive integer vectors; adjacency is decided
combinatorially from bitsets of tight constraints.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .lattice import Vector, dot, primitive


class DDState:
    """Intermediate V-description plus the constraints already imposed."""

    __slots__ = ("n", "rays", "masks", "lineality", "constraints")

    def __init__(self, n: int):
        self.n = n
        self.rays: list[Vector] = []
        self.masks: list[int] = []
        self.lineality: list[Vector] = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        self.constraints: list[Vector] = []

    @classmethod
    def from_generators(cls, n, rays, lineality, constraints):
        """Resume from a known exact V-description of the cone cut out by ``constraints``."""
        st = cls(n)
        st.rays = [tuple(r) for r in rays]
        st.lineality = [tuple(l) for l in lineality]
        st.constraints = [tuple(c) for c in constraints]
        st.masks = []
        for r in st.rays:
            m = 0
            for k, c in enumerate(st.constraints):
                if dot(c, r) == 0:
                    m |= 1 << k
            st.masks.append(m)
        return st

    def _pivot_lineality(self, a: Vector):
        """Eliminate one lineality direction l with a·l != 0; return (sign of a·l, l)."""
        for idx, l in enumerate(self.lineality):
            al = dot(a, l)
            if al:
                break
        else:
            return None
        del self.lineality[idx]
        sgn = 1 if al > 0 else -1
        abs_al = abs(al)
        new_lin = []
        for m in self.lineality:
            am = dot(a, m)
            if am:
                m = primitive([abs_al * x - sgn * am * y for x, y in zip(m, l)])
            new_lin.append(m)
        self.lineality = new_lin
        new_rays = []
        for r in self.rays:
            ar = dot(a, r)
            if ar:
                r = primitive([abs_al * x - sgn * ar * y for x, y in zip(r, l)])
            new_rays.append(r)
        self.rays = new_rays
        return sgn, l

    def add_inequality(self, a: Sequence[int]) -> None:
        a = tuple(a)
        k = len(self.constraints)
        self.constraints.append(a)
        bit = 1 << k
        if not any(a):
            self.masks = [m | bit for m in self.masks]
            return
        piv = self._pivot_lineality(a)
        if piv is not None:
            sgn, l = piv
            # every remaining generator is now tight at a
            self.masks = [m | bit for m in self.masks]
            full_prev = (1 << k) - 1
            self.rays.append(tuple(sgn * x for x in l))
            self.masks.append(full_prev)
            return
        self._cut(a, bit, keep_positive=True)

    def add_equality(self, a: Sequence[int]) -> None:
        a = tuple(a)
        k = len(self.constraints)
        self.constraints.append(a)
        bit = 1 << k
        if not any(a):
            self.masks = [m | bit for m in self.masks]
            return
        piv = self._pivot_lineality(a)
        if piv is not None:
            self.masks = [m | bit for m in self.masks]
            return
        self._cut(a, bit, keep_positive=False)

    def _cut(self, a: Vector, bit: int, keep_positive: bool) -> None:
        rays, masks = self.rays, self.masks
        vals = [dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg and keep_positive:
            self.masks = [m | bit if v == 0 else m for m, v in zip(masks, vals)]
            return
        need = self.n - len(self.lineality) - 2
        new_rays: list[Vector] = []
        new_masks: list[int] = []
        for i, v in enumerate(vals):
            if v == 0:
                new_rays.append(rays[i])
                new_masks.append(masks[i] | bit)
            elif v > 0 and keep_positive:
                new_rays.append(rays[i])
                new_masks.append(masks[i])
        nr = len(rays)
        for p in pos:
            mp = masks[p]
            rp = rays[p]
            vp = vals[p]
            for q in neg:
                common = mp & masks[q]
                if need > 0 and common.bit_count() < need:
                    continue
                adjacent = True
                for t in range(nr):
                    if t != p and t != q and (common & ~masks[t]) == 0:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vq = vals[q]
                r = primitive([vp * y - vq * x for x, y in zip(rp, rays[q])])
                new_rays.append(r)
                new_masks.append(common | bit)
        self.rays = new_rays
        self.masks = new_masks


def double_description(
    n: int,
    inequalities: Iterable[Sequence[int]] = (),
    equalities: Iterable[Sequence[int]] = (),
    start: DDState | None = None,
) -> DDState:
    """Run the DD method; equalities are imposed before inequalities."""
    st = start if start is not None else DDState(n)
    for e in equalities:
        st.add_equality(e)
    ineqs = [tuple(a) for a in inequalities]
    # unit-vector constraints consume lineality cheaply; do them first
    ineqs.sort(key=lambda a: (sum(1 for x in a if x) != 1, a))
    for a in ineqs:
        st.add_inequality(a)
    return st
