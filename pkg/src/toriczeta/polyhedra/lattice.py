"""Exact integer linear algebra: ranks, kernels, determinants, Smith normal form."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple[int, ...]


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def primitive(v: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = content(v)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b) if x and y)


def integralize(v: Sequence[Fraction | int]) -> Vector:
    """Primitive integer vector that is a positive multiple of a rational vector."""
    den = 1
    for x in v:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = den * x.denominator // gcd(den, x.denominator)
    return primitive([int(x * den) for x in v])


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals, by fraction-free elimination."""
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r]
        pc = p[c]
        for i in range(r + 1, len(mat)):
            row = mat[i]
            x = row[c]
            if x:
                g = gcd(pc, x)
                a, b = pc // g, x // g
                mat[i] = [a * y - b * z for y, z in zip(row, p)]
        r += 1
        if r == len(mat):
            break
    return r


def row_echelon(rows: Sequence[Sequence[Fraction | int]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Integer basis (primitive vectors) of the rational right kernel {x : rows·x = 0}."""
    ech, pivots = row_echelon(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(ech, pivots):
            v[pc] = -row[f]
        basis.append(integralize(v))
    return basis


def solve_rational(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction] | None:
    """Some rational solution x of rows·x = rhs, or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    if not aug:
        return []
    ncols = len(aug[0]) - 1
    ech, pivots = row_echelon(aug)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(ech, pivots):
        x[pc] = row[ncols]
    return x


def det(mat: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss)."""
    m = [list(r) for r in mat]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if m[i][k]), None)
            if sw is None:
                return 0
            m[k], m[sw] = m[sw], m[k]
            sign = -sign
        pk = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - a * rk[j]) // prev
        prev = pk
    return sign * m[n - 1][n - 1]


def _snf_diagonal(mat: list[list[int]]) -> list[int]:
    """Invariant factors of an integer matrix (no transforms)."""
    m = [r[:] for r in mat if any(r)]
    diag = []
    while m:
        ncols = len(m[0])
        # peel off unit pivots first; they are cheap and frequent
        found = None
        for i, row in enumerate(m):
            for c in range(ncols):
                if row[c] == 1 or row[c] == -1:
                    found = (i, c)
                    break
            if found:
                break
        if found is None:
            break
        i, c = found
        p = m[i]
        s = p[c]
        rest = []
        for k, row in enumerate(m):
            if k == i:
                continue
            x = row[c]
            if x:
                f = x * s
                row = [a - f * b for a, b in zip(row, p)]
            del row[c]
            if any(row):
                rest.append(row)
        m = rest
        diag.append(1)
    if m:
        _, d, _ = smith_normal_form(m, transforms=False)
        diag.extend(d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i])
    return diag


def lattice_index(rows: Sequence[Sequence[int]]) -> int:
    """Index of the lattice spanned by independent integer rows inside its saturation.

    This is the product of the invariant factors, i.e. the multiplicity of the
    simplicial cone spanned by the rows.
    """
    if rows and len(rows) == len(rows[0]):
        return abs(det(rows))
    prod = 1
    for d in _snf_diagonal([list(r) for r in rows]):
        prod *= d
    return prod


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(B: Sequence[Sequence[int]], transforms: bool = True):
    """Return (C, D, A) with C·B·A = D, C and A unimodular, D diagonal, d_i | d_{i+1}.

    With ``transforms=False`` the matrices C and A are returned as None.
    """
    D = [list(r) for r in B]
    m = len(D)
    n = len(D[0]) if m else 0
    C = _identity(m) if transforms else None
    A = _identity(n) if transforms else None

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        if C is not None:
            C[i], C[j] = C[j], C[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        if A is not None:
            for row in A:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f*row_src
        D[dst] = [a + f * b for a, b in zip(D[dst], D[src])]
        if C is not None:
            C[dst] = [a + f * b for a, b in zip(C[dst], C[src])]

    def add_col(dst, src, f):
        for row in D:
            row[dst] += f * row[src]
        if A is not None:
            for row in A:
                row[dst] += f * row[src]

    t = 0
    while t < min(m, n):
        # smallest nonzero entry in the trailing block becomes the pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = D[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        done = False
            if done:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest remaining entry of row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if D[i][t] and abs(D[i][t]) < best[0]:
                    best = (abs(D[i][t]), i, t)
            for j in range(t + 1, n):
                if D[t][j] and abs(D[t][j]) < best[0]:
                    best = (abs(D[t][j]), t, j)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            if C is not None:
                C[t] = [-x for x in C[t]]
        t += 1
    return C, D, A


def complete_to_unimodular(v: Sequence[int], position: int = -1) -> list[list[int]]:
    """A unimodular integer matrix whose column ``position`` equals the primitive vector v."""
    n = len(v)
    if content(v) != 1:
        raise ValueError("vector is not primitive")
    # C·v^T·A = D with v^T an n×1 column: C v = (1,0,..,0)^T, so v = C^{-1} e_1.
    C, _, _ = smith_normal_form([[x] for x in v])
    Cinv = unimodular_inverse(C)
    cols = [[Cinv[i][j] for i in range(n)] for j in range(n)]
    # the first column of C^{-1} is v (up to the SNF sign, which is +1)
    pos = position % n
    cols[0], cols[pos] = cols[pos], cols[0]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def unimodular_inverse(M: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    ech, _ = row_echelon(aug)
    inv = [[int(x) for x in row[n:]] for row in ech]
    return inv


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    bt = list(zip(*b))
    return [[dot(r, c) for c in bt] for r in a]


def vecmat(v: Sequence[int], M: Sequence[Sequence[int]]) -> Vector:
    """Row vector times matrix."""
    ncols = len(M[0]) if M else 0
    out = [0] * ncols
    for x, row in zip(v, M):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return tuple(out)


def solve_integer(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> Vector | None:
    """An integer x with rows·x = rhs, or None if there is none."""
    m = len(rows)
    if m == 0:
        return None
    n = len(rows[0])
    C, D, A = smith_normal_form(rows)
    cb = [dot(C[i], rhs) for i in range(m)]
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if cb[i]:
                return None
        else:
            if cb[i] % d:
                return None
            y[i] = cb[i] // d
    return tuple(dot(A[i], y) for i in range(n))
