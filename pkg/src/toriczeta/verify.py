"""Built-in property suites behind ``toriczeta verify``.

Every suite draws from its own ``random.Random`` seeded from the global seed,
so reports are reproducible and independent of suite order.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Callable

from .euler import CacheFormatError, euler_characteristic, read_cache_records
from .laurent import LaurentPolynomial
from .polyhedra.cones import HalfOpenCone
from .polyhedra.genfun import brute_force_points, generating_function
from .polyhedra.lattice import det, matmul, smith_normal_form
from .toric import ToricDatum, balance, is_regular, simplify
from .topeval import wj_reduction


class Violation(AssertionError):
    pass


def _check(cond, msg):
    if not cond:
        raise Violation(msg)


def random_cone(rng: random.Random, n: int, max_weak=2, max_strict=2, bound=2) -> HalfOpenCone:
    def vec():
        return [rng.randint(-bound, bound) for _ in range(n)]

    return HalfOpenCone(n, [vec() for _ in range(rng.randint(0, max_weak))],
                        [vec() for _ in range(rng.randint(0, max_strict))])


def random_polynomial(rng: random.Random, n: int, terms=3, bound=2) -> LaurentPolynomial:
    t = {}
    for _ in range(terms):
        e = tuple(rng.randint(0, bound) for _ in range(n))
        t[e] = t.get(e, 0) + rng.choice([-2, -1, 1, 2])
    return LaurentPolynomial(t, n)


def _box(n, N):
    return product(range(N + 1), repeat=n)


# -- suites ------------------------------------------------------------------------------


def suite_genfun(rng, count):
    for k in range(count):
        n = rng.randint(1, 3)
        C = random_cone(rng, n)
        got = generating_function(C).series(8)
        want = brute_force_points(C, 8)
        _check(got == want, f"cone #{k} {C}: series differs from enumeration")
    return f"{count} cones"


def suite_triangulations(rng, count):
    checked = k = 0
    while checked < count:
        k += 1
        n = rng.randint(1, 3)
        C = random_cone(rng, n, max_strict=1)
        if C.is_empty():
            continue
        m = rng.randint(1, 3)
        beta = [[rng.randint(0, 2) for _ in range(n)] for _ in range(m)]
        shifts = [rng.randint(0, 3) for _ in range(m)]
        d = C.dim
        nrays = len(C.closure().rays)
        order = list(range(nrays))
        rng.shuffle(order)
        variants = [wj_reduction(C, beta, shifts, d),
                    wj_reduction(C, beta, shifts, d, order=order),
                    wj_reduction(C, beta, shifts, d, method="pulling")]
        for _ in range(5):
            s = Fraction(rng.randint(100, 10_000), rng.randint(1, 97))
            vals = [S.evaluate(s) for S in variants]
            _check(len(set(vals)) == 1, f"cone #{k} {C}: triangulations disagree at s={s}: {vals}")
        checked += 1
    return f"{checked} cones x 5 points"


def _assert_partition(C: HalfOpenCone, pieces, N, label):
    for w in _box(C.n, N):
        hits = sum(P.contains(w) for P in pieces)
        want = 1 if C.contains(w) else 0
        _check(hits == want, f"{label}: point {w} covered {hits} times, expected {want}")


def suite_partitions(rng, count):
    for k in range(count):
        n = rng.randint(2, 3)
        C = random_cone(rng, n, max_strict=1)
        f = random_polynomial(rng, n)
        T = ToricDatum(C, [f] if f else [])
        pieces = [P.cone for P in balance(T)]
        _assert_partition(C, pieces, 5, f"balance #{k} {f} on {C}")
        for P in balance(T):
            _check(P.is_balanced(), f"balance #{k}: unbalanced piece {P}")
        # the two halves of a reduction split
        if not C.is_empty():
            dvec = [rng.randint(-2, 2) for _ in range(n)]
            halves = [C.refine(weak=[dvec]), C.refine(strict=[[-x for x in dvec]])]
            _assert_partition(C, halves, 5, f"reduce split #{k} {dvec} on {C}")
    return f"{count} data"


def suite_snf(rng, count):
    for k in range(count):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        B = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)]
        Cm, D, A = smith_normal_form(B)
        _check(matmul(matmul(Cm, B), A) == D, f"#{k} {B}: C·B·A != D")
        _check(abs(det(Cm)) == 1 and abs(det(A)) == 1, f"#{k} {B}: transforms not unimodular")
        diag = [D[i][i] for i in range(min(m, n))]
        _check(all(D[i][j] == 0 for i in range(m) for j in range(n) if i != j), f"#{k} {B}: D not diagonal")
        _check(all(x >= 0 for x in diag), f"#{k} {B}: negative diagonal")
        for a, b in zip(diag, diag[1:]):
            _check((a == 0 and b == 0) or (a != 0 and b % a == 0), f"#{k} {B}: divisibility chain broken {diag}")
    return f"{count} matrices"


def suite_euler(rng, count):
    x = lambda i, n: LaurentPolynomial.var(i, n)  # noqa: E731
    one = lambda n: LaurentPolynomial.const(1, n)  # noqa: E731
    for n in range(1, 5):
        _check(euler_characteristic([], n) == 0, f"chi(T^{n}) != 0")
    _check(euler_characteristic([x(0, 2) + x(1, 2) + one(2)], 2) == -1, "chi(V(X1+X2+1)) != -1")
    for n in range(2, 5):
        # random binomial subtori X^a = X^b
        a = [rng.randint(0, 3) for _ in range(n)]
        b = [rng.randint(0, 3) for _ in range(n)]
        if a == b:
            b[0] += 1
        f = LaurentPolynomial({tuple(a): 1, tuple(b): -1}, n)
        _check(euler_characteristic([f], n) == 0, f"chi(V({f})) != 0 for a subtorus")
    return "tori, line, subtori"


def suite_simplify_flags(rng, count):
    seen = 0
    for k in range(count):
        n = rng.randint(2, 3)
        polys = [random_polynomial(rng, n) for _ in range(rng.randint(1, 2))]
        polys = [f for f in polys if f]
        for P in balance(ToricDatum(random_cone(rng, n, max_strict=1), polys)):
            S = simplify(P)
            _check(S.is_balanced(), f"simplify lost balance: {P}")
            if is_regular(P):
                _check(is_regular(S), f"simplify lost regularity: {P}")
            seen += 1
    return f"{seen} balanced data"


SUITES: list[tuple[str, Callable, int, int]] = [
    # name, function, full count, quick count
    ("generating functions vs enumeration", suite_genfun, 50, 10),
    ("triangulation independence of W_J", suite_triangulations, 20, 5),
    ("balance/reduce partitions", suite_partitions, 20, 5),
    ("Smith normal form identities", suite_snf, 100, 20),
    ("Euler characteristics", suite_euler, 1, 1),
    ("simplify keeps flags", suite_simplify_flags, 15, 4),
]


def run_suites(seed: int = 7, cache_path: str | None = None, quick: bool = False) -> tuple[list[str], bool]:
    report = []
    ok = True
    for idx, (name, fn, full, small) in enumerate(SUITES):
        rng = random.Random(seed * 1000 + idx)
        try:
            detail = fn(rng, small if quick else full)
            report.append(f"PASS {name} ({detail})")
        except Violation as exc:
            ok = False
            report.append(f"FAIL {name}: {exc}")
    if cache_path:
        try:
            n = len(read_cache_records(cache_path))
            report.append(f"PASS Euler cache {cache_path} ({n} records)")
        except FileNotFoundError:
            report.append(f"PASS Euler cache {cache_path} (absent)")
        except CacheFormatError as exc:
            ok = False
            report.append(f"FAIL Euler cache {cache_path}: {exc}")
    return report, ok
