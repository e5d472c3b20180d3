"""Initial toric data from structure constants or generator matrices.

A rank-d algebra with basis e_1..e_d has products e_i·e_j = Σ_k c_ij^k e_k.
Sub-objects of finite index correspond to upper triangular matrices C whose
rows span them; the closure conditions become divisibility conditions
``v(x_ii) <= v(entry)`` with entries of β(C_m, C_n)·C^{-1} (or C·M·C^{-1}),
which are Laurent polynomials because C^{-1} only inverts the diagonal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .laurent import LaurentPolynomial
from .polyhedra.cones import HalfOpenCone
from .toric import ToricDatum

MODES = ("subalgebra", "ideal", "submodule")


class InputError(ValueError):
    pass


@dataclass
class AlgebraInput:
    rank: int
    mode: str = "subalgebra"
    # constants[i][j] is the coefficient vector of e_i·e_j (0-based)
    constants: list = field(default_factory=list)
    generators: list = field(default_factory=list)
    name: str | None = None

    def __post_init__(self):
        d = self.rank
        if not isinstance(d, int) or d < 1:
            raise InputError("rank must be a positive integer")
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}")
        if self.mode == "submodule":
            if not self.generators:
                raise InputError("submodule mode needs at least one generator matrix")
            for M in self.generators:
                if len(M) != d or any(len(row) != d for row in M):
                    raise InputError("generator matrices must be rank x rank")
        else:
            if not self.constants:
                self.constants = [[[0] * d for _ in range(d)] for _ in range(d)]
            if len(self.constants) != d or any(len(r) != d or any(len(v) != d for v in r) for r in self.constants):
                raise InputError("structure constants must form a rank x rank x rank array")

    @classmethod
    def from_products(cls, rank: int, products, mode: str = "subalgebra", symmetry: str | None = None,
                      name: str | None = None) -> "AlgebraInput":
        """Build from (i, j, vector) entries with 1-based indices.

        ``symmetry`` may be "antisymmetric" (Lie brackets: e_j·e_i = -e_i·e_j)
        or "symmetric" (commutative products) to fill in the transposed entries.
        """
        d = rank
        c = [[[0] * d for _ in range(d)] for _ in range(d)]
        seen = {}
        for item in products:
            try:
                i, j, vec = item
            except (TypeError, ValueError):
                raise InputError(f"bad product entry {item!r}") from None
            if not (isinstance(i, int) and isinstance(j, int) and 1 <= i <= d and 1 <= j <= d):
                raise InputError(f"product index out of range: {item!r}")
            if len(vec) != d or not all(isinstance(x, int) and not isinstance(x, bool) for x in vec):
                raise InputError(f"coefficient vector must have {d} integers: {item!r}")
            entries = [(i - 1, j - 1, list(vec))]
            if symmetry == "antisymmetric" and i != j:
                entries.append((j - 1, i - 1, [-x for x in vec]))
            elif symmetry == "symmetric" and i != j:
                entries.append((j - 1, i - 1, list(vec)))
            elif symmetry == "antisymmetric" and any(vec):
                raise InputError(f"antisymmetric product with nonzero square: {item!r}")
            for a, b, v in entries:
                if (a, b) in seen and seen[(a, b)] != v:
                    raise InputError(f"conflicting products for ({a + 1}, {b + 1})")
                seen[(a, b)] = v
                c[a][b] = v
        if symmetry not in (None, "antisymmetric", "symmetric"):
            raise InputError(f"unknown symmetry {symmetry!r}")
        return cls(rank=d, mode=mode, constants=c, name=name)


@dataclass
class ProblemInstance:
    T0: ToricDatum
    beta: list
    shifts: list
    rank: int
    mode: str

    @property
    def n(self) -> int:
        return self.T0.n


def flat_index(i: int, j: int, d: int) -> int:
    """Position of x_ij (0-based, i <= j) in the flattening x_11..x_1d, x_22, .., x_dd."""
    return i * d - i * (i - 1) // 2 + (j - i)


def generic_matrix_rows(d: int) -> list[list[LaurentPolynomial]]:
    n = d * (d + 1) // 2
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            if j < i:
                row.append(LaurentPolynomial.zero(n))
            else:
                row.append(LaurentPolynomial.var(flat_index(i, j, d), n))
        rows.append(row)
    return rows


def _inverse_upper(C: list[list[LaurentPolynomial]]) -> list[list[LaurentPolynomial]]:
    """Inverse of an upper triangular matrix with monomial diagonal, by back-substitution."""
    d = len(C)
    n = C[0][0].nvars
    inv = [[LaurentPolynomial.zero(n) for _ in range(d)] for _ in range(d)]
    for i in range(d):
        inv[i][i] = C[i][i] ** -1
    for i in range(d):
        for j in range(i + 1, d):
            acc = LaurentPolynomial.zero(n)
            for k in range(i, j):
                if inv[i][k] and C[k][j]:
                    acc = acc + inv[i][k] * C[k][j]
            inv[i][j] = -(acc * inv[j][j])
    return inv


def _row_times(v: Sequence[LaurentPolynomial], M) -> list[LaurentPolynomial]:
    n = v[0].nvars
    d = len(M[0])
    out = []
    for k in range(d):
        acc = LaurentPolynomial.zero(n)
        for i, x in enumerate(v):
            if x and M[i][k]:
                acc = acc + x * M[i][k]
        out.append(acc)
    return out


def _bracket(x: Sequence[LaurentPolynomial], y: Sequence[LaurentPolynomial], c) -> list[LaurentPolynomial]:
    d = len(x)
    n = x[0].nvars
    out = [LaurentPolynomial.zero(n) for _ in range(d)]
    for i in range(d):
        if not x[i]:
            continue
        for j in range(d):
            if not y[j]:
                continue
            vec = c[i][j]
            if not any(vec):
                continue
            p = x[i] * y[j]
            for k in range(d):
                if vec[k]:
                    out[k] = out[k] + p * vec[k]
    return out


def multiplication_matrices(inp: AlgebraInput) -> list[list[list[int]]]:
    """Left and right multiplication by each basis element, acting on row vectors."""
    d = inp.rank
    c = inp.constants
    mats = []
    for a in range(d):
        mats.append([[c[a][i][k] for k in range(d)] for i in range(d)])
        mats.append([[c[i][a][k] for k in range(d)] for i in range(d)])
    return mats


def laurent_family(inp: AlgebraInput) -> list[LaurentPolynomial]:
    """The nonzero entries, deduplicated up to scalars in order of first appearance."""
    d = inp.rank
    C = generic_matrix_rows(d)
    Cinv = _inverse_upper(C)
    out: list[LaurentPolynomial] = []
    seen = set()

    def emit(vec):
        for f in vec:
            if f and f.monic() not in seen:
                seen.add(f.monic())
                out.append(f)

    if inp.mode == "subalgebra":
        for m in range(d):
            for k in range(d):
                emit(_row_times(_bracket(C[m], C[k], inp.constants), Cinv))
    else:
        mats = multiplication_matrices(inp) if inp.mode == "ideal" else inp.generators
        for M in mats:
            if not any(any(r) for r in M):
                continue
            for m in range(d):
                emit(_row_times(_row_times(C[m], M), Cinv))
    return out


def build_problem(inp: AlgebraInput) -> ProblemInstance:
    d = inp.rank
    n = d * (d + 1) // 2
    beta = [[int(k == flat_index(j, j, d)) for k in range(n)] for j in range(d)]
    T0 = ToricDatum(HalfOpenCone(n), laurent_family(inp), 0)
    return ProblemInstance(T0, beta, list(range(1, d + 1)), d, inp.mode)


# -- input documents -----------------------------------------------------------------


def parse_document(doc: dict, mode: str | None = None) -> AlgebraInput:
    """Validate an input document (already decoded from JSON).

    Keys: rank, mode (optional, may be overridden), name (optional), and either
    products [[i, j, [c_1..c_d]], ...] with optional symmetry, or generators
    [matrix, ...] for submodule mode.
    """
    if not isinstance(doc, dict):
        raise InputError("document must be a mapping")
    allowed = {"rank", "mode", "name", "products", "symmetry", "generators"}
    extra = set(doc) - allowed
    if extra:
        raise InputError(f"unknown keys: {sorted(extra)}")
    rank = doc.get("rank")
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise InputError("rank must be a positive integer")
    mode = mode or doc.get("mode", "subalgebra")
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}")
    name = doc.get("name")
    if mode == "submodule":
        gens = doc.get("generators")
        if not isinstance(gens, list) or not gens:
            raise InputError("submodule mode needs a nonempty 'generators' list")
        for M in gens:
            if not isinstance(M, list) or any(not isinstance(r, list) for r in M) or \
                    any(not isinstance(x, int) or isinstance(x, bool) for r in M for x in r):
                raise InputError("generators must be integer matrices")
        return AlgebraInput(rank=rank, mode=mode, generators=gens, name=name)
    products = doc.get("products", [])
    if not isinstance(products, list):
        raise InputError("'products' must be a list")
    return AlgebraInput.from_products(rank, products, mode=mode, symmetry=doc.get("symmetry"), name=name)


def load_document(path: str, mode: str | None = None) -> AlgebraInput:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON: {exc}") from None
    return parse_document(doc, mode)
