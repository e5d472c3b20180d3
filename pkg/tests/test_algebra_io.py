import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import data_path, lp, problem
from toriczeta.algebra_io import (AlgebraInput, InputError, build_problem, flat_index, generic_matrix_rows,
                                  laurent_family, load_document, parse_document)
from toriczeta.engine import RunConfig, topological_zeta_function

NAMES = ["abelian1", "abelian2", "abelian3", "abelian4", "heisenberg", "zx4", "fil4"]


def test_flat_index_layout():
    d = 3
    order = [flat_index(i, j, d) for i in range(d) for j in range(i, d)]
    assert order == list(range(6))
    rows = generic_matrix_rows(d)
    assert not rows[1][0] and not rows[2][1]
    assert rows[1][2] == lp({(0, 0, 0, 0, 1, 0): 1}, 6)


def test_abelian_has_empty_family():
    for d in range(1, 5):
        P = problem(f"abelian{d}")
        assert P.T0.polys == ()
        assert P.n == d * (d + 1) // 2
        assert P.shifts == list(range(1, d + 1))


def test_heisenberg_family():
    P = problem("heisenberg")
    assert P.T0.polys == (lp({(1, 0, 0, 1, 0, -1): 1}, 6),)
    # beta picks the diagonal x11, x22, x33
    assert [row.index(1) for row in P.beta] == [0, 3, 5]


def test_fil4_sizes():
    P = problem("fil4")
    assert P.n == 15 and P.rank == 5
    assert len(P.T0.polys) >= 3


@pytest.mark.parametrize("name", NAMES)
def test_determinant_clears_denominators(name):
    """Cramer's rule: det(C) times each entry is a polynomial."""
    P = problem(name)
    d = P.rank
    for f in P.T0.polys:
        shifted = f.shift(tuple(int(i in [flat_index(j, j, d) for j in range(d)]) for i in range(P.n)))
        assert all(min(e) >= 0 for e in shifted.terms)


def test_family_scales_with_constants():
    base = load_document(data_path("fil4"))
    scaled = AlgebraInput(rank=base.rank, constants=[[[3 * x for x in v] for v in row] for row in base.constants])
    a = [f.monic() for f in laurent_family(base)]
    b = [f.monic() for f in laurent_family(scaled)]
    assert a == b


def test_modes_ideal_and_submodule():
    zx2 = {"rank": 2, "symmetry": "symmetric", "products": [[1, 1, [1, 0]], [1, 2, [0, 1]]]}  # basis 1, X
    one = lp({(0, 0, 0): 1}, 3)
    assert laurent_family(parse_document(zx2)) == [lp({(1, 0, 0): 1}, 3), lp({(1, 1, -1): 1}, 3)]
    ideal = laurent_family(parse_document(zx2, mode="ideal"))
    assert ideal == [one, lp({(1, 0, -1): 1}, 3)]
    gen = parse_document({"rank": 2, "mode": "submodule", "generators": [[[0, 1], [0, 0]]]})
    # multiplication by X alone; the ideal family also carries the unit
    assert laurent_family(gen) == ideal[1:]


@pytest.mark.parametrize("doc, msg", [
    ([], "mapping"),
    ({"rank": 0}, "rank"),
    ({"rank": 2, "mode": "ring"}, "mode"),
    ({"rank": 2, "colour": 1}, "unknown keys"),
    ({"rank": 2, "products": [[1, 3, [0, 1]]]}, "out of range"),
    ({"rank": 2, "products": [[1, 2, [0, 1, 0]]]}, "2 integers"),
    ({"rank": 2, "products": [[1, 1, [0, 1]]], "symmetry": "antisymmetric"}, "nonzero square"),
    ({"rank": 2, "products": [[1, 2, [0, 1]], [2, 1, [1, 0]]], "symmetry": "symmetric"}, "conflicting"),
    ({"rank": 2, "symmetry": "cyclic"}, "symmetry"),
    ({"rank": 2, "mode": "submodule"}, "generators"),
    ({"rank": 2, "mode": "submodule", "generators": [[[0, 1]]]}, "rank x rank"),
])
def test_parse_errors(doc, msg):
    with pytest.raises(InputError, match=msg):
        parse_document(doc)


def test_load_rejects_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{rank: 2")
    with pytest.raises(InputError, match="not valid JSON"):
        load_document(str(p))


def _zeta(doc):
    P = build_problem(parse_document(doc))
    out = topological_zeta_function(P.T0, P.beta, P.shifts, RunConfig())
    assert out.ok, out.reason
    return out.result


def test_heisenberg_basis_order():
    want = _zeta(json.load(open(data_path("heisenberg"))))
    for products in ([[2, 1, [0, 0, 1]]], [[1, 3, [0, 1, 0]]]):
        got = _zeta({"rank": 3, "symmetry": "antisymmetric", "products": products})
        assert got == want
    assert want(Fraction(5)) == Fraction(3, 2 * 5 * 4 * 7)
    # centre first: one entry is a perfect square, which no reduction can resolve
    P = build_problem(parse_document({"rank": 3, "symmetry": "antisymmetric", "products": [[2, 3, [1, 0, 0]]]}))
    out = topological_zeta_function(P.T0, P.beta, P.shifts, RunConfig())
    assert out.phase == "reduce" and "singular" in out.reason


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.data())
def test_family_entries_have_monomial_denominators(d, data):
    prods = []
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            if data.draw(st.booleans()):
                prods.append([i, j, data.draw(st.lists(st.integers(-2, 2), min_size=d, max_size=d))])
    inp = AlgebraInput.from_products(d, prods)
    n = d * (d + 1) // 2
    diag = tuple(int(k in [flat_index(j, j, d) for j in range(d)]) for k in range(n))
    fam = laurent_family(inp)
    assert len({f.monic() for f in fam}) == len(fam)
    for f in fam:
        assert f.nvars == n
        assert all(min(e) >= 0 for e in f.shift(diag).terms)
