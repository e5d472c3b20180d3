import pytest
from hypothesis import given, settings, strategies as st

from toriczeta.ideals import (MoreEquationsThanVariables, PolyIdeal, _poly_add, _poly_mul, groebner_basis,
                              jacobian_minors, normal_form, radical_contains, saturate_by_coordinates)

X1, X2 = {(1, 0): 1}, {(0, 1): 1}
ONE2 = {(0, 0): 1}


def same_ideal(gens_a, gens_b, n):
    A, B = PolyIdeal(gens_a, n), PolyIdeal(gens_b, n)
    return all(B.contains(g) for g in A.gens) and all(A.contains(g) for g in B.gens)


def test_groebner_examples():
    assert groebner_basis(PolyIdeal([X1], 2)) == [X1]
    lin = {(0, 1): 1, (1, 0): -1}
    quad = {(0, 2): 1, (2, 0): -1}
    G = groebner_basis(PolyIdeal([lin, quad], 2))
    assert same_ideal(G, [lin], 2)
    assert groebner_basis(PolyIdeal([ONE2], 2)) == [ONE2]


def test_generators_reduce_to_zero():
    gens = [{(2, 1): 1, (0, 1): -3}, {(1, 2): 2, (1, 0): 1, (0, 0): -1}]
    G = groebner_basis(PolyIdeal(gens, 2))
    assert all(not normal_form(g, G) for g in gens)


def test_radical_contains_examples():
    assert radical_contains(PolyIdeal([{(2, 0): 1}], 2), X1)
    assert not radical_contains(PolyIdeal([{(0, 1): 1, (1, 0): -1}], 2), {(1, 1): 1})
    assert radical_contains(PolyIdeal([ONE2], 2), {(3, 1): 7})


def test_jacobian_minors_examples():
    lin = {(0, 1): 1, (1, 0): -1}
    quad = {(0, 2): 1, (2, 0): -1}
    (m,) = jacobian_minors([lin, quad], 2)
    assert same_ideal([m], [{(1, 0): 2, (0, 1): -2}], 2)
    assert m == {(1, 0): 2, (0, 1): -2} or m == {(1, 0): -2, (0, 1): 2}
    f = {(2, 1): 1, (0, 0): 1}
    assert jacobian_minors([f], 2) == [{(1, 1): 2}, {(2, 0): 1}]
    assert jacobian_minors([ONE2, {(0, 0): 5}], 2) == [{}]
    with pytest.raises(MoreEquationsThanVariables):
        jacobian_minors([X1, X2, ONE2], 2)


def test_saturation_examples():
    I = PolyIdeal([{(1, 1): 1, (1, 0): -1}], 2)  # X1(X2 - 1)
    S = saturate_by_coordinates(I)
    assert same_ideal(S.gens, [{(0, 1): 1, (0, 0): -1}], 2)
    S2 = saturate_by_coordinates(S)
    assert same_ideal(S2.gens, S.gens, 2)
    assert saturate_by_coordinates(PolyIdeal([X1], 2)).is_unit()


# -- properties -------------------------------------------------------------------------

exps = st.tuples(st.integers(0, 2), st.integers(0, 2))
polys = st.dictionaries(exps, st.integers(-3, 3).filter(bool), min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys, polys)
def test_ideal_membership_consistency(f, g, h, k):
    I = PolyIdeal([f, h], 2)
    G = I.groebner_basis()
    combo = _poly_add(_poly_mul(f, g), _poly_mul(h, k))
    if combo:
        assert not normal_form(combo, G)


@settings(max_examples=40, deadline=None)
@given(exps.filter(any), exps, st.integers(1, 5))
def test_radical_of_monomial_ideal(a, b, k):
    # b in rad<X^a> iff some power of X^b is divisible by X^a
    I = PolyIdeal([{a: 1}], 2)
    g = {b: 1}
    explicit = any(PolyIdeal([{a: 1}], 2).contains({tuple(k2 * x for x in b): 1}) for k2 in range(1, 6))
    assert radical_contains(I, g) == explicit


@settings(max_examples=25, deadline=None)
@given(polys, polys)
def test_saturation_idempotent_and_larger(f, g):
    I = PolyIdeal([f, g], 2)
    S = saturate_by_coordinates(I)
    assert all(S.contains(p) for p in I.gens)
    assert same_ideal(saturate_by_coordinates(S).gens, S.gens, 2)
