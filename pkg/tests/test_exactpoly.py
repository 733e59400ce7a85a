"""Polynomial kernel: arithmetic, substitution, evaluation, grading,
orders, and text round-trips."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ribetkit.errors import StructuralError
from ribetkit.exactpoly import (
    DEGREVLEX,
    GF,
    LEX,
    QQ,
    ZZ,
    Polynomial,
    VariableTable,
    from_text,
    to_text,
)

T3 = VariableTable(["x", "y", "z"])
TBC = VariableTable(["a1", "b1", "c1", "d1"], ["a", "b", "c", "d"])


def V(i, ring=QQ, table=T3):
    return Polynomial.var(ring, table, i)


def test_difference_of_squares():
    x, y = V(0), V(1)
    assert (x + y) * (x - y) == x * x - y * y


def test_reduced_charpoly_product():
    # (x - chi)(x - psi) expands to x^2 - (chi + psi) x + chi psi.
    t = VariableTable(["x", "chi", "psi"])
    x, chi, psi = (Polynomial.var(QQ, t, i) for i in range(3))
    lhs = (x - chi) * (x - psi)
    rhs = x * x - (chi + psi) * x + chi * psi
    assert lhs == rhs


def test_gf5_product_normalizes():
    x = Polynomial.var(GF(5), T3, 0)
    assert (2 * x) * (3 * x) == x * x


def test_structurally_equal_tables_are_compatible():
    clone = VariableTable(["x", "y", "z"])
    assert V(0) + Polynomial.var(QQ, clone, 0) == 2 * V(0)


def test_mismatched_tables_error():
    other = VariableTable(["u", "v", "w"])
    with pytest.raises(StructuralError):
        V(0) + Polynomial.var(QQ, other, 0)
    with pytest.raises(StructuralError):
        V(0) * Polynomial.var(GF(7), T3, 0)


def test_substitute_tau_style():
    # c -> c + (d - a) x - b x^2 applied to f = c.
    ext = TBC.extend(["x"], ["param"])
    a, b, c, d = (Polynomial.var(QQ, ext, i) for i in range(4))
    x = Polynomial.var(QQ, ext, 4)
    f = Polynomial.var(QQ, TBC, 2)
    image = c + (d - a) * x - b * x * x
    assert f.substitute({2: image}) == image


def test_substitute_identity_and_zero_product():
    x, y = V(0), V(1)
    f = x * x * y + 3 * y
    assert f.substitute({0: x, 1: y}) == f
    # a -> -nu, d -> 0 kills a*d.
    t = VariableTable(["a", "d", "nu"])
    a, d, nu = (Polynomial.var(QQ, t, i) for i in range(3))
    assert (a * d).substitute({0: -nu, 1: Polynomial.zero(QQ, t)}).is_zero()


def test_evaluate_examples():
    x, y = V(0), V(1)
    assert (x * x + y).evaluate({0: 2, 1: 3}) == Fraction(7)
    t = VariableTable(["a", "b", "c", "d"])
    a, b, c, d = (Polynomial.var(QQ, t, i) for i in range(4))
    assert (a * d - b * c).evaluate({0: 1, 1: 0, 2: 0, 3: 1}) == 1
    assert ((x + y) ** 2).evaluate({0: 1, 1: 2}) == 9
    with pytest.raises(StructuralError):
        (x + y).evaluate({0: 1})


def test_torus_weight_examples():
    t = VariableTable(["a1", "b1", "b2", "c2", "x1"], ["a", "b", "b", "c", "x_sigma"])
    a1, b1, b2, c2, x1 = (Polynomial.var(QQ, t, i) for i in range(5))
    assert (b1 * c2).torus_weight() == 0
    # b (x - a)-style combination is isobaric of weight 1.
    assert (b1 * (x1 - a1) - b2 * (x1 - a1)).torus_weight() == 1
    assert (a1 + b1).torus_weight() is None
    assert Polynomial.zero(QQ, t).torus_weight() == 0


def test_degree_of_zero_is_minus_infinity():
    assert Polynomial.zero(QQ, T3).total_degree() == float("-inf")
    assert (V(0) * V(1)).total_degree() == 2


def test_canonical_form_cancellation():
    x = V(0)
    assert (x - x).terms == {}
    assert (x - x).is_zero()


def test_orders():
    x, y, z = V(0), V(1), V(2)
    f = x + y * y * z
    assert f.leading_term(LEX)[0] == (1, 0, 0)
    assert f.leading_term(DEGREVLEX)[0] == (0, 2, 1)
    # 1 is minimal for both orders.
    one = (0, 0, 0)
    assert LEX.key(one) <= LEX.key((1, 0, 0))
    assert DEGREVLEX.key(one) <= DEGREVLEX.key((0, 0, 1))


def test_text_round_trip_bit_exact():
    x, y, z = V(0), V(1), V(2)
    f = Fraction(3, 4) * x * x * y - z + 7
    text = to_text(f)
    assert from_text(text, QQ, T3) == f
    assert from_text("0", QQ, T3).is_zero()
    g = Polynomial.var(GF(11), T3, 0) * 9 + 5
    assert from_text(to_text(g), GF(11), T3) == g


def test_zz_rejects_fractions():
    with pytest.raises(StructuralError):
        Polynomial.const(ZZ, T3, Fraction(1, 2))


def test_gf_requires_prime():
    with pytest.raises(StructuralError):
        GF(10)
    with pytest.raises(StructuralError):
        GF(2**31 + 11)


# -- hypothesis property tests ------------------------------------------------

def polys(ring=QQ, table=T3, max_terms=4, max_exp=3):
    monos = st.tuples(*([st.integers(0, max_exp)] * len(table)))
    if ring.kind == "GF":
        coeffs = st.integers(0, ring.p - 1)
    else:
        coeffs = st.integers(-9, 9)
    return st.dictionaries(monos, coeffs, max_size=max_terms).map(
        lambda d: Polynomial(ring, table, d)
    )


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms_qq(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@settings(max_examples=60, deadline=None)
@given(polys(GF(7)), polys(GF(7)), polys(GF(7)))
def test_ring_axioms_gf7(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)))
def test_evaluation_is_ring_hom(f, g, pt):
    point = dict(enumerate(pt))
    assert (f * g).evaluate(point) == f.evaluate(point) * g.evaluate(point)
    assert (f + g).evaluate(point) == f.evaluate(point) + g.evaluate(point)


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_substitution_is_ring_hom(f, g):
    x, y = V(0), V(1)
    sub = {0: x + y, 2: x * y - 1}
    assert (f * g).substitute(sub) == f.substitute(sub) * g.substitute(sub)
    assert (f + g).substitute(sub) == f.substitute(sub) + g.substitute(sub)


@settings(max_examples=60, deadline=None)
@given(polys(table=TBC), polys(table=TBC))
def test_torus_weight_additive_on_isobaric(f, g):
    wf, wg = f.torus_weight(), g.torus_weight()
    if wf is None or wg is None or f.is_zero() or g.is_zero():
        return
    assert (f * g).torus_weight() == wf + wg


@settings(max_examples=60, deadline=None)
@given(polys())
def test_self_subtraction_is_canonical_zero(f):
    assert (f - f).terms == {}


@settings(max_examples=60, deadline=None)
@given(polys())
def test_text_round_trip_property(f):
    assert from_text(to_text(f), QQ, T3) == f
