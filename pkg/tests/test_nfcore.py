from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import htplab.arithmetic.nfcore as nfcore
import htplab.utils.funcs as funcs
from htplab.utils import errors


Q = nfcore.rational_field()
G = nfcore.field_create([1, 0, 1], 1, label="gauss")
S5 = nfcore.field_create([5, 0, 1], 2, label="sqrt-5")
C2 = nfcore.field_create([-2, 0, 0, 1], 1, label="cbrt2")

coefficient = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def test_field_create():
    assert G.degree == 2
    assert G.signature == (0, 1)
    assert G.unit_rank == 0
    assert G.discriminant == -4
    assert S5.discriminant == -20
    assert C2.signature == (1, 1)
    assert C2.unit_rank == 1
    assert Q.is_rationals and Q.unit_rank == 0
    assert G.to_dict()["min_poly"] == [1, 0, 1]


def test_field_create_errors():
    with pytest.raises(errors.DegreeZero):
        nfcore.field_create([3], 1)
    with pytest.raises(errors.NotMonic):
        nfcore.field_create([1, 0, 2], 1)
    with pytest.raises(errors.Reducible):
        nfcore.field_create([0, 0, 1], 1)
    with pytest.raises(errors.Reducible):
        nfcore.field_create([-4, 0, 1], 1)
    # Z[√5] is not the maximal order at 2
    with pytest.raises(errors.DedekindFailure):
        nfcore.field_create([-5, 0, 1], 1)


def test_element_arithmetic():
    i = G.theta
    assert i * i == -1
    assert (1 + i) * (1 - i) == 2
    assert (1 + i).inverse() == G.element([Fraction(1, 2), Fraction(-1, 2)])
    assert G.element([0, 0, 1]) == -1
    assert (G.element([3, 4])).norm == 25
    assert (G.element([1, 1])).norm == 2
    assert C2.theta**3 == 2
    assert (C2.theta).norm == 2
    assert G(Fraction(3, 4)).is_rational()
    assert not G.element([Fraction(1, 2), 1]).is_integral()
    assert G.element([Fraction(1, 2), Fraction(1, 3)]).denominator() == 6


def test_field_mismatch():
    with pytest.raises(errors.FieldMismatch):
        G.theta + S5.theta
    with pytest.raises(errors.FieldMismatch):
        nfcore.elem_ops("mul", G.one, S5.one)
    with pytest.raises(errors.DivisionByZero):
        G.zero.inverse()


def test_divides():
    assert nfcore.divides(G.element([1, 1]), G(2))
    assert not nfcore.divides(G(2), G.element([1, 1]))
    assert nfcore.divides(G(3), G.element([6, 9]))
    assert nfcore.divides(Q(7), Q(0))
    with pytest.raises(errors.NotIntegral):
        nfcore.divides(G(Fraction(1, 2)), G(1))
    with pytest.raises(errors.ZeroDivisor):
        nfcore.divides(G.zero, G(1))


@settings(max_examples=40, deadline=None)
@given(a=coefficient, b=coefficient, c=coefficient, d=coefficient)
def test_norm_is_multiplicative(a, b, c, d):
    x = S5.element([a, b])
    y = S5.element([c, d])
    assert (x * y).norm == x.norm * y.norm
    if not y.is_zero():
        assert (x * y) / y == x


def test_root_boxes():
    boxes = G.root_boxes(20)
    assert len(boxes) == 2
    assert all(b.re.contains(0) for b in boxes)
    assert sorted(b.im.contains(1) for b in boxes) == [False, True]
    assert sorted(b.im.contains(-1) for b in boxes) == [False, True]
    assert all(b.re.width <= Fraction(1, 2**19) for b in boxes)
    real, *pair = C2.root_boxes(20)
    assert real.im.lo == real.im.hi == 0
    assert real.re.lo**3 <= 2 <= real.re.hi**3
    assert sorted(b.im.hi < 0 for b in pair) == [False, True]
    roots = C2.numeric_roots()
    assert abs(roots[0] - 2 ** (1 / 3)) < 1e-3
    assert all(abs(r**3 - 2) < 1e-2 for r in roots)


def test_embeddings_abs():
    bounds = nfcore.embeddings_abs(G.element([3, 4]))
    assert len(bounds) == 2
    assert all(b.contains(5) for b in bounds)
    assert all(b.width < Fraction(1, 2**40) for b in bounds)
    with pytest.raises(AssertionError):
        nfcore.embeddings_abs(G.one, precision=8)


def test_certified_abs_le():
    x = G.element([3, 4])
    assert nfcore.certified_abs_le(x, 26) == [True, True]
    assert nfcore.certified_abs_le(x, 24) == [False, False]
    # exact equality is settled once the precision cap is reached
    assert nfcore.certified_abs_le(x, 25, precision=32, cap=128) == [True, True]
    assert nfcore.certified_abs_le(x, 625, power=2, precision=32, cap=128) == [True, True]
    assert nfcore.certified_abs_le(C2.theta, 2) == [True, True, True]
    assert nfcore.certified_abs_le(Q(-3), 9) == [True]


def test_minkowski_bound():
    assert nfcore.minkowski_bound(S5) == pytest.approx(2.847, abs=1e-3)
    assert nfcore.minkowski_bound(G) == pytest.approx(1.273, abs=1e-3)
    assert nfcore.minkowski_bound(C2) == pytest.approx(2.94, abs=1e-2)


def test_roots_in_field():
    roots = nfcore.roots_in_field([Q(-4), Q(0), Q(1)])
    assert roots == [Q(-2), Q(2)]
    assert nfcore.roots_in_field([Q(2), Q(0), Q(1)]) == []
    found = nfcore.roots_in_field([G(1), G(0), G(1)])
    assert sorted(r.coeffs for r in found) == [(0, -1), (0, 1)]


def test_funcs():
    assert funcs.multiplicity(2, 48) == 4
    assert funcs.fraction_valuation(2, Fraction(3, 8)) == -3
    assert funcs.to_fraction("-5/8") == Fraction(-5, 8)
    assert funcs.parse_int(" 12 ") == 12
    assert funcs.prime_factors(360) == [2, 3, 5]
    assert funcs.int_to_json(2**60) == str(2**60)
    with pytest.raises(TypeError):
        funcs.to_fraction(0.5)
    with pytest.raises(ValueError):
        funcs.parse_int(True)
