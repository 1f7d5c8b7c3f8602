from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

import htplab.arithmetic.ideals as ideals
import htplab.arithmetic.nfcore as nfcore
from htplab.utils import errors


Q = nfcore.rational_field()
G = nfcore.field_create([1, 0, 1], 1, label="gauss")
S5 = nfcore.field_create([5, 0, 1], 2, label="sqrt-5")
R2 = nfcore.field_create([-2, 0, 1], 1, label="sqrt2")
C2 = nfcore.field_create([-2, 0, 0, 1], 1, label="cbrt2")


def test_factor_prime():
    (two,) = ideals.factor_prime(G, 2)
    assert (two.e, two.f) == (2, 1)
    (three,) = ideals.factor_prime(G, 3)
    assert (three.e, three.f, three.norm) == (1, 2, 9)
    five = ideals.factor_prime(G, 5)
    assert [(P.e, P.f) for P in five] == [(1, 1), (1, 1)]
    assert sum(P.e * P.f for P in ideals.factor_prime(C2, 5)) == 3
    (P2,) = ideals.factor_prime(S5, 2)
    assert P2.e == 2


def test_valuation_and_factor_element():
    (two,) = ideals.factor_prime(G, 2)
    assert ideals.valuation(G(2), two) == 2
    assert ideals.valuation(G.element([1, 1]), two) == 1
    assert ideals.valuation(G(Fraction(1, 4)), two) == -4
    factorization = ideals.factor_element(G.element([3, 4]))
    assert len(factorization.factors) == 1
    assert factorization.factors[0][1] == 2
    assert factorization.norm == 25
    frame = ideals.factor_element(G(Fraction(5, 2))).to_frame()
    assert list(frame.columns) == ["p", "gen_poly", "e", "f", "exponent"]
    assert sorted(frame["exponent"]) == [-2, 1, 1]
    with pytest.raises(errors.ZeroElement):
        ideals.factor_element(G.zero)


def test_coprime():
    assert ideals.coprime(G(3), G.element([1, 1]))
    assert not ideals.coprime(G(2), G.element([1, 1]))
    assert not ideals.coprime(G(0), G(1))


def test_residue_field():
    (three,) = ideals.factor_prime(G, 3)
    F9 = three.residue_field
    assert F9.size == 9
    assert F9.reduce(G.theta) == (0, 1)
    assert F9.mul(F9.reduce(G.theta), F9.reduce(G.theta)) == (2, 0)
    assert F9.reduce(G(Fraction(1, 2))) == (2, 0)
    assert len(list(F9.elements())) == 9
    (two,) = ideals.factor_prime(G, 2)
    with pytest.raises(errors.NotIntegral):
        two.residue_field.reduce(G(Fraction(1, 2)))


def test_is_principal():
    (P2,) = ideals.factor_prime(S5, 2)
    assert ideals.is_principal(ideals.IdealFactorization.of_prime(P2)) is None
    assert ideals.is_principal(ideals.IdealFactorization.of_prime(P2, 2)) == 2
    (G2,) = ideals.factor_prime(G, 2)
    assert ideals.is_principal(ideals.IdealFactorization.of_prime(G2)) == G.element([1, -1])  # noqa E501
    P7 = ideals.factor_prime(R2, 7)[0]
    with pytest.raises(errors.CapTooSmall):
        ideals.is_principal(ideals.IdealFactorization.of_prime(P7), search_cap=1)


def test_verify_class_number():
    assert ideals.verify_class_number(G)
    assert ideals.verify_class_number(S5)
    assert ideals.verify_class_number(C2)
    assert not ideals.verify_class_number(nfcore.field_create([5, 0, 1], 1))


def test_weak_num_denom():
    wn, wd = ideals.weak_num_denom(S5.element([Fraction(1, 2), Fraction(1, 2)]))
    assert wd == 2
    assert wn == S5.element([-2, 1])
    wn, wd = ideals.weak_num_denom(G.element([Fraction(1, 2), Fraction(-1, 2)]))
    assert wd == G.element([1, -1])
    assert wn == -G.theta
    assert ideals.weak_num_denom(Q(Fraction(-5, 8))) == (Q(-5), Q(8))
    wn, wd = ideals.weak_num_denom(S5(Fraction(3, 2)))
    assert (wn, wd) == (S5(9), S5(4))
    with pytest.raises(errors.ZeroElement):
        ideals.weak_num_denom(G.zero)


@settings(max_examples=25, deadline=None)
@given(
    a=st.integers(-12, 12), b=st.integers(-12, 12), d=st.sampled_from([1, 2, 3])
)
def test_weak_numerator_law(a, b, d):
    x = S5.element([Fraction(a, d), Fraction(b, d)])
    assume(not x.is_zero())
    wn, wd = ideals.weak_num_denom(x)
    assert wn.is_integral() and wd.is_integral()
    assert wn / wd == x**2
    assert ideals.coprime(wn, wd)
    for P in ideals.factor_element(wd).primes:
        assert ideals.valuation(wd, P) == -2 * min(ideals.valuation(x, P), 0)
