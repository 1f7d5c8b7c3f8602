from fractions import Fraction

import pytest

import htplab.arithmetic.ecurve as ecurve
import htplab.arithmetic.ideals as ideals
import htplab.arithmetic.nfcore as nfcore
from htplab.utils import errors


Q = nfcore.rational_field()
E = ecurve.curve_create(Q, [0, 0, 1, -1, 0], [0, 0], rank_assertion="37a", label="37a")
two, three, five, seven = (ideals.factor_prime(Q, p)[0] for p in (2, 3, 5, 7))


def test_curve_create():
    assert E.discriminant == 37
    assert E.torsion_order == 1
    assert E.rank_assertions == {"rationals": "37a"}
    with pytest.raises(errors.PointNotOnCurve):
        ecurve.curve_create(Q, [0, 0, 1, -1, 0], [1, 1])
    with pytest.raises(errors.SingularCurve):
        ecurve.curve_create(Q, [0, 0, 0, 0, 0], [1, 1])


def test_torsion_order():
    F = ecurve.curve_create(Q, [0, 0, 0, 8, 0], [1, 3])
    assert F.torsion_order == 2
    T = ecurve.curve_create(Q, [0, 0, 0, 8, 0], [0, 0])
    with pytest.raises(errors.PointAtInfinity):
        ecurve.eds_record(T, 2)
    with pytest.raises(errors.PointAtInfinity):
        ecurve.weak_denominator_of_multiple(T, 4)


def test_multiples():
    assert E.scalar_multiple(2) == ecurve.CurvePoint(Q(1), Q(0))
    assert E.scalar_multiple(3) == ecurve.CurvePoint(Q(-1), Q(-1))
    assert E.scalar_multiple(4) == ecurve.CurvePoint(Q(2), Q(-3))
    assert E.scalar_multiple(5) == E.point(Fraction(1, 4), Fraction(-5, 8))
    assert E.add(E.scalar_multiple(2), E.scalar_multiple(3)) == E.scalar_multiple(5)
    assert E.add(E.scalar_multiple(3), E.scalar_multiple(-3)).is_infinity
    assert E.multiply(E.generator, 7) == E.scalar_multiple(7)
    # division values agree with the chord-tangent chain past the ladder threshold
    assert E.contains(E.scalar_multiple(60))
    assert E.x_multiple(61) == E.scalar_multiple(61).x
    assert E.x_multiple(-5) == Fraction(1, 4)


def test_division_values():
    values = [E.division_value(n) for n in range(1, 21)]
    assert values == [
        1, 1, -1, 1, 2, -1, -3, -5, 7, -4,
        -23, 29, 59, 129, -314, -65, 1529, -3689, -8209, -16264,
    ]
    assert E.division_value(-3) == 1


def test_max_index():
    small = ecurve.curve_create(Q, [0, 0, 1, -1, 0], [0, 0], max_index=60)
    with pytest.raises(errors.CapExceeded):
        small.scalar_multiple(61)
    with pytest.raises(errors.CapExceeded):
        small.x_multiple(120)


def test_reduced_curve():
    counts = [ecurve.ReducedCurve(E, P).count_points() for P in (two, three, five, seven)]
    assert counts == [5, 7, 8, 9]
    reduced = ecurve.ReducedCurve(E, two)
    assert reduced.order(reduced.reduce_point(E.generator)) == 5
    assert reduced.reduce_point(E.scalar_multiple(5)) is None
    assert ecurve.bad_primes(E)[0][0].p == 37


def test_node_reduction():
    # y² = x³ + x² - 27 has a node at (0, 0) modulo 3
    a = [Q(0), Q(1), Q(0), Q(0), Q(-27)]
    N = ecurve.EllipticCurve(Q, a, ecurve.CurvePoint(Q(3), Q(3)))
    assert N.contains(N.generator)
    assert not ecurve.reduction_is_nonsingular(N, N.generator, three)
    assert ecurve.reduction_is_nonsingular(N, N.generator, seven)
    with pytest.raises(errors.OrderSearchFailed):
        ecurve.reduced_order(N, N.generator, three)


def test_eds_record():
    record = ecurve.eds_record(E, 5)
    assert (record.wn, record.wd) == (Q(1), Q(4))
    assert record.valuations["(2)"] == -2
    assert ecurve.eds_record(E, 1).valuations["(2)"] is None
    assert ecurve.weak_denominator_of_multiple(E, 10) == ecurve.eds_record(E, 10).wd
    table = ecurve.eds_table(E, range(1, 11))
    assert list(table.columns[:5]) == ["index", "x", "y", "wn", "wd"]
    assert len(table) == 10
    # denominators past the default str() digit limit still render
    (wd,) = ecurve.eds_table(E, [500])["wd"]
    assert len(wd) > 4300


def test_multiplier_scan():
    scan = ecurve.multiplier_scan(E)
    assert (scan.r0, scan.m0, scan.r) == (1, 11, 11)
    missing = scan.evidence.loc[~scan.evidence["primitive"], "index"].tolist()
    assert missing == [1, 2, 3, 4, 6, 10]
    assert ecurve.multiplier_scan(E, stability="formula").r == 44
    assert ecurve.stability_multiplier(E, "formula") == 4
    with pytest.raises(errors.ScanCapTooSmall):
        ecurve.multiplier_scan(E, 1)
    with pytest.raises(errors.ScanCapTooSmall):
        ecurve.multiplier_scan(E, 10)


def test_lemma_ec3():
    assert ecurve.lemma_ec3_multiple(E, Q(2)) == 110
    assert ecurve.lemma_ec3_multiple(E, Q(3)) == 231
    n = ecurve.lemma_ec3_multiple(E, Q(12), sharpen=True)
    assert n == 385
    assert nfcore.divides(Q(12), ecurve.weak_denominator_of_multiple(E, n))
    assert ecurve.lemma_ec3_multiple(E, Q(2), r=1) == 10


def test_lemma_ec4():
    assert ecurve.lemma_ec4_check(E, 5, 10) == (2, True)
    for n in range(3, 13):
        for m in range(3, n + 1):
            if n % m == 0:
                assert ecurve.lemma_ec4_check(E, m, n)[1]
    with pytest.raises(errors.TorsionDegenerate):
        ecurve.lemma_ec4_check(E, 1, 5)
    with pytest.raises(errors.NotDivisible):
        ecurve.lemma_ec4_check(E, 3, 10)


def test_formal_group_law():
    table = ecurve.formal_group_law_check(E, 12, 5)
    assert len(table) > 0
    assert table["holds"].all()
    row = table[(table["prime"] == "(2)") & (table["m"] == 5) & (table["t"] == 2)]
    assert row["v_mt"].tolist() == [-4]


def test_divisibility_biconditional():
    table = ecurve.divisibility_biconditional_check(E, 11, 4)
    assert len(table) == 16
    assert table["agree"].all()


def test_structure_checks():
    assert ecurve.cyclicity_check(E, 5)["distinct"].all()
    table = ecurve.gcd_closure_check(E, 1, range(1, 13))
    assert table["holds"].all()
