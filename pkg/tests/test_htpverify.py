from fractions import Fraction

import pytest

import htplab.arithmetic.htpverify as htpverify
import htplab.arithmetic.nfcore as nfcore
from htplab.utils import errors
from htplab.workbench import Workbench


wb = Workbench()
K, E, A = wb.pipeline("rationals")
G, EG, AG = wb.pipeline("gauss")


def test_dl_product():
    assert htpverify.dl_product(K(1), 1, 1) == 4
    assert htpverify.dl_product(K(2), 1, 1) == 8
    assert htpverify.dl_product(K(3), 1, 1) == 12
    assert htpverify.dl_product(G(1), 2, 2) == 32
    with pytest.raises(errors.ZeroXi):
        htpverify.dl_product(K(0), 1, 1)
    with pytest.raises(errors.FactorialOverflow):
        htpverify.dl_product(K(1), 1, 5)
    assert htpverify.dl_condition(K(2), K(16), 1, 1)
    assert not htpverify.dl_condition(K(2), K(4), 1, 1)


def test_dl_bound():
    assert htpverify.dl_bound(K(2), K(16), 1, 1)
    assert not htpverify.dl_bound(K(9), K(16), 1, 1)
    # |1 + i|^4 = 4 = N(2 + 2i)^2 / 16 is an exact equality
    assert htpverify.dl_bound(G.element([1, 1]), G.element([2, 2]), 1, 2, 32, 128)
    assert not htpverify.dl_bound(G.element([2, 1]), G.element([2, 2]), 1, 2)


def test_dl_descent():
    assert htpverify.dl_descent(G(1), 1, 3)
    assert not htpverify.dl_descent(G.element([5, 3]), 2, 3)
    assert not htpverify.dl_descent(G(5), 2, 3)
    assert not htpverify.dl_descent(G.element([1, 1]), 0, 2)


def test_descent_grid():
    table = htpverify.descent_grid(G, box=3, u_max=3)
    assert len(table) > 0
    assert table["is_integer"].all()
    assert ((table["a"] == 0) & (table["b"] == 0) & (table["q"] == 0)).any()


def test_find_witness_rationals():
    expected = {1: (55, 55), 2: (110, 220), -1: (55, -55)}
    for xi, (m, n) in expected.items():
        witness = htpverify.find_witness(K(xi), E, A, wb.caps)
        assert (witness.m, witness.n) == (m, n)
        assert witness.q == xi
        assert witness.trace.all_conditions
        assert witness.trace.verdict
        assert witness.trace.u_divides and witness.trace.wd_divides_power
        assert nfcore.divides(htpverify.dl_product(K(xi), 1, 1), witness.u)


def test_find_witness_gauss():
    witness = htpverify.find_witness(G(1), EG, AG, wb.caps)
    assert (witness.m, witness.n) == (220, 220)
    assert nfcore.divides(G(32), witness.u)
    assert witness.trace.verdict
    assert witness.trace.norm_bound
    assert len(witness.trace.enclosures) == 2


def test_integrality_verdict():
    verdict = htpverify.integrality_verdict(K(2), E, A, wb.caps)
    assert verdict.certified
    assert verdict.to_dict()["kind"] == "IntegerCertified"
    bounded = htpverify.integrality_verdict(K(3), E, A, wb.caps.replace(max_index=500))
    assert bounded.kind == "NoWitnessWithinCaps"
    assert bounded.caps.max_index == 500
    assert htpverify.integrality_verdict(G.theta, EG, AG, wb.caps).kind == "NoWitnessWithinCaps"  # noqa E501
    with pytest.raises(errors.NotIntegral):
        htpverify.integrality_verdict(K(Fraction(1, 2)), E, A, wb.caps)


def test_zero():
    verdict = htpverify.integrality_verdict(K(0), E, A, wb.caps)
    assert verdict.certified
    trace = verdict.witness.trace
    assert trace.special == "xi_zero"
    assert trace.conditions == {1: True, 2: None, 3: None, 4: None}
    bad = htpverify.Witness(K(0), 11, 22, verdict.witness.u)
    assert not htpverify.verify_witness(K(0), bad, E, A, wb.caps).verdict


def test_verify_witness_rejects():
    good = htpverify.find_witness(K(1), E, A, wb.caps)
    # the witness of 1 does not carry the condition-(2) product of 2
    trace = htpverify.verify_witness(
        K(2), htpverify.Witness(K(2), good.m, 2 * good.m, good.u), E, A, wb.caps
    )
    assert trace.conditions[2] is False
    assert not trace.verdict
    assert trace.descent is None
    off_lattice = htpverify.Witness(K(1), 5, 5, good.u)
    assert htpverify.verify_witness(K(1), off_lattice, E, A, wb.caps).conditions[1] is False  # noqa E501
    wrong_n = htpverify.Witness(K(1), good.m, 2 * good.m, good.u)
    assert htpverify.verify_witness(K(1), wrong_n, E, A, wb.caps).conditions[4] is False
    with pytest.raises(errors.CapExceeded):
        htpverify.verify_witness(K(1), htpverify.Witness(K(1), 11, 11 * 1000, good.u), E, A, wb.caps)  # noqa E501


def test_witness_json():
    witness = htpverify.find_witness(K(1), E, A, wb.caps)
    document = witness.to_json()
    assert document["field"] == "rationals"
    assert document["trace"]["verdict"]
    restored = htpverify.Witness.from_json(document, K)
    assert (restored.m, restored.n, restored.u) == (witness.m, witness.n, witness.u)
    assert restored.trace is None
    assert htpverify.verify_witness(restored.xi, restored, E, A, wb.caps).verdict
    with pytest.raises(errors.FieldMismatch):
        htpverify.Witness.from_json(document, G)
    with pytest.raises(errors.ConfigParse):
        htpverify.Witness.from_json({"field": "rationals", "xi": ["1"]}, K)


def test_gauss_verdicts():
    verdict = htpverify.integrality_verdict(G(1), EG, AG, wb.caps)
    assert verdict.certified
    witness = verdict.witness
    trace = htpverify.verify_witness(
        G(1), htpverify.Witness(G(1), witness.m, witness.n, witness.u), EG, AG, wb.caps
    )
    assert trace.all_conditions and trace.verdict
    assert trace.q == 1
    negative = htpverify.integrality_verdict(G(-1), EG, AG, wb.caps)
    assert (negative.witness.m, negative.witness.n) == (220, -220)
    # i shares the condition-(2) product 32 with 1 but fails the quotient condition
    forged = htpverify.Witness(G.theta, witness.m, witness.n, witness.u)
    trace = htpverify.verify_witness(G.theta, forged, EG, AG, wb.caps)
    assert trace.conditions[1] and trace.conditions[2] and trace.conditions[3]
    assert trace.conditions[4] is False
    assert not trace.verdict
    assert htpverify.integrality_verdict(G.theta, EG, AG, wb.caps).kind == "NoWitnessWithinCaps"  # noqa E501


def test_brute_force_probe():
    table = htpverify.brute_force_probe(EG, AG, box=3, caps=wb.caps)
    assert len(table) == 49
    assert table["sound"].all()
    certified = table[table["kind"] == "IntegerCertified"]
    assert sorted(certified["a"]) == [-1, 0, 1]
    assert (certified["b"] == 0).all()
    # the condition-(2) products of ±2 and ±3 need indices past max_index
    assert htpverify.uncertified_integers(table) == [-3, -2, 2, 3]
