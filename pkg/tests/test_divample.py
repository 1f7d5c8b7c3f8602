import pytest

import htplab.arithmetic.divample as divample
import htplab.arithmetic.ecurve as ecurve
import htplab.arithmetic.nfcore as nfcore
from htplab.utils import errors


Q = nfcore.rational_field()
G = nfcore.field_create([1, 0, 1], 1, label="gauss")
R2 = nfcore.field_create([-2, 0, 1], 1, label="sqrt2")
C2 = nfcore.field_create([-2, 0, 0, 1], 1, label="cbrt2")
Z8 = nfcore.field_create([1, 0, 0, 0, 1], 1, label="compositum")
E = ecurve.curve_create(
    Q,
    [0, 0, 1, -1, 0],
    [0, 0],
    rank_assertion="37a has rank one",
    rank_assertions={"gauss": "rank one over Q(i)"},
    label="37a",
)
A = divample.eds_divample_create(E, Q, index=1)
B = divample.explicit_divample_create(G, [4, 12, [6, 6], "360"], 2, provenance="sample")


def test_eds_divample_create():
    assert (A.stride, A.r, A.ell) == (11, 11, 1)
    assert A.source is divample.SetSource.EDS
    AG = divample.eds_divample_create(E, G, index=1)
    assert (AG.stride, AG.ell) == (11, 2)
    assert AG.element_at(22).field == G
    assert AG.element_at(22).is_rational()
    assert "gauss" in AG.provenance
    with pytest.raises(errors.RankAssertionMissing):
        divample.eds_divample_create(E, R2, index=1)
    with pytest.warns(UserWarning):
        divample.eds_divample_create(E, Q)


def test_elements():
    assert A.element_at(11) == ecurve.weak_denominator_of_multiple(E, 11)
    assert [index for index, _ in A.elements(3)] == [11, 22, 33]
    with pytest.raises(AssertionError):
        A.element_at(5)
    assert [a for _, a in B.elements(10)] == [G(4), G(12), G.element([6, 6]), G(360)]
    assert B.to_dict()["size"] == 4


def test_density_witness():
    a, index = divample.density_witness(A, Q(2))
    assert index == 55
    assert nfcore.divides(Q(2), a)
    assert divample.density_witness(A, Q(4))[1] == 55
    assert divample.density_witness(A, Q(8))[1] == 110
    assert divample.density_witness(A, Q(-1))[1] == 11
    with pytest.raises(errors.CapExceeded):
        divample.density_witness(A, Q(8), max_index=100)
    assert divample.density_witness(B, G(3)) == (G(12), 2)
    assert divample.density_witness(B, G.element([1, 1])) == (G(4), 1)
    with pytest.raises(errors.CapExceeded):
        divample.density_witness(B, G(7))


def test_norm_bound_witness():
    assert divample.norm_bound_witness(Q(-40), A) == (40, True)
    assert divample.norm_bound_witness(G(12), B) == (12, True)
    assert divample.norm_bound_witness(G.element([6, 6]), B) == (6, False)


def test_audit():
    table = divample.audit(A, [Q(1), Q(2), Q(3)], samples=2)
    assert list(table.columns) == ["property", "input", "index", "element", "ok"]
    assert len(table) == 7
    assert table["ok"].all()
    table = divample.audit(B, [G(2), G(7)], samples=4)
    density = table[table["property"] == "density"]
    assert density["ok"].tolist() == [True, False]
    norm_bound = table[table["property"] == "norm_bound"]
    assert norm_bound["ok"].tolist() == [True, True, False, True]


def test_torus_rank_analysis():
    report = divample.torus_rank_analysis(G, R2, Z8)
    assert (report.rank_units_K, report.rank_units_KL) == (0, 1)
    assert (report.rank_T_OK, report.rank_T_Z) == (1, 1)
    assert report.equation_holds and report.ranks_agree
    assert report.to_dict()["ranks_agree"]
    with pytest.raises(errors.NotLinearlyDisjoint):
        divample.torus_rank_analysis(G, R2, G)


def test_strategy_classification():
    verdicts = divample.StrategyVerdict
    assert divample.strategy_classification(G) is verdicts.QUADRATIC_IMAGINARY_TORUS_WORKS
    assert divample.strategy_classification(R2) is verdicts.TOTALLY_REAL_RANK_ZERO_OBSTRUCTION
    assert divample.strategy_classification(Q) is verdicts.TOTALLY_REAL_RANK_ZERO_OBSTRUCTION
    assert divample.strategy_classification(Z8) is verdicts.DEGREE_OBSTRUCTION
    assert divample.strategy_classification(C2) is verdicts.UNCLASSIFIED
    assert divample.torus_degree_feasibility(2, 3)
    assert not divample.torus_degree_feasibility(4, 3)


def test_audit_large_elements():
    table = divample.audit(A, [Q(14)], samples=1)
    density = table[table["property"] == "density"]
    assert density["index"].tolist() == [495]
    assert density["ok"].all()
    assert len(density["element"].iloc[0]) > 4300
