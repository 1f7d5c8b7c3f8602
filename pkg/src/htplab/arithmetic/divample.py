# import dependencies
import enum
import math
import typing
import warnings
from dataclasses import dataclass

import pandas as pd
from tqdm import tqdm

from ..utils import errors
from ..utils.constants import DEF_MAX_INDEX, DEF_SCAN_CAP
from ..utils.funcs import log
from .ecurve import (
    EllipticCurve,
    divisibility_multiplier,
    lemma_ec3_multiple,
    weak_denominator_of_multiple,
)
from .nfcore import FieldElement, NumberField, divides, is_rational_integer


class SetSource(enum.Enum):
    EDS = "eds"
    EXPLICIT = "explicit"


class StrategyVerdict(enum.Enum):
    """Which route to a division-ample set the unit-rank arithmetic of K allows."""

    QUADRATIC_IMAGINARY_TORUS_WORKS = "QuadraticImaginaryTorusWorks"
    TOTALLY_REAL_RANK_ZERO_OBSTRUCTION = "TotallyRealRankZeroObstruction"
    DEGREE_OBSTRUCTION = "DegreeObstruction"
    UNCLASSIFIED = "Unclassified"


@dataclass
class DivisionAmpleSet:
    """A Diophantine subset A of O_K with the density and norm-bound properties.

    For an EDS set, A = {wd(x_n) : n ∈ stride·Z, n != 0} for the rational curve E with
    E(Q) and E(K) both of rank one; elements are rational integers. An explicit set is a
    finite list of elements supplied by the caller.

    Attributes
    ----------
    field : NumberField
        The field K.
    source : SetSource
        How the set was built.
    ell : int
        The exponent ℓ of the norm-bound property.
    stride : int
        Index lattice step T·[E(K):E(Q)]·r of an EDS set, 1 for an explicit set.
    provenance : str
        Where the rank and index claims come from.
    curve : EllipticCurve or None
        The rational curve of an EDS set.
    r : int
        Divisibility multiplier of the curve, 1 for an explicit set.
    explicit : tuple[FieldElement, ...]
        Elements of an explicit set.
    """

    field: NumberField
    source: SetSource
    ell: int
    stride: int
    provenance: str
    curve: typing.Optional[EllipticCurve] = None
    r: int = 1
    explicit: tuple[FieldElement, ...] = ()

    def element_at(self, index: int) -> FieldElement:
        """The element of the set attached to a lattice index (EDS) or a 1-based position (explicit)."""  # noqa E501
        if self.source is SetSource.EXPLICIT:
            assert 1 <= index <= len(self.explicit), f"[LOG] AssertionError: explicit set has no position {index}"  # noqa E501
            return self.explicit[index - 1]
        assert self.curve is not None
        assert index != 0 and index % self.stride == 0, f"[LOG] AssertionError: {index} is not on the lattice {self.stride}Z"  # noqa E501
        wd = weak_denominator_of_multiple(self.curve, index)
        return self.field(wd.rational_value())

    def elements(self, count: int) -> typing.Iterator[tuple[int, FieldElement]]:
        """The first `count` elements with their indices."""
        if self.source is SetSource.EXPLICIT:
            for position in range(1, min(count, len(self.explicit)) + 1):
                yield position, self.explicit[position - 1]
            return
        for k in range(1, count + 1):
            yield k * self.stride, self.element_at(k * self.stride)

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "field": self.field.label,
            "source": self.source.value,
            "ell": self.ell,
            "stride": self.stride,
            "r": self.r,
            "curve": None if self.curve is None else self.curve.label,
            "provenance": self.provenance,
            "size": len(self.explicit) if self.source is SetSource.EXPLICIT else None,
        }


def eds_divample_create(
    curve: EllipticCurve,
    field: NumberField,
    index: typing.Optional[int] = None,
    scan_cap: int = DEF_SCAN_CAP,
    stability: typing.Optional[str] = None,
) -> DivisionAmpleSet:
    """
    Division-ample set of K built from the elliptic divisibility sequence of a rational curve.

    Parameters
    ----------
    curve : EllipticCurve
        A curve over Q with a generator P of E(Q) modulo torsion.
    field : NumberField
        The field K; its label must appear in the rank assertions of the curve.
    index : int, optional
        The configured index [E(K) : E(Q)], by default None (taken as 1 with a warning)
    scan_cap : int, optional
        Cap of the primitive divisor scan, by default DEF_SCAN_CAP
    stability : str, optional
        Stability mode of the multiplier, by default the mode of the curve

    Returns
    -------
    DivisionAmpleSet
        The set, with ℓ = [K : Q].

    Raises
    ------
    RankAssertionMissing
        Rank one over Q or over K is not asserted for the curve.
    """  # noqa E501
    assert curve.field.is_rationals, "[LOG] AssertionError: the EDS construction needs a curve over Q"  # noqa E501
    for label in {curve.field.label, field.label}:
        if label not in curve.rank_assertions:
            raise errors.RankAssertionMissing(
                f"no rank-one assertion for {curve.label} over {label}"
            )
    if index is None:
        warnings.warn(
            f"[LOG] Warning: [E(K):E(Q)] for {curve.label} over {field.label} not configured; assuming 1"  # noqa E501
        )
        index = 1
    assert index >= 1, "[LOG] AssertionError: the index [E(K):E(Q)] must be positive"
    r = divisibility_multiplier(curve, scan_cap, stability)
    T = curve.torsion_order or 1
    provenance = "; ".join(
        f"{label}: {curve.rank_assertions[label]}"
        for label in sorted({curve.field.label, field.label})
    )
    log(f"EDS set of {curve.label} over {field.label}: T = {T}, index = {index}, r = {r}")  # noqa E501
    return DivisionAmpleSet(
        field=field,
        source=SetSource.EDS,
        ell=field.degree,
        stride=T * index * r,
        provenance=provenance,
        curve=curve,
        r=r,
    )


def explicit_divample_create(
    field: NumberField,
    elements: typing.Sequence[typing.Any],
    ell: int,
    provenance: str = "",
) -> DivisionAmpleSet:
    """A finite, caller-supplied set; its properties are only audited, never assumed."""
    values = tuple(
        e if isinstance(e, FieldElement) else field.element(e) if isinstance(e, (list, tuple)) else field(e)  # noqa E501
        for e in elements
    )
    assert values, "[LOG] AssertionError: an explicit set needs at least one element"
    assert all(v.is_integral() and not v.is_zero() for v in values), "[LOG] AssertionError: elements must be nonzero integers of K"  # noqa E501
    assert ell >= 1, "[LOG] AssertionError: ℓ must be positive"
    return DivisionAmpleSet(
        field=field,
        source=SetSource.EXPLICIT,
        ell=ell,
        stride=1,
        provenance=provenance,
        explicit=values,
    )


def density_witness(
    divample: DivisionAmpleSet, x: FieldElement, max_index: int = DEF_MAX_INDEX
) -> tuple[FieldElement, int]:
    """
    An element a of A with x | a.

    For an EDS set, z = |x| (x rational) or z = |N(x)| is a rational integer divisible by
    x; the sharpened index n of z is moved onto the lattice and wd(x_n) is returned.

    Parameters
    ----------
    divample : DivisionAmpleSet
        The set A.
    x : FieldElement
        A nonzero element of O_K.
    max_index : int, optional
        Largest index evaluated, by default DEF_MAX_INDEX

    Returns
    -------
    tuple[FieldElement, int]
        a and its index (lattice index or explicit position).

    Raises
    ------
    CapExceeded
        The index exceeds `max_index`, or no explicit element is divisible by x.
    LemmaViolation
        The returned element is not divisible by x.
    """
    assert x.is_integral() and not x.is_zero(), "[LOG] AssertionError: x must be a nonzero integer of K"  # noqa E501
    if divample.source is SetSource.EXPLICIT:
        for position, a in enumerate(divample.explicit, start=1):
            if divides(x, a):
                return a, position
        raise errors.CapExceeded(f"no element of the explicit set is divisible by {x}")
    assert divample.curve is not None
    z = abs(x.rational_value()) if x.is_rational() else abs(x.norm)
    curve = divample.curve
    if z == 1:
        index = divample.stride
    else:
        n = lemma_ec3_multiple(curve, curve.field(z), r=divample.r, sharpen=True)
        index = math.lcm(n, divample.stride)
    if index > max_index:
        raise errors.CapExceeded(
            f"density witness for {x} needs index {index} > {max_index}"
        )
    a = divample.element_at(index)
    if not divides(x, a):
        raise errors.LemmaViolation(f"{x} does not divide the density witness at index {index}")  # noqa E501
    return a, index


def norm_bound_witness(a: FieldElement, divample: DivisionAmpleSet) -> tuple[int, bool]:
    """
    A rational integer ã | a with |N(a)| <= |ã|^ℓ, and whether the bound holds.

    EDS elements are rational integers, so ã = a. For explicit sets ã is the content of a,
    the largest rational integer dividing it.
    """
    assert a.is_integral() and not a.is_zero(), "[LOG] AssertionError: a must be a nonzero integer of K"  # noqa E501
    if is_rational_integer(a):
        a_tilde = abs(a.rational_value().numerator)
    else:
        a_tilde = math.gcd(*(c.numerator for c in a.coeffs))
    return a_tilde, abs(a.norm) <= a_tilde**divample.ell


def audit(
    divample: DivisionAmpleSet,
    xs: typing.Sequence[FieldElement],
    samples: int = 4,
    max_index: int = DEF_MAX_INDEX,
) -> pd.DataFrame:
    """
    Check the three defining properties of A on sample inputs.

    | density: for each x in `xs`, some a ∈ A with x | a.
    | norm_bound: for each of the first `samples` elements, a rational ã | a with |N(a)| <= |ã|^ℓ.
    | integrality: the same elements are nonzero integers of K.

    Returns
    -------
    pandas.DataFrame
        Columns property, input, index, element, ok.
    """  # noqa E501
    rows = []
    for x in tqdm(xs, desc="Density", unit="element"):
        try:
            a, index = density_witness(divample, x, max_index)
            rows.append({"property": "density", "input": str(x), "index": index, "element": str(a), "ok": True})  # noqa E501
        except errors.CapExceeded as exc:
            rows.append({"property": "density", "input": str(x), "index": None, "element": str(exc), "ok": False})  # noqa E501
    for index, a in divample.elements(samples):
        a_tilde, ok = norm_bound_witness(a, divample)
        rows.append({"property": "norm_bound", "input": str(a_tilde), "index": index, "element": str(a), "ok": ok})  # noqa E501
        rows.append({"property": "integrality", "input": "", "index": index, "element": str(a), "ok": a.is_integral() and not a.is_zero()})  # noqa E501
    return pd.DataFrame(rows, columns=["property", "input", "index", "element", "ok"])


@dataclass(frozen=True)
class TorusReport:
    """Unit ranks behind the norm-one torus T_L over O_K and over Z."""

    K: str
    L: str
    KL: str
    rank_units_K: int
    rank_units_KL: int
    rank_T_OK: int
    rank_T_Z: int
    equation_holds: bool

    @property
    def ranks_agree(self) -> bool:
        return self.rank_T_OK == self.rank_T_Z

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "K": self.K,
            "L": self.L,
            "KL": self.KL,
            "rank_units_K": self.rank_units_K,
            "rank_units_KL": self.rank_units_KL,
            "rank_T_OK": self.rank_T_OK,
            "rank_T_Z": self.rank_T_Z,
            "equation_holds": self.equation_holds,
            "ranks_agree": self.ranks_agree,
        }


def torus_rank_analysis(
    K: NumberField, L: NumberField, KL: NumberField
) -> TorusReport:
    """
    Compare rk T_L(O_K) = rk O*_KL - rk O*_K with rk T_L(Z) = rk O*_L.

    Raises
    ------
    NotLinearlyDisjoint
        [KL : Q] != [K : Q]·[L : Q].
    """
    if KL.degree != K.degree * L.degree:
        raise errors.NotLinearlyDisjoint(
            f"[{KL.label}:Q] = {KL.degree} != {K.degree}·{L.degree}"
        )
    r_K, s_K = K.signature
    r_L, s_L = L.signature
    r_KL, s_KL = KL.signature
    return TorusReport(
        K=K.label,
        L=L.label,
        KL=KL.label,
        rank_units_K=K.unit_rank,
        rank_units_KL=KL.unit_rank,
        rank_T_OK=KL.unit_rank - K.unit_rank,
        rank_T_Z=L.unit_rank,
        equation_holds=r_KL + s_KL == r_K + s_K + r_L + s_L - 1,
    )


def torus_degree_feasibility(d: int, m: int) -> bool:
    """
    Whether a totally complex K of degree d can meet the rank equation with some L of
    degree m > 1, given KL totally complex: d(m-1)/2 = r_L + s_L - 1 <= m - 1.
    """
    assert d >= 1 and m >= 1, "[LOG] AssertionError: degrees must be positive"
    return d * (m - 1) <= 2 * (m - 1)


def strategy_classification(field: NumberField) -> StrategyVerdict:
    """Classify K by signature: which division-ample strategy is available."""
    r, s = field.signature
    if s == 0:
        return StrategyVerdict.TOTALLY_REAL_RANK_ZERO_OBSTRUCTION
    if r == 0:
        if field.degree == 2:
            return StrategyVerdict.QUADRATIC_IMAGINARY_TORUS_WORKS
        return StrategyVerdict.DEGREE_OBSTRUCTION
    return StrategyVerdict.UNCLASSIFIED
