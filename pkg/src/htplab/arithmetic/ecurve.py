# import dependencies
import math
import time
import typing
import warnings
from dataclasses import dataclass, field as dc_field

import pandas as pd
import sympy
from tqdm import tqdm

from ..utils import errors
from ..utils.constants import (
    DEF_LADDER_THRESHOLD,
    DEF_MAX_INDEX,
    DEF_ORDER_CAP,
    DEF_SCAN_CAP,
    DEF_TORSION_CAP,
    DEF_TORSION_GOOD_PRIMES,
    DEF_TORSION_PRIME_LIMIT,
    DEF_TORSION_RESIDUE_CAP,
    DEF_TRACKED_PRIMES,
)
from ..utils.funcs import log
from .ideals import (
    PrimeIdeal,
    ResidueField,
    factor_element,
    factor_prime,
    valuation,
    weak_num_denom,
)
from .nfcore import FieldElement, NumberField, divides, roots_in_field

Residue = tuple[int, ...]
ReducedPoint = typing.Optional[tuple[Residue, Residue]]
Poly = list[FieldElement]


@dataclass(frozen=True)
class CurvePoint:
    """A point of E(K): the point at infinity or an affine point (x, y)."""

    x: typing.Optional[FieldElement] = None
    y: typing.Optional[FieldElement] = None

    @classmethod
    def infinity(cls) -> "CurvePoint":
        return cls()

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def to_json(self) -> typing.Union[str, dict[str, list[str]]]:
        if self.x is None or self.y is None:
            return "infinity"
        return {"x": self.x.to_json(), "y": self.y.to_json()}


@dataclass(frozen=True)
class EDSRecord:
    """Data of the multiple nP = (x_n, y_n) of the configured generator.

    Attributes
    ----------
    index : int
        The multiple n.
    x, y : FieldElement
        Coordinates of nP.
    wn, wd : FieldElement
        Weak numerator and denominator of x_n (wn = 0, wd = 1 when x_n = 0).
    valuations : dict[str, typing.Optional[int]]
        v_P(x_n) at the primes above the tracked rational primes, None when x_n = 0.
    """

    index: int
    x: FieldElement
    y: FieldElement
    wn: FieldElement
    wd: FieldElement
    valuations: dict[str, typing.Optional[int]] = dc_field(default_factory=dict)

    def to_row(self) -> dict[str, typing.Any]:
        row: dict[str, typing.Any] = {
            "index": self.index,
            "x": str(self.x),
            "y": str(self.y),
            "wn": str(self.wn),
            "wd": str(self.wd),
        }
        for label, v in self.valuations.items():
            row[f"v{label}"] = v
        return row


@dataclass(frozen=True)
class MultiplierScan:
    """Outcome of :func:`multiplier_scan`: r = r0 · M0 with the primitive-divisor evidence."""

    r: int
    r0: int
    m0: int
    scan_cap: int
    stability_mode: str
    evidence: pd.DataFrame = dc_field(compare=False, repr=False)

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "r": self.r,
            "r0": self.r0,
            "m0": self.m0,
            "scan_cap": self.scan_cap,
            "stability_mode": self.stability_mode,
            "evidence": self.evidence.to_dict(orient="records"),
        }


class EllipticCurve:
    """An elliptic curve y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6 over K with a point P.

    P is trusted to generate the free part of E(K) (rank one), as recorded in the rank
    assertions. Instances are built by :func:`curve_create`.

    Attributes
    ----------
    field : NumberField
        The field K.
    a : tuple[FieldElement, ...]
        The coefficients (a1, a2, a3, a4, a6).
    b2, b4, b6, b8 : FieldElement
        Weierstrass covariants.
    discriminant : FieldElement
        Δ of the model.
    generator : CurvePoint
        The configured point P.
    rank_assertion : str
        Provenance of the rank-one claim over K.
    rank_assertions : dict[str, str]
        Provenance of rank-one claims over other fields, keyed by field label.
    torsion_order : int or None
        Order T of E(K)_tors, set by :func:`curve_create`.
    stability : str
        Default stability mode of the divisibility multiplier.
    """

    def __init__(
        self,
        field: NumberField,
        a: typing.Sequence[FieldElement],
        generator: CurvePoint,
        rank_assertion: str = "",
        rank_assertions: typing.Optional[dict[str, str]] = None,
        label: typing.Optional[str] = None,
        tracked_primes: typing.Optional[list[int]] = None,
        max_index: int = DEF_MAX_INDEX,
        stability: str = "empirical",
    ):
        self.field: NumberField = field
        self.a: tuple[FieldElement, ...] = tuple(a)
        a1, a2, a3, a4, a6 = self.a
        self.b2: FieldElement = a1 * a1 + 4 * a2
        self.b4: FieldElement = 2 * a4 + a1 * a3
        self.b6: FieldElement = a3 * a3 + 4 * a6
        self.b8: FieldElement = (
            a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        )
        self.discriminant: FieldElement = (
            -self.b2 * self.b2 * self.b8
            - 8 * self.b4**3
            - 27 * self.b6 * self.b6
            + 9 * self.b2 * self.b4 * self.b6
        )
        self.generator: CurvePoint = generator
        self.rank_assertion: str = rank_assertion
        self.rank_assertions: dict[str, str] = dict(rank_assertions or {})
        if rank_assertion and field.label not in self.rank_assertions:
            self.rank_assertions[field.label] = rank_assertion
        self.label: str = label if label is not None else "E"
        self.tracked_primes: list[int] = list(
            tracked_primes if tracked_primes is not None else DEF_TRACKED_PRIMES
        )
        self.max_index: int = max_index
        self.stability: str = stability
        self.torsion_order: typing.Optional[int] = None

        # memo tables; single writer
        self._multiples: dict[int, CurvePoint] = {0: CurvePoint.infinity(), 1: generator}
        self._division_values: dict[int, FieldElement] = {}
        self._x_only: dict[int, typing.Optional[FieldElement]] = {}
        self._records: dict[int, EDSRecord] = {}
        self._scans: dict[tuple[int, str], MultiplierScan] = {}
        pass

    def __repr__(self) -> str:
        coeffs = ", ".join(str(c) for c in self.a)
        return f"EllipticCurve({self.label}: [{coeffs}] over {self.field.label})"

    # curve equation
    def contains(self, point: CurvePoint) -> bool:
        if point.x is None or point.y is None:
            return True
        a1, a2, a3, a4, a6 = self.a
        x, y = point.x, point.y
        return (y * y + a1 * x * y + a3 * y) == (x**3 + a2 * x * x + a4 * x + a6)

    def point(self, x: typing.Any, y: typing.Any) -> CurvePoint:
        """Build the affine point (x, y), checking that it lies on the curve."""
        pt = CurvePoint(self.field(x), self.field(y))
        if not self.contains(pt):
            raise errors.PointNotOnCurve(f"({pt.x}, {pt.y}) is not on {self!r}")
        return pt

    # group law
    def neg(self, point: CurvePoint) -> CurvePoint:
        if point.x is None or point.y is None:
            return point
        a1, _, a3, _, _ = self.a
        return CurvePoint(point.x, -point.y - a1 * point.x - a3)

    def add(self, p1: CurvePoint, p2: CurvePoint) -> CurvePoint:
        """Chord-tangent addition on the long Weierstrass model."""
        if p1.x is None or p1.y is None:
            return p2
        if p2.x is None or p2.y is None:
            return p1
        a1, a2, a3, a4, a6 = self.a
        x1, y1, x2, y2 = p1.x, p1.y, p2.x, p2.y
        if x1 == x2:
            if (y1 + y2 + a1 * x2 + a3).is_zero():
                return CurvePoint.infinity()
            denominator = 2 * y1 + a1 * x1 + a3
            slope = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / denominator
            intercept = (-(x1**3) + a4 * x1 + 2 * a6 - a3 * y1) / denominator
        else:
            slope = (y2 - y1) / (x2 - x1)
            intercept = (y1 * x2 - y2 * x1) / (x2 - x1)
        x3 = slope * slope + a1 * slope - a2 - x1 - x2
        y3 = -(slope + a1) * x3 - intercept - a3
        return CurvePoint(x3, y3)

    def multiply(self, point: CurvePoint, k: int) -> CurvePoint:
        """k·Q for an arbitrary point Q by double-and-add (no memo)."""
        if k < 0:
            return self.multiply(self.neg(point), -k)
        result = CurvePoint.infinity()
        addend = point
        while k:
            if k & 1:
                result = self.add(result, addend)
            addend = self.add(addend, addend)
            k >>= 1
        return result

    # division values of the generator
    def division_value(self, k: int) -> FieldElement:
        """ψ_k(P) from the division-polynomial recurrences, memoised."""
        if k < 0:
            return -self.division_value(-k)
        if k in self._division_values:
            return self._division_values[k]
        x, y = self.generator.x, self.generator.y
        assert x is not None and y is not None
        a1, _, a3, _, _ = self.a
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        if k == 0:
            value = self.field.zero
        elif k == 1:
            value = self.field.one
        elif k == 2:
            value = 2 * y + a1 * x + a3
        elif k == 3:
            value = 3 * x**4 + b2 * x**3 + 3 * b4 * x * x + 3 * b6 * x + b8
        elif k == 4:
            value = self.division_value(2) * (
                2 * x**6
                + b2 * x**5
                + 5 * b4 * x**4
                + 10 * b6 * x**3
                + 10 * b8 * x * x
                + (b2 * b8 - b4 * b6) * x
                + (b4 * b8 - b6 * b6)
            )
        elif k % 2:
            m = (k - 1) // 2
            psi = self.division_value
            value = psi(m + 2) * psi(m) ** 3 - psi(m - 1) * psi(m + 1) ** 3
        else:
            m = k // 2
            psi = self.division_value
            value = (
                (psi(m + 2) * psi(m - 1) ** 2 - psi(m - 2) * psi(m + 1) ** 2)
                * psi(m)
                / psi(2)
            )
        self._division_values[k] = value
        return value

    def _ladder_multiple(self, n: int) -> CurvePoint:
        a1, _, a3, _, _ = self.a
        x = self.generator.x
        assert x is not None
        psi_n = self.division_value(n)
        psi_n_sq = psi_n * psi_n
        x_n = x - self.division_value(n - 1) * self.division_value(n + 1) / psi_n_sq
        y_n = (self.division_value(2 * n) / (psi_n_sq * psi_n_sq) - a1 * x_n - a3) / 2
        return CurvePoint(x_n, y_n)

    def x_multiple(self, n: int) -> typing.Optional[FieldElement]:
        """x(nP) without its y-coordinate; None at the point at infinity."""
        n = abs(n)
        if n in self._multiples:
            return self._multiples[n].x
        if n <= DEF_LADDER_THRESHOLD:
            return self.scalar_multiple(n).x
        if n > self.max_index:
            raise errors.CapExceeded(f"index {n} exceeds max_index {self.max_index}")
        if n not in self._x_only:
            x = self.generator.x
            assert x is not None
            psi_n = self.division_value(n)
            if psi_n.is_zero():
                self._x_only[n] = None
            else:
                psi = self.division_value
                self._x_only[n] = x - psi(n - 1) * psi(n + 1) / (psi_n * psi_n)
        return self._x_only[n]

    def scalar_multiple(self, n: int) -> CurvePoint:
        """
        nP for the configured generator P, memoised.

        Multiples up to DEF_LADDER_THRESHOLD are chained with the chord-tangent law; larger
        ones come from division values.

        Raises
        ------
        CapExceeded
            |n| exceeds the curve's max_index.
        """
        if n < 0:
            return self.neg(self.scalar_multiple(-n))
        if n in self._multiples:
            return self._multiples[n]
        if n > self.max_index:
            raise errors.CapExceeded(f"index {n} exceeds max_index {self.max_index}")
        if n <= DEF_LADDER_THRESHOLD:
            top = max(k for k in self._multiples if k <= n)
            current = self._multiples[top]
            for k in range(top + 1, n + 1):
                current = self.add(current, self.generator)
                self._multiples[k] = current
            return current
        point = self._ladder_multiple(n)
        self._multiples[n] = point
        return point


def _coerce(field: NumberField, value: typing.Any) -> FieldElement:
    if isinstance(value, FieldElement):
        return field(value)
    if isinstance(value, (list, tuple)):
        return field.element(value)
    return field(value)


def curve_create(
    field: NumberField,
    a: typing.Sequence[typing.Any],
    generator: typing.Sequence[typing.Any],
    rank_assertion: str = "",
    rank_assertions: typing.Optional[dict[str, str]] = None,
    label: typing.Optional[str] = None,
    tracked_primes: typing.Optional[list[int]] = None,
    max_index: int = DEF_MAX_INDEX,
    torsion_cap: int = DEF_TORSION_CAP,
    stability: str = "empirical",
) -> EllipticCurve:
    """
    Build and validate an elliptic curve with a configured rank-one generator.

    Parameters
    ----------
    field : NumberField
        The field K.
    a : typing.Sequence[typing.Any]
        [a1, a2, a3, a4, a6]; each an int, a Fraction, a coefficient list or a FieldElement.
    generator : typing.Sequence[typing.Any]
        Coordinates (x, y) of P.
    rank_assertion : str, optional
        Provenance of "rank one over K", by default ""
    rank_assertions : dict[str, str], optional
        Provenance of rank-one claims over other fields, by default None
    label : str, optional
        Name of the curve, by default None
    tracked_primes : list[int], optional
        Rational primes tracked by EDS records, by default DEF_TRACKED_PRIMES
    max_index : int, optional
        Largest multiple evaluated, by default DEF_MAX_INDEX
    torsion_cap : int, optional
        Cap passed to :func:`torsion_order`, by default DEF_TORSION_CAP
    stability : str, optional
        Default stability mode, "empirical" or "formula", by default "empirical"

    Returns
    -------
    EllipticCurve
        The curve, with its torsion order computed.

    Raises
    ------
    SingularCurve
        Δ = 0.
    PointNotOnCurve
        P does not satisfy the equation.
    """  # noqa E501
    # fmt: off
    assert len(a) == 5, "[LOG] AssertionError: expected the five coefficients a1, a2, a3, a4, a6"  # noqa
    assert len(generator) == 2, "[LOG] AssertionError: the generator needs two coordinates"  # noqa
    # fmt: on
    coeffs = [_coerce(field, c) for c in a]
    assert all(c.is_integral() for c in coeffs), "[LOG] AssertionError: Weierstrass coefficients must be integral"  # noqa E501
    point = CurvePoint(_coerce(field, generator[0]), _coerce(field, generator[1]))
    curve = EllipticCurve(
        field,
        coeffs,
        point,
        rank_assertion=rank_assertion,
        rank_assertions=rank_assertions,
        label=label,
        tracked_primes=tracked_primes,
        max_index=max_index,
        stability=stability,
    )
    if curve.discriminant.is_zero():
        raise errors.SingularCurve(f"{curve!r} has Δ = 0")
    if not curve.contains(point):
        raise errors.PointNotOnCurve(f"({point.x}, {point.y}) is not on {curve!r}")
    curve.torsion_order = torsion_order(curve, torsion_cap)
    return curve


def add(curve: EllipticCurve, p1: CurvePoint, p2: CurvePoint) -> CurvePoint:
    return curve.add(p1, p2)


def neg(curve: EllipticCurve, point: CurvePoint) -> CurvePoint:
    return curve.neg(point)


def scalar_multiple(curve: EllipticCurve, n: int) -> CurvePoint:
    return curve.scalar_multiple(n)


class ReducedCurve:
    """The reduction Ẽ of a curve modulo a prime P, with the group law on Ẽ_ns(F_P)."""

    def __init__(self, curve: EllipticCurve, prime: PrimeIdeal):
        self.curve = curve
        self.prime = prime
        self.residue: ResidueField = prime.residue_field
        self.a: tuple[Residue, ...] = tuple(self.residue.reduce(c) for c in curve.a)
        pass

    def _sides(self, x: Residue, y: Residue) -> tuple[Residue, Residue]:
        F = self.residue
        a1, a2, a3, a4, a6 = self.a
        lhs = F.mul(y, F.add(y, F.add(F.mul(a1, x), a3)))
        x2 = F.mul(x, x)
        rhs = F.add(F.add(F.mul(x2, F.add(x, a2)), F.mul(a4, x)), a6)
        return lhs, rhs

    def is_singular(self, x: Residue, y: Residue) -> bool:
        """Both partial derivatives of the reduced equation vanish at (x, y)."""
        F = self.residue
        a1, a2, a3, a4, _ = self.a
        d_y = F.add(F.add(F.mul(F.from_int(2), y), F.mul(a1, x)), a3)
        d_x = F.sub(
            F.mul(a1, y),
            F.add(
                F.add(F.mul(F.from_int(3), F.mul(x, x)), F.mul(F.from_int(2), F.mul(a2, x))),  # noqa E501
                a4,
            ),
        )
        return F.is_zero(d_x) and F.is_zero(d_y)

    def reduce_point(self, point: CurvePoint) -> ReducedPoint:
        """Image of a point of E(K); None stands for the point at infinity."""
        if point.x is None or point.y is None:
            return None
        if not point.x.is_zero() and valuation(point.x, self.prime) < 0:
            return None
        return self.residue.reduce(point.x), self.residue.reduce(point.y)

    def add(self, p1: ReducedPoint, p2: ReducedPoint) -> ReducedPoint:
        if p1 is None:
            return p2
        if p2 is None:
            return p1
        F = self.residue
        a1, a2, a3, a4, a6 = self.a
        (x1, y1), (x2, y2) = p1, p2
        if x1 == x2:
            if F.is_zero(F.add(F.add(y1, y2), F.add(F.mul(a1, x2), a3))):
                return None
            denominator = F.add(F.add(F.mul(F.from_int(2), y1), F.mul(a1, x1)), a3)
            inv = F.inv(denominator)
            slope = F.mul(
                F.sub(
                    F.add(
                        F.add(F.mul(F.from_int(3), F.mul(x1, x1)), F.mul(F.from_int(2), F.mul(a2, x1))),  # noqa E501
                        a4,
                    ),
                    F.mul(a1, y1),
                ),
                inv,
            )
            intercept = F.mul(
                F.sub(
                    F.add(F.add(F.neg(F.mul(x1, F.mul(x1, x1))), F.mul(a4, x1)), F.mul(F.from_int(2), a6)),  # noqa E501
                    F.mul(a3, y1),
                ),
                inv,
            )
        else:
            inv = F.inv(F.sub(x2, x1))
            slope = F.mul(F.sub(y2, y1), inv)
            intercept = F.mul(F.sub(F.mul(y1, x2), F.mul(y2, x1)), inv)
        x3 = F.sub(F.sub(F.sub(F.add(F.mul(slope, slope), F.mul(a1, slope)), a2), x1), x2)  # noqa E501
        y3 = F.sub(F.neg(F.mul(F.add(slope, a1), x3)), F.add(intercept, a3))
        return x3, y3

    def count_points(self, nonsingular_only: bool = False) -> int:
        """#Ẽ(F_P), or #Ẽ_ns(F_P) when `nonsingular_only` is set."""
        F = self.residue
        total = 1
        for x in F.elements():
            for y in F.elements():
                lhs, rhs = self._sides(x, y)
                if lhs == rhs and not (nonsingular_only and self.is_singular(x, y)):
                    total += 1
        return total

    def order(self, point: ReducedPoint, cap: int = DEF_ORDER_CAP) -> int:
        """
        Order of a nonsingular reduced point.

        Raises
        ------
        OrderSearchFailed
            The point is singular or its order exceeds `cap`.
        """
        if point is None:
            return 1
        if self.is_singular(*point):
            raise errors.OrderSearchFailed(
                f"the point reduces to a singular point mod {self.prime.label}"
            )
        current = point
        for k in range(2, cap + 2):
            current = self.add(current, point)
            if current is None:
                return k
        raise errors.OrderSearchFailed(
            f"no order below {cap} mod {self.prime.label}"
        )


def bad_primes(curve: EllipticCurve) -> list[tuple[PrimeIdeal, int]]:
    """Primes P with v_P(Δ) > 0 and the valuations."""
    return list(factor_element(curve.discriminant).factors)


def reduction_is_nonsingular(
    curve: EllipticCurve, point: CurvePoint, prime: PrimeIdeal
) -> bool:
    """Whether `point` reduces to a nonsingular point of Ẽ mod `prime`."""
    reduced = ReducedCurve(curve, prime)
    image = reduced.reduce_point(point)
    if image is None:
        return True
    return not reduced.is_singular(*image)


def _poly_mul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return []
    zero = f[0].field.zero
    result = [zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a.is_zero():
            continue
        for j, b in enumerate(g):
            if not b.is_zero():
                result[i + j] = result[i + j] + a * b
    return result


def _poly_sub(f: Poly, g: Poly) -> Poly:
    if not f and not g:
        return []
    size = max(len(f), len(g))
    zero = (f or g)[0].field.zero
    f = f + [zero] * (size - len(f))
    g = g + [zero] * (size - len(g))
    result = [a - b for a, b in zip(f, g)]
    while result and result[-1].is_zero():
        result.pop()
    return result


def _poly_pow(f: Poly, k: int) -> Poly:
    result = [f[0].field.one]
    for _ in range(k):
        result = _poly_mul(result, f)
    return result


def x_division_polynomials(curve: EllipticCurve, n: int) -> dict[int, Poly]:
    """
    The polynomials f_k in x (k <= n) with ψ_k = f_k for odd k and ψ_k = ψ_2·f_k for even k.

    Returns
    -------
    dict[int, Poly]
        Coefficient lists over K, ascending degree.
    """
    K = curve.field
    b2, b4, b6, b8 = curve.b2, curve.b4, curve.b6, curve.b8
    beta = [b6, 2 * b4, b2, K(4)]
    beta_sq = _poly_mul(beta, beta)
    table: dict[int, Poly] = {
        0: [],
        1: [K.one],
        2: [K.one],
        3: [b8, 3 * b6, 3 * b4, b2, K(3)],
        4: [
            b4 * b8 - b6 * b6,
            b2 * b8 - b4 * b6,
            10 * b8,
            10 * b6,
            5 * b4,
            b2,
            K(2),
        ],
    }

    def f(k: int) -> Poly:
        if k in table:
            return table[k]
        if k % 2:
            m = (k - 1) // 2
            first = _poly_mul(f(m + 2), _poly_pow(f(m), 3))
            second = _poly_mul(f(m - 1), _poly_pow(f(m + 1), 3))
            if m % 2 == 0:
                first = _poly_mul(beta_sq, first)
            else:
                second = _poly_mul(beta_sq, second)
            value = _poly_sub(first, second)
        else:
            m = k // 2
            inner = _poly_sub(
                _poly_mul(f(m + 2), _poly_pow(f(m - 1), 2)),
                _poly_mul(f(m - 2), _poly_pow(f(m + 1), 2)),
            )
            value = _poly_mul(f(m), inner)
        table[k] = value
        return value

    for k in range(n + 1):
        f(k)
    return table


def _good_point_counts(curve: EllipticCurve) -> list[tuple[PrimeIdeal, int]]:
    counts = []
    for p in sympy.primerange(3, DEF_TORSION_PRIME_LIMIT):
        for prime in factor_prime(curve.field, int(p)):
            if prime.norm > DEF_TORSION_RESIDUE_CAP:
                continue
            if prime.e >= prime.p - 1:
                continue
            if valuation(curve.discriminant, prime) != 0:
                continue
            counts.append((prime, ReducedCurve(curve, prime).count_points()))
        if len(counts) >= DEF_TORSION_GOOD_PRIMES:
            bound = math.gcd(*(c for _, c in counts))
            if bound == 1 or len(counts) >= 2 * DEF_TORSION_GOOD_PRIMES:
                break
    return counts


def torsion_order(curve: EllipticCurve, cap: int = DEF_TORSION_CAP) -> int:
    """
    Order T of the torsion subgroup of E(K).

    The gcd B of #Ẽ(F_P) over good primes of odd residue characteristic bounds T, since
    torsion injects into those reductions. All points killed by B are then found as roots
    of the division polynomials.

    Parameters
    ----------
    curve : EllipticCurve
        The curve.
    cap : int, optional
        Largest bound B handled by the root search, at least 16, by default DEF_TORSION_CAP

    Returns
    -------
    int
        T.

    Raises
    ------
    InsufficientGoodPrimes
        Fewer than DEF_TORSION_GOOD_PRIMES usable primes, or a bound B above `cap`.
    """
    assert cap >= 16, "[LOG] AssertionError: the torsion cap must be at least 16"
    counts = _good_point_counts(curve)
    if len(counts) < DEF_TORSION_GOOD_PRIMES:
        raise errors.InsufficientGoodPrimes(
            f"only {len(counts)} good primes below {DEF_TORSION_PRIME_LIMIT} for {curve.label}"  # noqa E501
        )
    bound = math.gcd(*(c for _, c in counts))
    if bound == 1:
        return 1
    if bound > cap:
        raise errors.InsufficientGoodPrimes(
            f"torsion bound {bound} exceeds the cap {cap} for {curve.label}"
        )
    K = curve.field
    b2, b4, b6 = curve.b2, curve.b4, curve.b6
    candidates = roots_in_field(x_division_polynomials(curve, bound)[bound])
    if bound % 2 == 0:
        candidates += roots_in_field([b6, 2 * b4, b2, K(4)])
    a1, a2, a3, a4, a6 = curve.a
    points = set()
    for x0 in candidates:
        rhs = x0**3 + a2 * x0 * x0 + a4 * x0 + a6
        for y0 in roots_in_field([-rhs, a1 * x0 + a3, K.one]):
            point = CurvePoint(x0, y0)
            if curve.multiply(point, bound).is_infinity:
                points.add(point)
    order = len(points) + 1
    if bound % order:
        raise errors.LemmaViolation(
            f"{order} torsion points found but the bound is {bound}"
        )
    return order


def stability_multiplier(curve: EllipticCurve, mode: str = "empirical") -> int:
    """
    An integer r0 with r0·P nonsingular modulo every prime.

    Parameters
    ----------
    curve : EllipticCurve
        The curve.
    mode : str, optional
        "empirical" for the least k <= 4∏v(Δ) that works, "formula" for 4∏v(Δ)
        itself, by default "empirical"

    Returns
    -------
    int
        r0 (1 for everywhere good reduction).

    Raises
    ------
    StabilityNotFound
        The post-check fails at the returned value.
    """
    assert mode in ("empirical", "formula"), f"[LOG] AssertionError: unknown mode {mode}"
    bad = bad_primes(curve)
    formula = 1
    if bad:
        formula = 4 * math.prod(v for _, v in bad)

    def stable(k: int) -> bool:
        point = curve.scalar_multiple(k)
        return all(reduction_is_nonsingular(curve, point, P) for P, _ in bad)

    if mode == "formula":
        r0 = formula
    else:
        r0 = next((k for k in range(1, formula + 1) if stable(k)), formula)
        if not stable(r0):
            warnings.warn(
                f"[LOG] Warning: no stable multiple below {formula} for {curve.label}; using the formula value"  # noqa E501
            )
    if not stable(r0):
        raise errors.StabilityNotFound(
            f"{r0}·P is singular modulo a bad prime of {curve.label}: the model may not be minimal"  # noqa E501
        )
    return r0


def _primitive_part(denominator: int, earlier: int) -> int:
    """Part of `denominator` coprime to `earlier`, without factoring."""
    g = math.gcd(denominator, earlier)
    while g > 1:
        denominator //= g
        g = math.gcd(denominator, g)
    return denominator


def multiplier_scan(
    curve: EllipticCurve,
    scan_cap: int = DEF_SCAN_CAP,
    stability: typing.Optional[str] = None,
) -> MultiplierScan:
    """
    Scan x_1, ..., x_scan_cap for primitive divisors and form r = r0 · M0.

    M0 is one more than the last index <= scan_cap without a primitive divisor.

    Raises
    ------
    ScanCapTooSmall
        scan_cap < 2, or the last index of the scan has no primitive divisor.
    """
    if scan_cap < 2:
        raise errors.ScanCapTooSmall(f"scan_cap = {scan_cap} leaves nothing to scan")
    if stability is None:
        stability = curve.stability
    key = (scan_cap, stability)
    if key in curve._scans:
        return curve._scans[key]
    r0 = stability_multiplier(curve, stability)
    start_time = time.perf_counter()
    rows = []
    earlier_lcm = 1
    earlier_primes: set[PrimeIdeal] = set()
    last_missing = 0
    for index in tqdm(range(1, scan_cap + 1), desc="Primitive divisors", unit="index"):
        x = curve.scalar_multiple(index).x
        assert x is not None
        if x.is_rational():
            denominator = x.coeffs[0].denominator
            new_part = _primitive_part(denominator, earlier_lcm)
            primitive = new_part > 1
            earlier_lcm = math.lcm(earlier_lcm, denominator)
            rows.append(
                {"index": index, "denominator": str(denominator), "primitive": primitive, "new_part": str(new_part)}  # noqa E501
            )
        else:
            poles = set() if x.is_zero() else set(factor_element(x).denominator_part().primes)  # noqa E501
            new = poles - earlier_primes
            primitive = bool(new)
            earlier_primes |= poles
            rows.append(
                {"index": index, "denominator": ";".join(P.label for P in sorted(poles, key=PrimeIdeal.sort_key)), "primitive": primitive, "new_part": ";".join(P.label for P in sorted(new, key=PrimeIdeal.sort_key))}  # noqa E501
            )
        if not primitive:
            last_missing = index
    m0 = last_missing + 1
    if m0 > scan_cap:
        raise errors.ScanCapTooSmall(
            f"index {scan_cap} has no primitive divisor; raise scan_cap"
        )
    end_time = time.perf_counter()
    log(
        f"Primitive divisor scan of {curve.label} up to {scan_cap} in {end_time - start_time:.4f} seconds"  # noqa E501
    )
    scan = MultiplierScan(
        r=r0 * m0,
        r0=r0,
        m0=m0,
        scan_cap=scan_cap,
        stability_mode=stability,
        evidence=pd.DataFrame(rows),
    )
    curve._scans[key] = scan
    return scan


def divisibility_multiplier(
    curve: EllipticCurve,
    scan_cap: int = DEF_SCAN_CAP,
    stability: typing.Optional[str] = None,
) -> int:
    """r = r0 · M0; see :func:`multiplier_scan` for the evidence."""
    return multiplier_scan(curve, scan_cap, stability).r


def eds_record(
    curve: EllipticCurve, n: int, tracked: typing.Optional[list[int]] = None
) -> EDSRecord:
    """
    Coordinates, weak numerator/denominator and tracked valuations of nP.

    Raises
    ------
    PointAtInfinity
        nP is the point at infinity.
    """
    if n in curve._records and tracked is None:
        return curve._records[n]
    point = curve.scalar_multiple(n)
    if point.x is None or point.y is None:
        raise errors.PointAtInfinity(f"{n}P is the point at infinity")
    K = curve.field
    x = point.x
    if x.is_zero():
        wn, wd = K.zero, K.one
    else:
        wn, wd = weak_num_denom(x)
    table: dict[str, typing.Optional[int]] = {}
    for p in tracked if tracked is not None else curve.tracked_primes:
        for prime in factor_prime(K, p):
            table[prime.label] = None if x.is_zero() else valuation(x, prime)
    record = EDSRecord(n, x, point.y, wn, wd, table)
    if tracked is None:
        curve._records[n] = record
    return record


def eds_table(curve: EllipticCurve, indices: typing.Iterable[int]) -> pd.DataFrame:
    """EDS records of the given indices as a table, one row per index."""
    rows = [eds_record(curve, n).to_row() for n in tqdm(list(indices), desc="EDS", unit="index")]  # noqa E501
    return pd.DataFrame(rows)


def weak_denominator_of_multiple(curve: EllipticCurve, n: int) -> FieldElement:
    """
    wd(x_n), with wd(0) = 1. Only x_n is computed.

    Raises
    ------
    PointAtInfinity
        nP is the point at infinity.
    """
    if n in curve._records:
        return curve._records[n].wd
    x = curve.x_multiple(n)
    if x is None:
        raise errors.PointAtInfinity(f"{n}P is the point at infinity")
    if x.is_zero():
        return curve.field.one
    return weak_num_denom(x)[1]


def reduced_order(
    curve: EllipticCurve, point: CurvePoint, prime: PrimeIdeal, cap: int = DEF_ORDER_CAP
) -> int:
    """Order of the reduction of `point` in Ẽ_ns(F_P)."""
    reduced = ReducedCurve(curve, prime)
    return reduced.order(reduced.reduce_point(point), cap)


def lemma_ec3_multiple(
    curve: EllipticCurve,
    xi: FieldElement,
    r: typing.Optional[int] = None,
    sharpen: bool = False,
    order_cap: int = DEF_ORDER_CAP,
) -> int:
    """
    An index n with ξ | wd(x_n).

    For every P | (ξ) with e = v_P(ξ), n_P is the order of rP in Ẽ_ns(F_P). The default
    index is r·∏ n_P·p^e. With `sharpen` the index is r·lcm(n_P·p^k) with the least k for
    which the formal-group law gives v_P(wd(x_n)) >= e.

    Parameters
    ----------
    curve : EllipticCurve
        The curve.
    xi : FieldElement
        A nonzero element of O_K.
    r : int, optional
        The multiplier, by default :func:`divisibility_multiplier` of the curve
    sharpen : bool, optional
        Use the least exponents, by default False
    order_cap : int, optional
        Cap of the reduced order search, by default DEF_ORDER_CAP

    Returns
    -------
    int
        n, post-verified.

    Raises
    ------
    OrderSearchFailed
        A reduced order could not be determined.
    LemmaViolation
        The post-check ξ | wd(x_n) failed.
    """
    assert xi.is_integral() and not xi.is_zero(), "[LOG] AssertionError: ξ must be a nonzero integer of K"  # noqa E501
    if r is None:
        r = divisibility_multiplier(curve)
    h = curve.field.class_number
    base = curve.scalar_multiple(r)
    formula_factor = 1
    sharp_factor = 1
    for prime, e in factor_element(xi).factors:
        n_v = reduced_order(curve, base, prime, order_cap)
        formula_factor *= n_v * prime.p**e
        if sharpen:
            x = curve.x_multiple(r * n_v)
            assert x is not None
            w = -valuation(x, prime)
            k = 0
            while h * (w + 2 * k * prime.e) < e:
                k += 1
            sharp_factor = math.lcm(sharp_factor, n_v * prime.p**k)
    n = r * (sharp_factor if sharpen else formula_factor)
    if sharpen and not divides(xi, weak_denominator_of_multiple(curve, n)):
        n = r * formula_factor
    if not divides(xi, weak_denominator_of_multiple(curve, n)):
        raise errors.LemmaViolation(f"{xi} does not divide wd(x_{n})")
    return n


def lemma_ec4_check(curve: EllipticCurve, m: int, n: int) -> tuple[int, bool]:
    """
    Evaluate the congruence wd(x_m) | wn(x_n·y_m/(y_n·x_m) - q) for n = m·q.

    Returns
    -------
    tuple[int, bool]
        q and whether the congruence holds; it always should.

    Raises
    ------
    NotDivisible
        m does not divide n.
    TorsionDegenerate
        x_m, y_m or y_n vanishes, or a multiple is the point at infinity.
    """
    if m == 0 or n % m:
        raise errors.NotDivisible(f"{m} does not divide {n}")
    q = n // m
    point_m = curve.scalar_multiple(m)
    point_n = curve.scalar_multiple(n)
    if point_m.x is None or point_m.y is None or point_n.x is None or point_n.y is None:
        raise errors.TorsionDegenerate(f"{m}P or {n}P is the point at infinity")
    if point_m.x.is_zero() or point_m.y.is_zero() or point_n.y.is_zero():
        raise errors.TorsionDegenerate(f"a coordinate of {m}P or {n}P vanishes")
    zeta = point_n.x * point_m.y / (point_n.y * point_m.x) - q
    wd_m = weak_denominator_of_multiple(curve, m)
    if zeta.is_zero():
        return q, True
    wn_zeta, _ = weak_num_denom(zeta)
    holds = divides(wd_m, wn_zeta)
    if not holds:
        warnings.warn(
            f"[LOG] Warning: wd(x_{m}) does not divide wn(ζ) for n = {n} on {curve.label}"  # noqa E501
        )
    return q, holds


def formal_group_law_check(
    curve: EllipticCurve, m_max: int = 12, t_max: int = 5
) -> pd.DataFrame:
    """Compare v(x_mt) with v(x_m) - 2v(t) whenever v(x_m) < 0, at the tracked primes."""
    rows = []
    for p in curve.tracked_primes:
        for prime in factor_prime(curve.field, p):
            for m in range(1, m_max + 1):
                x_m = curve.scalar_multiple(m).x
                assert x_m is not None
                if x_m.is_zero() or valuation(x_m, prime) >= 0:
                    continue
                v_m = valuation(x_m, prime)
                for t in range(1, t_max + 1):
                    x_mt = curve.scalar_multiple(m * t).x
                    assert x_mt is not None
                    v_mt = valuation(x_mt, prime)
                    expected = v_m - 2 * valuation(curve.field(t), prime)
                    rows.append(
                        {"prime": prime.label, "m": m, "t": t, "v_m": v_m, "v_mt": v_mt, "expected": expected, "holds": v_mt == expected}  # noqa E501
                    )
    return pd.DataFrame(rows, columns=["prime", "m", "t", "v_m", "v_mt", "expected", "holds"])  # noqa E501


def divisibility_biconditional_check(
    curve: EllipticCurve, r: int, cap: int = 8
) -> pd.DataFrame:
    """Compare m | n with wd(x_rm) | wd(x_rn) for 1 <= m, n <= cap."""
    rows = []
    for m in range(1, cap + 1):
        wd_m = weak_denominator_of_multiple(curve, r * m)
        for n in range(1, cap + 1):
            wd_n = weak_denominator_of_multiple(curve, r * n)
            index_divides = n % m == 0
            wd_divides = divides(wd_m, wd_n)
            rows.append(
                {"m": m, "n": n, "m_divides_n": index_divides, "wd_divides": wd_divides, "agree": index_divides == wd_divides}  # noqa E501
            )
    return pd.DataFrame(rows)


def cyclicity_check(curve: EllipticCurve, bound: int = 20) -> pd.DataFrame:
    """Multiples nTP for |n| <= bound; `distinct` marks points hit by a single n."""
    T = curve.torsion_order or 1
    points = {n: curve.scalar_multiple(n * T) for n in range(-bound, bound + 1)}
    rows = []
    for n, point in points.items():
        hits = [k for k, other in points.items() if other == point]
        rows.append({"n": n, "distinct": hits == [n]})
    return pd.DataFrame(rows)


def gcd_closure_check(
    curve: EllipticCurve, r0: int, indices: typing.Sequence[int]
) -> pd.DataFrame:
    """
    For indices m, n with v(x_r0m) < 0 and v(x_r0n) < 0 at a tracked prime, check
    v(x_r0·gcd(m, n)) < 0 at that prime.
    """
    rows = []
    for p in curve.tracked_primes:
        for prime in factor_prime(curve.field, p):

            def pole(k: int) -> bool:
                x = curve.scalar_multiple(r0 * k).x
                assert x is not None
                return not x.is_zero() and valuation(x, prime) < 0

            with_pole = [k for k in indices if pole(k)]
            for i, m in enumerate(with_pole):
                for n in with_pole[i + 1:]:
                    g = math.gcd(m, n)
                    rows.append(
                        {"prime": prime.label, "m": m, "n": n, "gcd": g, "holds": pole(g)}  # noqa E501
                    )
    return pd.DataFrame(rows, columns=["prime", "m", "n", "gcd", "holds"])
