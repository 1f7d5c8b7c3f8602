# import dependencies
import functools
import math
import typing
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import mpmath
import numpy as np
import sympy

from ..utils import errors
from ..utils.constants import (
    DEF_MAX_IRREDUCIBLE_DEGREE,
    DEF_MIN_PRECISION,
    DEF_PRECISION,
    DEF_PRECISION_CAP,
)
from ..utils.funcs import to_fraction
from ..utils.intervals import ComplexBox, RationalInterval, horner, sqrt_enclosure

_X = sympy.Symbol("x")

Scalar = typing.Union[int, Fraction]


class NumberField:
    """A number field K = Q[x]/(f) whose ring of integers is Z[θ], θ the class of x.

    Instances are created by :func:`field_create`, which validates the minimal polynomial.

    Attributes
    ----------
    min_poly : tuple[int, ...]
        Coefficients of the monic minimal polynomial f, ascending degree.
    degree : int
        Degree n of f.
    class_number : int
        Asserted class number h of O_K.
    signature : tuple[int, int]
        Number r of real embeddings and number s of pairs of complex embeddings.
    discriminant : int
        Discriminant of f, equal to disc(O_K) for monogenic fields.
    label : str
        Name used by the configuration and the CLI.
    """

    def __init__(
        self,
        min_poly: typing.Sequence[int],
        class_number: int,
        signature: tuple[int, int],
        discriminant: int,
        label: typing.Optional[str] = None,
    ):
        self.min_poly: tuple[int, ...] = tuple(int(c) for c in min_poly)
        self.degree: int = len(self.min_poly) - 1
        self.class_number: int = class_number
        self.signature: tuple[int, int] = signature
        self.discriminant: int = discriminant
        self.label: str = label if label is not None else _poly_label(self.min_poly)

        # memo tables, filled on first use
        self._root_boxes: dict[int, list[ComplexBox]] = {}
        self._primes: dict[int, list[typing.Any]] = {}
        self._numeric_roots: typing.Optional[np.ndarray] = None
        pass

    def __repr__(self) -> str:
        return f"NumberField({self.label}: {_poly_label(self.min_poly)}, h={self.class_number})"  # noqa E501

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NumberField):
            return NotImplemented
        return self.min_poly == other.min_poly

    def __hash__(self) -> int:
        return hash(self.min_poly)

    def __call__(self, value: typing.Any) -> "FieldElement":
        """Coerce an int, a Fraction, a coefficient list or a FieldElement into K."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise errors.FieldMismatch(
                    f"element of {value.field.label} used in {self.label}"
                )
            return value
        if isinstance(value, (list, tuple)):
            return self.element(value)
        return self.element([value])

    def element(self, coeffs: typing.Sequence[typing.Any]) -> "FieldElement":
        """Build the element sum(coeffs[i] θ^i), reducing modulo f when needed."""
        values = [to_fraction(c) for c in coeffs]
        if len(values) > self.degree:
            values = _reduce(values, self.min_poly)
        values += [Fraction(0)] * (self.degree - len(values))
        return FieldElement(self, tuple(values))

    @property
    def zero(self) -> "FieldElement":
        return self.element([0])

    @property
    def one(self) -> "FieldElement":
        return self.element([1])

    @property
    def theta(self) -> "FieldElement":
        return self.element([0, 1])

    @property
    def is_rationals(self) -> bool:
        return self.degree == 1

    @property
    def unit_rank(self) -> int:
        """Dirichlet unit rank r + s - 1."""
        return self.signature[0] + self.signature[1] - 1

    def sympy_poly(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.min_poly)), _X, domain=sympy.ZZ)

    def root_boxes(self, precision: int = DEF_PRECISION) -> list[ComplexBox]:
        """
        Isolating boxes of the n complex roots of f, each narrower than 2^-precision.

        Real roots come first (ascending), then the complex roots, both members of every
        conjugate pair included.

        Raises
        ------
        PrecisionExhausted
            Root isolation did not separate n roots.
        """
        if precision in self._root_boxes:
            return self._root_boxes[precision]
        eps = sympy.Rational(1, 2**precision)
        real, cplx = self.sympy_poly().intervals(all=True, eps=eps)
        boxes = [
            ComplexBox.real(to_fraction(lo), to_fraction(hi)) for (lo, hi), _ in real
        ]
        # complex rectangles come as (lower-left, upper-right) pairs of sympy complex numbers
        for (lo, hi), _ in cplx:
            boxes.append(
                ComplexBox.from_corners(
                    (to_fraction(sympy.re(lo)), to_fraction(sympy.im(lo))),
                    (to_fraction(sympy.re(hi)), to_fraction(sympy.im(hi))),
                )
            )
        if len(boxes) != self.degree:
            raise errors.PrecisionExhausted(
                f"isolated {len(boxes)} roots of {self.label} instead of {self.degree} at {precision} bits"  # noqa E501
            )
        self._root_boxes[precision] = boxes
        return boxes

    def numeric_roots(self) -> np.ndarray:
        """Floating point roots of f in the order of :meth:`root_boxes`."""
        if self._numeric_roots is None:
            boxes = self.root_boxes(DEF_MIN_PRECISION)
            self._numeric_roots = np.array(
                [
                    complex(
                        float((b.re.lo + b.re.hi) / 2), float((b.im.lo + b.im.hi) / 2)
                    )
                    for b in boxes
                ]
            )
        return self._numeric_roots

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "label": self.label,
            "min_poly": list(self.min_poly),
            "degree": self.degree,
            "class_number": self.class_number,
            "signature": list(self.signature),
            "discriminant": self.discriminant,
        }


@dataclass(frozen=True, eq=False)
class FieldElement:
    """An element of a :class:`NumberField` as exact coordinates in the basis 1, θ, ..., θ^(n-1).

    Use ``K(value)`` or ``K.element(coeffs)`` to build elements; the coordinates are always
    reduced modulo the minimal polynomial.
    """  # noqa E501

    field: NumberField
    coeffs: tuple[Fraction, ...]

    # coercion
    def _coerce(self, other: typing.Any) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise errors.FieldMismatch(
                    f"cannot combine elements of {self.field.label} and {other.field.label}"  # noqa E501
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field.element([other])
        return NotImplemented

    # predicates
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def rational_value(self) -> Fraction:
        assert self.is_rational(), "[LOG] AssertionError: element is not rational"
        return self.coeffs[0]

    def denominator(self) -> int:
        """Least d > 0 with d·x integral."""
        return functools.reduce(math.lcm, (c.denominator for c in self.coeffs), 1)

    # arithmetic
    def __add__(self, other: typing.Any) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(
            self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other: typing.Any) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(
            self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __rsub__(self, other: typing.Any) -> "FieldElement":
        return (-self) + other

    def __mul__(self, other: typing.Any) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_rational():
            c = other.coeffs[0]
            return FieldElement(self.field, tuple(a * c for a in self.coeffs))
        if self.is_rational():
            c = self.coeffs[0]
            return FieldElement(self.field, tuple(c * b for b in other.coeffs))
        n = self.field.degree
        product = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        product[i + j] += a * b
        return FieldElement(self.field, tuple(_reduce(product, self.field.min_poly)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        """
        Multiplicative inverse.

        Raises
        ------
        DivisionByZero
            The element is zero.
        """
        if self.is_zero():
            raise errors.DivisionByZero(f"inverse of zero in {self.field.label}")
        if self.is_rational():
            return self.field.element([1 / self.coeffs[0]])
        a = sympy.Poly(
            [sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)],
            _X,
            domain=sympy.QQ,
        )
        inv = a.invert(self.field.sympy_poly().set_domain(sympy.QQ))
        return self.field.element([to_fraction(c) for c in reversed(inv.all_coeffs())])

    def __truediv__(self, other: typing.Any) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: typing.Any) -> "FieldElement":
        return self.inverse() * other

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_rational():
            return self.field.element([self.coeffs[0] ** k])
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    # derived quantities
    def multiplication_matrix(self) -> list[list[Fraction]]:
        """Matrix of y -> x·y in the power basis (column j is x·θ^j)."""
        n = self.field.degree
        columns = []
        power = self
        theta = self.field.theta
        for j in range(n):
            columns.append(power.coeffs)
            if j < n - 1:
                power = power * theta
        return [[columns[j][i] for j in range(n)] for i in range(n)]

    @functools.cached_property
    def norm(self) -> Fraction:
        """N(x), the determinant of multiplication by x."""
        if self.is_rational():
            return self.coeffs[0] ** self.field.degree
        matrix = sympy.Matrix(
            [
                [sympy.Rational(c.numerator, c.denominator) for c in row]
                for row in self.multiplication_matrix()
            ]
        )
        return to_fraction(matrix.det(method="bareiss"))

    def trace(self) -> Fraction:
        return sum(
            (row[i] for i, row in enumerate(self.multiplication_matrix())), Fraction(0)
        )

    @functools.cached_property
    def charpoly(self) -> tuple[Fraction, ...]:
        """Characteristic polynomial of multiplication by x, ascending coefficients."""
        t = sympy.Symbol("t")
        matrix = sympy.Matrix(
            [
                [sympy.Rational(c.numerator, c.denominator) for c in row]
                for row in self.multiplication_matrix()
            ]
        )
        poly = matrix.charpoly(t)
        return tuple(to_fraction(c) for c in reversed(poly.all_coeffs()))

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*θ")
            else:
                terms.append(f"{c}*θ^{i}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"FieldElement({self.field.label}: {self})"


@dataclass(frozen=True)
class EmbeddingBound:
    """Certified enclosure of |σ(x)| for one complex embedding σ.

    Attributes
    ----------
    squared : RationalInterval
        Exact rational interval containing |σ(x)|².
    precision : int
        Bits used to isolate the root σ(θ).
    """

    squared: RationalInterval
    precision: int = dc_field(default=DEF_PRECISION)

    @property
    def interval(self) -> typing.Any:
        """Outward rounded ``mpmath.iv`` interval containing |σ(x)|."""
        return sqrt_enclosure(self.squared, max(self.precision, 53))

    def contains(self, value: Scalar) -> bool:
        """Whether the nonnegative rational `value` may equal |σ(x)|."""
        value = Fraction(value)
        return value >= 0 and self.squared.contains(value * value)

    @property
    def width(self) -> Fraction:
        return self.squared.width


def _reduce(values: list[Fraction], min_poly: typing.Sequence[int]) -> list[Fraction]:
    """Remainder of sum(values[i] x^i) modulo the monic `min_poly`."""
    n = len(min_poly) - 1
    values = list(values)
    for k in range(len(values) - 1, n - 1, -1):
        c = values[k]
        if c:
            values[k] = Fraction(0)
            for j in range(n):
                if min_poly[j]:
                    values[k - n + j] -= c * min_poly[j]
    return values[:n]


def _poly_label(min_poly: typing.Sequence[int]) -> str:
    return str(sympy.Poly(list(reversed(min_poly)), _X).as_expr())


def _signature(poly: sympy.Poly) -> tuple[int, int]:
    """Real root count of `poly` by Sturm sign changes at ±infinity."""
    sequence = sympy.sturm(poly)
    n = poly.degree()

    def changes(signs: list[int]) -> int:
        signs = [s for s in signs if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    at_plus = [int(sympy.sign(p.LC())) for p in sequence]
    at_minus = [int(sympy.sign(p.LC())) * (-1) ** p.degree() for p in sequence]
    r = changes(at_minus) - changes(at_plus)
    return r, (n - r) // 2


def dedekind_criterion(min_poly: typing.Sequence[int], p: int) -> bool:
    """
    Dedekind's criterion: whether p does not divide the index [O_K : Z[θ]].

    Parameters
    ----------
    min_poly : typing.Sequence[int]
        Monic minimal polynomial, ascending coefficients.
    p : int
        A rational prime.

    Returns
    -------
    bool
        True when Z[θ] is p-maximal.
    """
    f = sympy.Poly(list(reversed(min_poly)), _X, domain=sympy.ZZ)
    _, factors = sympy.Poly(f.as_expr(), _X, modulus=p).factor_list()
    g = sympy.Poly(1, _X, domain=sympy.ZZ)
    h = sympy.Poly(1, _X, domain=sympy.ZZ)
    for factor, e in factors:
        lift = sympy.Poly([int(c) % p for c in factor.all_coeffs()], _X, domain=sympy.ZZ)
        g = g * lift
        h = h * lift ** (e - 1)
    remainder = [int(c) for c in (f - g * h).all_coeffs()]
    assert all(c % p == 0 for c in remainder), "[LOG] AssertionError: f ≢ g·h mod p"
    big_f = sympy.Poly([c // p for c in remainder], _X, modulus=p)
    common = big_f.gcd(sympy.Poly(g.as_expr(), _X, modulus=p))
    common = common.gcd(sympy.Poly(h.as_expr(), _X, modulus=p))
    return common.degree() == 0


def field_create(
    min_poly: typing.Sequence[int], class_number: int, label: typing.Optional[str] = None
) -> NumberField:
    """
    Validate a minimal polynomial and build the number field Q[x]/(f).

    Parameters
    ----------
    min_poly : typing.Sequence[int]
        Integer coefficients of f in ascending degree, e.g. [1, 0, 1] for x² + 1.
    class_number : int
        The asserted class number of Z[θ]; check it with :func:`~htplab.arithmetic.ideals.verify_class_number`.
    label : str, optional
        Name of the field, by default the polynomial itself

    Returns
    -------
    NumberField
        The field with its signature and discriminant.

    Raises
    ------
    DegreeZero
        f is constant.
    NotMonic
        The leading coefficient is not 1.
    UnsupportedDegree
        The degree exceeds the irreducibility check range.
    Reducible
        f factors over Q.
    DedekindFailure
        Z[θ] is not the maximal order.
    """  # noqa E501
    coeffs = [int(c) for c in min_poly]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    # fmt: off
    assert class_number >= 1, "[LOG] AssertionError: the class number must be a positive integer"  # noqa
    # fmt: on
    if len(coeffs) < 2:
        raise errors.DegreeZero(f"{min_poly} has degree 0")
    if coeffs[-1] != 1:
        raise errors.NotMonic(f"leading coefficient of {min_poly} is {coeffs[-1]}")
    n = len(coeffs) - 1
    if n > DEF_MAX_IRREDUCIBLE_DEGREE:
        raise errors.UnsupportedDegree(
            f"degree {n} exceeds {DEF_MAX_IRREDUCIBLE_DEGREE}"
        )
    poly = sympy.Poly(list(reversed(coeffs)), _X, domain=sympy.ZZ)
    _, factors = poly.factor_list()
    if len(factors) != 1 or factors[0][1] != 1 or factors[0][0].degree() != n:
        raise errors.Reducible(f"{poly.as_expr()} factors as {factors}")
    discriminant = int(sympy.discriminant(poly)) if n > 1 else 1
    for p, e in sympy.factorint(abs(discriminant)).items():
        if e >= 2 and not dedekind_criterion(coeffs, int(p)):
            raise errors.DedekindFailure(
                f"Z[θ] is not maximal at p = {p} for {poly.as_expr()}"
            )
    return NumberField(coeffs, class_number, _signature(poly), discriminant, label)


@functools.lru_cache(maxsize=None)
def rational_field() -> NumberField:
    """The field Q, presented as Q[x]/(x)."""
    return field_create([0, 1], 1, "rationals")


def elem_ops(op: str, x: FieldElement, y: FieldElement) -> FieldElement:
    """
    Apply one of ``add``, ``sub``, ``mul``, ``div`` to two elements of the same field.

    Raises
    ------
    FieldMismatch
        The operands live in different fields.
    DivisionByZero
        ``div`` by zero.
    """
    assert op in ("add", "sub", "mul", "div"), f"[LOG] AssertionError: unknown operation {op}"  # noqa E501
    if x.field != y.field:
        raise errors.FieldMismatch(f"{x.field.label} vs {y.field.label}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    return x / y


def norm(x: FieldElement) -> Fraction:
    return x.norm


def is_rational_integer(x: FieldElement) -> bool:
    return x.is_rational() and x.coeffs[0].denominator == 1


def divides(a: FieldElement, b: FieldElement) -> bool:
    """
    Whether a | b in O_K.

    Raises
    ------
    NotIntegral
        a or b is not integral.
    ZeroDivisor
        a is zero.
    """
    if not (a.is_integral() and b.is_integral()):
        raise errors.NotIntegral("divisibility is only defined in O_K")
    if a.is_zero():
        raise errors.ZeroDivisor("0 divides nothing")
    if b.is_zero():
        return True
    if a.is_rational():
        c = a.coeffs[0].numerator
        return all(v.numerator % c == 0 for v in b.coeffs)
    return (b / a).is_integral()


def abs_squared_bounds(
    x: FieldElement, precision: int = DEF_PRECISION
) -> list[RationalInterval]:
    """Exact rational enclosures of |σ(x)|² for the n embeddings, in root-box order."""
    if x.is_rational():
        return [RationalInterval.point(x.coeffs[0] ** 2)] * x.field.degree
    return [horner(x.coeffs, box).abs_squared() for box in x.field.root_boxes(precision)]


def embeddings_abs(
    x: FieldElement, precision: int = DEF_PRECISION
) -> list[EmbeddingBound]:
    """
    Certified enclosures of |σ(x)| for every complex embedding σ of K.

    Parameters
    ----------
    x : FieldElement
        The element.
    precision : int, optional
        Bits of root isolation, at least DEF_MIN_PRECISION, by default DEF_PRECISION

    Returns
    -------
    list[EmbeddingBound]
        n enclosures; both members of each conjugate pair are listed.

    Raises
    ------
    PrecisionExhausted
        Root isolation of f failed at this precision.
    """
    # fmt: off
    assert precision >= DEF_MIN_PRECISION, f"[LOG] AssertionError: precision must be at least {DEF_MIN_PRECISION} bits"  # noqa
    # fmt: on
    return [EmbeddingBound(sq, precision) for sq in abs_squared_bounds(x, precision)]


def _abs_squared_equals(y: FieldElement, c: Fraction, enclosure: RationalInterval) -> bool:
    """
    Exact test that |σ(y)|² = c for the embedding whose |σ(y)|² lies in `enclosure`.

    Every |σ(y)|² is a root of R(z) = Res_t(χ(t), t^n χ(z/t)), χ the characteristic
    polynomial of y. Equality holds iff c is a root of R and no other real root of R lies
    in the enclosure.
    """
    t, z = sympy.symbols("t z")
    chi = y.charpoly
    n = len(chi) - 1
    rational = [sympy.Rational(c_.numerator, c_.denominator) for c_ in chi]
    direct = sum(rational[i] * t**i for i in range(n + 1))
    reversed_ = sum(rational[i] * z**i * t ** (n - i) for i in range(n + 1))
    res = sympy.Poly(sympy.resultant(direct, reversed_, t), z, domain=sympy.QQ)
    if res.is_zero:
        return False
    target = sympy.Rational(c.numerator, c.denominator)
    if res.eval(target) != 0:
        return False
    linear = sympy.Poly(z - target, z, domain=sympy.QQ)
    while res.degree() > 0 and res.eval(target) == 0:
        res = res.quo(linear)
    if res.degree() <= 0:
        return True
    lo = sympy.Rational(enclosure.lo.numerator, enclosure.lo.denominator)
    hi = sympy.Rational(enclosure.hi.numerator, enclosure.hi.denominator)
    return res.count_roots(lo, hi) == 0


def certified_abs_le(
    x: FieldElement,
    bound_squared: Scalar,
    precision: int = DEF_PRECISION,
    cap: int = DEF_PRECISION_CAP,
    power: int = 1,
) -> list[bool]:
    """
    Decide |σ(x)|^(2·power) <= bound_squared for every embedding σ.

    Enclosures that straddle the bound trigger precision doubling up to `cap`; at the cap an
    exact equality test settles the remaining embeddings.

    Parameters
    ----------
    x : FieldElement
        The element.
    bound_squared : int or Fraction
        The rational bound c.
    precision : int, optional
        Starting precision in bits, by default DEF_PRECISION
    cap : int, optional
        Last precision tried, by default DEF_PRECISION_CAP
    power : int, optional
        Exponent k applied to |σ(x)|², by default 1

    Returns
    -------
    list[bool]
        One verdict per embedding.

    Raises
    ------
    PrecisionExhausted
        An embedding stayed undecided at the cap and is not an exact equality.
    """
    bound = Fraction(bound_squared)
    n = x.field.degree
    if x.is_rational():
        return [(x.coeffs[0] ** 2) ** power <= bound] * n
    prec = max(precision, DEF_MIN_PRECISION)
    while True:
        enclosures = [sq.power(power) for sq in abs_squared_bounds(x, prec)]
        verdicts: list[typing.Optional[bool]] = []
        for sq in enclosures:
            if sq.hi <= bound:
                verdicts.append(True)
            elif sq.lo > bound:
                verdicts.append(False)
            else:
                verdicts.append(None)
        if all(v is not None for v in verdicts):
            return [bool(v) for v in verdicts]
        if prec >= cap:
            break
        prec = min(2 * prec, cap)
    y = x**power
    result = []
    for verdict, sq in zip(verdicts, enclosures):
        if verdict is not None:
            result.append(verdict)
        elif _abs_squared_equals(y, bound, sq):
            result.append(True)
        else:
            raise errors.PrecisionExhausted(
                f"|σ({x})|^{2 * power} vs {bound} undecided at {cap} bits"
            )
    return result


def minkowski_bound(field: NumberField) -> float:
    """(4/π)^s · n!/n^n · sqrt|disc|."""
    n = field.degree
    s = field.signature[1]
    return (
        (4 / math.pi) ** s
        * math.factorial(n)
        / n**n
        * math.sqrt(abs(field.discriminant))
    )


def _evaluate(coeffs: typing.Sequence[FieldElement], value: FieldElement) -> FieldElement:
    acc = value.field.zero
    for c in reversed(coeffs):
        acc = acc * value + c
    return acc


def roots_in_field(
    coeffs: typing.Sequence[FieldElement], dps: int = 60
) -> list[FieldElement]:
    """
    Distinct roots in K of the polynomial sum(coeffs[i] X^i) over K.

    Over Q the roots are exact ground roots. Otherwise numerical roots under one embedding
    are recognised as elements of K with PSLQ and kept only when they are exact roots.

    Parameters
    ----------
    coeffs : typing.Sequence[FieldElement]
        Coefficients in ascending degree.
    dps : int, optional
        Decimal digits for the numerical stage, by default 60

    Returns
    -------
    list[FieldElement]
        Roots, without multiplicity.
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    field = coeffs[0].field
    if field.is_rationals:
        poly = sympy.Poly(
            [
                sympy.Rational(c.coeffs[0].numerator, c.coeffs[0].denominator)
                for c in reversed(coeffs)
            ],
            _X,
            domain=sympy.QQ,
        )
        return [field(to_fraction(r)) for r in sorted(poly.ground_roots())]

    found: list[FieldElement] = []
    if coeffs[0].is_zero():
        found.append(field.zero)
    with mpmath.workdps(dps):
        f_roots = mpmath.polyroots(
            list(reversed(field.min_poly)), maxsteps=200, extraprec=2 * dps
        )
        real_roots = [r for r in f_roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 2)]  # noqa E501
        if real_roots:
            theta0 = mpmath.re(real_roots[0])
        else:
            theta0 = max(f_roots, key=lambda r: mpmath.im(r))
        gamma = mpmath.e / 3

        def flatten(w: typing.Any) -> typing.Any:
            if real_roots:
                return mpmath.re(w)
            return mpmath.re(w) + gamma * mpmath.im(w)

        powers = [theta0**j for j in range(field.degree)]

        def embed(c: FieldElement) -> typing.Any:
            return mpmath.fsum(
                mpmath.mpf(v.numerator) / v.denominator * powers[j]
                for j, v in enumerate(c.coeffs)
            )

        numeric = [embed(c) for c in reversed(coeffs)]
        try:
            candidates = mpmath.polyroots(numeric, maxsteps=400, extraprec=4 * dps)
        except mpmath.libmp.NoConvergence:
            candidates = mpmath.polyroots(
                numeric, maxsteps=2000, extraprec=8 * dps, error=False
            )
        tol = mpmath.mpf(10) ** (-dps // 3)
        basis = [flatten(w) for w in powers]
        for z in candidates:
            if abs(z) < tol:
                continue
            if real_roots and abs(mpmath.im(z)) > tol:
                continue
            relation = mpmath.pslq(
                [flatten(z)] + basis, maxcoeff=10**8, maxsteps=10**5
            )
            if relation is None or relation[0] == 0:
                continue
            candidate = field.element(
                [Fraction(-m, relation[0]) for m in relation[1:]]
            )
            if candidate not in found and _evaluate(coeffs, candidate).is_zero():
                found.append(candidate)
    return found
