# import dependencies
import typing
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv


@dataclass(frozen=True)
class RationalInterval:
    """A closed interval [lo, hi] with exact rational end points.

    All operations enclose the exact image of their inputs; no rounding ever happens.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        assert self.lo <= self.hi, "[LOG] AssertionError: empty interval"

    @classmethod
    def point(cls, value: Fraction) -> "RationalInterval":
        return cls(value, value)

    def __add__(self, other: "RationalInterval") -> "RationalInterval":
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "RationalInterval") -> "RationalInterval":
        return RationalInterval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "RationalInterval":
        return RationalInterval(-self.hi, -self.lo)

    def __mul__(self, other: "RationalInterval") -> "RationalInterval":
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RationalInterval(min(products), max(products))

    def scale(self, c: Fraction) -> "RationalInterval":
        if c >= 0:
            return RationalInterval(self.lo * c, self.hi * c)
        return RationalInterval(self.hi * c, self.lo * c)

    def square(self) -> "RationalInterval":
        if self.lo >= 0:
            return RationalInterval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return RationalInterval(self.hi * self.hi, self.lo * self.lo)
        return RationalInterval(Fraction(0), max(self.lo * self.lo, self.hi * self.hi))

    def power(self, k: int) -> "RationalInterval":
        """Image of t -> t^k for a nonnegative interval."""
        assert self.lo >= 0, "[LOG] AssertionError: power() expects a nonnegative interval"
        return RationalInterval(self.lo**k, self.hi**k)

    def contains(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class ComplexBox:
    """A rectangle re x im in the complex plane with rational sides."""

    re: RationalInterval
    im: RationalInterval

    @classmethod
    def from_corners(
        cls, lower_left: tuple[Fraction, Fraction], upper_right: tuple[Fraction, Fraction]
    ) -> "ComplexBox":
        return cls(
            RationalInterval(lower_left[0], upper_right[0]),
            RationalInterval(lower_left[1], upper_right[1]),
        )

    @classmethod
    def real(cls, lo: Fraction, hi: Fraction) -> "ComplexBox":
        return cls(RationalInterval(lo, hi), RationalInterval.point(Fraction(0)))

    def __add__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re + other.re, self.im + other.im)

    def __mul__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def shift(self, c: Fraction) -> "ComplexBox":
        return ComplexBox(self.re + RationalInterval.point(c), self.im)

    def abs_squared(self) -> RationalInterval:
        return self.re.square() + self.im.square()

    @property
    def is_real(self) -> bool:
        return self.im.lo == 0 and self.im.hi == 0


def horner(coeffs: typing.Sequence[Fraction], z: ComplexBox) -> ComplexBox:
    """
    Enclosure of sum(coeffs[i] * z^i) over the box `z`.

    Parameters
    ----------
    coeffs : typing.Sequence[Fraction]
        Polynomial coefficients in ascending degree.
    z : ComplexBox
        Box containing the evaluation point.

    Returns
    -------
    ComplexBox
        A box containing the value of the polynomial at every point of `z`.
    """
    zero = RationalInterval.point(Fraction(0))
    acc = ComplexBox(zero, zero)
    for c in reversed(coeffs):
        acc = (acc * z).shift(c)
    return acc


def sqrt_enclosure(sq: RationalInterval, prec: int = 53) -> typing.Any:
    """
    Outward rounded ``mpmath.iv`` interval containing sqrt(t) for every t in `sq`.

    Parameters
    ----------
    sq : RationalInterval
        Nonnegative interval of squared absolute values.
    prec : int, optional
        Working precision of the returned interval, by default 53

    Returns
    -------
    mpmath.iv.mpf
        The enclosure of the square roots.
    """
    old_prec = iv.prec
    iv.prec = prec
    try:
        lower = iv.sqrt(iv.mpf(sq.lo.numerator) / sq.lo.denominator)
        upper = iv.sqrt(iv.mpf(sq.hi.numerator) / sq.hi.denominator)
        # lower + [0, 1] * (upper - lower) covers the hull of both enclosures
        return lower + iv.mpf([0, 1]) * (upper - lower)
    finally:
        iv.prec = old_prec
