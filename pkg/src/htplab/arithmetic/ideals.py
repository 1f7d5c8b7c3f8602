# import dependencies
import functools
import itertools
import math
import typing
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
import pandas as pd
import sympy

from ..utils import errors
from ..utils.constants import DEF_GENERATOR_BATCH, DEF_GENERATOR_CAP
from ..utils.funcs import fraction_valuation, multiplicity, prime_factors
from .nfcore import (
    FieldElement,
    NumberField,
    dedekind_criterion,
    minkowski_bound,
)

_X = sympy.Symbol("x")


@dataclass(frozen=True)
class PrimeIdeal:
    """A nonzero prime P = (p, g(θ)) of O_K = Z[θ].

    Attributes
    ----------
    p : int
        Residue characteristic.
    gen_poly : tuple[int, ...]
        Lift of an irreducible factor of f mod p, ascending coefficients in [0, p).
    residue_degree : int
        f(P | p), the degree of g.
    ramification_index : int
        e(P | p), the multiplicity of g in f mod p.
    field : NumberField
        The field K.
    inverse_witness : FieldElement
        An element γ with v_P(γ) = -1 and v_Q(γ) >= 0 at every other prime Q.
    """

    p: int
    gen_poly: tuple[int, ...]
    residue_degree: int
    ramification_index: int
    field: NumberField = dc_field(repr=False)
    inverse_witness: FieldElement = dc_field(repr=False, compare=False)

    @property
    def e(self) -> int:
        return self.ramification_index

    @property
    def f(self) -> int:
        return self.residue_degree

    @property
    def norm(self) -> int:
        return self.p**self.residue_degree

    @property
    def gens(self) -> tuple[FieldElement, FieldElement]:
        return self.field(self.p), self.field.element(list(self.gen_poly))

    @property
    def label(self) -> str:
        if self.field.degree == 1:
            return f"({self.p})"
        return f"({self.p}, {self.gens[1]})"

    @functools.cached_property
    def residue_field(self) -> "ResidueField":
        return ResidueField(self)

    def sort_key(self) -> tuple[int, int, tuple[int, ...]]:
        return self.p, self.residue_degree, self.gen_poly

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "p": self.p,
            "gen_poly": list(self.gen_poly),
            "e": self.ramification_index,
            "f": self.residue_degree,
        }


@dataclass(frozen=True)
class IdealFactorization:
    """A fractional ideal of O_K as a product of prime powers.

    Attributes
    ----------
    field : NumberField
        The field K.
    factors : tuple[tuple[PrimeIdeal, int], ...]
        Prime ideals with their nonzero exponents, sorted by prime.
    """

    field: NumberField
    factors: tuple[tuple[PrimeIdeal, int], ...] = ()

    @classmethod
    def from_mapping(
        cls, field: NumberField, mapping: typing.Mapping[PrimeIdeal, int]
    ) -> "IdealFactorization":
        items = sorted(
            ((P, int(k)) for P, k in mapping.items() if k), key=lambda t: t[0].sort_key()
        )
        return cls(field, tuple(items))

    @classmethod
    def of_prime(cls, prime: PrimeIdeal, exponent: int = 1) -> "IdealFactorization":
        return cls.from_mapping(prime.field, {prime: exponent})

    def as_dict(self) -> dict[PrimeIdeal, int]:
        return dict(self.factors)

    def exponent(self, prime: PrimeIdeal) -> int:
        return self.as_dict().get(prime, 0)

    @property
    def primes(self) -> list[PrimeIdeal]:
        return [P for P, _ in self.factors]

    def is_trivial(self) -> bool:
        return not self.factors

    def is_integral(self) -> bool:
        return all(k > 0 for _, k in self.factors)

    @property
    def norm(self) -> Fraction:
        result = Fraction(1)
        for P, k in self.factors:
            result *= Fraction(P.norm) ** k
        return result

    def __mul__(self, other: "IdealFactorization") -> "IdealFactorization":
        combined = self.as_dict()
        for P, k in other.factors:
            combined[P] = combined.get(P, 0) + k
        return IdealFactorization.from_mapping(self.field, combined)

    def __pow__(self, k: int) -> "IdealFactorization":
        return IdealFactorization.from_mapping(
            self.field, {P: e * k for P, e in self.factors}
        )

    def numerator_part(self) -> "IdealFactorization":
        return IdealFactorization.from_mapping(
            self.field, {P: k for P, k in self.factors if k > 0}
        )

    def denominator_part(self) -> "IdealFactorization":
        """The integral ideal whose inverse is the negative part."""
        return IdealFactorization.from_mapping(
            self.field, {P: -k for P, k in self.factors if k < 0}
        )

    def to_records(self) -> list[dict[str, typing.Any]]:
        return [dict(P.to_dict(), exponent=k) for P, k in self.factors]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            self.to_records(), columns=["p", "gen_poly", "e", "f", "exponent"]
        )


class ResidueField:
    """The residue field O_K/P = F_p[t]/(g), elements as coefficient tuples of length f."""

    def __init__(self, prime: PrimeIdeal):
        self.prime = prime
        self.p: int = prime.p
        self.degree: int = prime.residue_degree
        self.modulus: tuple[int, ...] = prime.gen_poly
        self.size: int = self.p**self.degree
        pass

    def __repr__(self) -> str:
        return f"ResidueField(F_{self.size} = O/{self.prime.label})"

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.degree

    @property
    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.degree - 1)

    def from_int(self, value: int) -> tuple[int, ...]:
        return (value % self.p,) + (0,) * (self.degree - 1)

    def _reduce_poly(self, coeffs: typing.Sequence[int]) -> tuple[int, ...]:
        values = [c % self.p for c in coeffs]
        d = self.degree
        for k in range(len(values) - 1, d - 1, -1):
            c = values[k]
            if c:
                values[k] = 0
                for j in range(d):
                    values[k - d + j] = (values[k - d + j] - c * self.modulus[j]) % self.p
        values = values[:d]
        return tuple(values + [0] * (d - len(values)))

    def add(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((-x) % self.p for x in a)

    def mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        product = [0] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    product[i + j] += x * y
        return self._reduce_poly(product)

    def power(self, a: tuple[int, ...], k: int) -> tuple[int, ...]:
        result = self.one
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def inv(self, a: tuple[int, ...]) -> tuple[int, ...]:
        if not any(a):
            raise errors.DivisionByZero(f"inverse of 0 in {self!r}")
        return self.power(a, self.size - 2)

    def is_zero(self, a: tuple[int, ...]) -> bool:
        return not any(a)

    def elements(self) -> typing.Iterator[tuple[int, ...]]:
        return (tuple(c) for c in itertools.product(range(self.p), repeat=self.degree))

    def reduce(self, x: FieldElement) -> tuple[int, ...]:
        """
        Image of x under O_P -> O_K/P.

        Raises
        ------
        NotIntegral
            v_P(x) < 0.
        """
        if x.is_zero():
            return self.zero
        d = x.denominator()
        k = multiplicity(self.p, d)
        if k == 0:
            numerator = self._reduce_poly([int(c * d) for c in x.coeffs])
            return self.mul(numerator, self.from_int(pow(d, -1, self.p)))
        if valuation(x, self.prime) < 0:
            raise errors.NotIntegral(f"{x} has a pole at {self.prime.label}")
        # s is a P-unit divisible by every other prime above p to the needed power
        s = x.field.one
        for Q in factor_prime(x.field, self.p):
            if Q != self.prime:
                s = s * x.field.element(list(Q.gen_poly)) ** (Q.e * k)
        a = x * d * s / self.p**k
        b = s * (d // self.p**k)
        assert a.is_integral() and b.is_integral(), "[LOG] AssertionError: bad P-unit"
        red_a = self._reduce_poly([int(c) for c in a.coeffs])
        red_b = self._reduce_poly([int(c) for c in b.coeffs])
        return self.mul(red_a, self.inv(red_b))


def factor_prime(field: NumberField, p: int) -> list[PrimeIdeal]:
    """
    Primes of O_K above the rational prime p, read off from the factorisation of f mod p.

    Parameters
    ----------
    field : NumberField
        The field K.
    p : int
        A rational prime.

    Returns
    -------
    list[PrimeIdeal]
        Primes sorted by residue degree and lift, with sum(e·f) = n.

    Raises
    ------
    DedekindFailure
        p divides the index of Z[θ].
    """
    assert sympy.isprime(p), f"[LOG] AssertionError: {p} is not prime"
    if p in field._primes:
        return field._primes[p]
    if field.discriminant % (p * p) == 0 and not dedekind_criterion(field.min_poly, p):
        raise errors.DedekindFailure(f"p = {p} divides the index of Z[θ] in {field.label}")
    f_mod = sympy.Poly(field.sympy_poly().as_expr(), _X, modulus=p)
    _, factors = f_mod.factor_list()
    primes = []
    for g, e in factors:
        lift = tuple(int(c) % p for c in reversed(g.all_coeffs()))
        cofactor = f_mod.quo(g)
        gamma = field.element(
            [Fraction(int(c) % p, p) for c in reversed(cofactor.all_coeffs())]
        )
        primes.append(PrimeIdeal(p, lift, g.degree(), e, field, gamma))
    primes.sort(key=PrimeIdeal.sort_key)
    assert (
        sum(P.e * P.f for P in primes) == field.degree
    ), "[LOG] AssertionError: sum of e·f differs from the degree"
    field._primes[p] = primes
    return primes


def _integral_valuation(a: FieldElement, prime: PrimeIdeal) -> int:
    if a.norm.numerator % prime.p:
        return 0
    count = 0
    while True:
        shifted = a * prime.inverse_witness
        if not shifted.is_integral():
            return count
        a = shifted
        count += 1


def valuation(x: FieldElement, prime: PrimeIdeal) -> int:
    """
    Exponent of P in the fractional ideal (x).

    Raises
    ------
    ZeroElement
        x = 0.
    """
    if x.is_zero():
        raise errors.ZeroElement("v_P(0) is undefined")
    if x.is_rational():
        return prime.e * fraction_valuation(prime.p, x.coeffs[0])
    d = x.denominator()
    return _integral_valuation(x * d, prime) - prime.e * multiplicity(prime.p, d)


def factor_element(x: FieldElement) -> IdealFactorization:
    """
    Factorisation of the principal fractional ideal (x).

    Raises
    ------
    ZeroElement
        x = 0.
    """
    if x.is_zero():
        raise errors.ZeroElement("(0) has no factorisation")
    field = x.field
    exponents: dict[PrimeIdeal, int] = {}
    if x.is_rational():
        q = x.coeffs[0]
        for p in prime_factors(q.numerator * q.denominator):
            for P in factor_prime(field, p):
                exponents[P] = P.e * fraction_valuation(p, q)
        return IdealFactorization.from_mapping(field, exponents)
    d = x.denominator()
    a_norm = (x * d).norm
    for p in prime_factors(a_norm.numerator * d):
        for P in factor_prime(field, p):
            exponents[P] = valuation(x, P)
    return IdealFactorization.from_mapping(field, exponents)


def coprime(a: FieldElement, b: FieldElement) -> bool:
    """Whether the ideal (a, b) is the whole ring O_K."""
    assert a.is_integral() and b.is_integral(), "[LOG] AssertionError: coprimality needs integral elements"  # noqa E501
    if a.is_zero() or b.is_zero():
        return False
    return not set(factor_element(a).primes) & set(factor_element(b).primes)


def normalise_generator(g: FieldElement) -> FieldElement:
    """Fix the sign so that the first nonzero coordinate is positive."""
    for c in g.coeffs:
        if c:
            return g if c > 0 else -g
    return g


def _imag_quadratic_box(field: NumberField, target: int) -> tuple[int, int]:
    """Coordinate bounds (|a|, |b|) of every a + bθ of norm `target`, f = x² + px + q."""
    p_coef = abs(field.min_poly[1])
    disc = abs(field.discriminant)
    bound_b = math.isqrt(4 * target // disc)
    bound_a = math.isqrt(target) + (p_coef * bound_b + 1) // 2
    return bound_a, bound_b


def _box_candidates(
    field: NumberField, bounds: typing.Sequence[int], target: int
) -> typing.Iterator[tuple[int, ...]]:
    """Coefficient vectors in the box whose floating point |norm| is close to `target`."""
    roots = field.numeric_roots()
    ranges = [np.arange(-b, b + 1) for b in bounds]
    rows_per_value = int(np.prod([len(r) for r in ranges[1:]]))
    powers = np.vstack([roots**i for i in range(field.degree)])
    step = max(1, DEF_GENERATOR_BATCH // rows_per_value)
    # iterate over slices of the first coordinate to bound memory
    for start in range(0, len(ranges[0]), step):
        first = ranges[0][start:start + step]
        mesh = np.meshgrid(first, *ranges[1:], indexing="ij")
        coords = np.stack([m.ravel() for m in mesh], axis=1)
        values = coords.astype(np.complex128) @ powers
        approx = np.abs(np.prod(values, axis=1))
        mask = np.abs(approx - target) <= 1e-6 * target + 0.5
        for row in coords[mask]:
            yield tuple(int(c) for c in row)


def is_principal(
    ideal: IdealFactorization, search_cap: int = DEF_GENERATOR_CAP
) -> typing.Optional[FieldElement]:
    """
    Search a generator of an integral ideal in a coefficient box.

    Parameters
    ----------
    ideal : IdealFactorization
        An integral ideal.
    search_cap : int, optional
        Half-width of the coefficient box, by default DEF_GENERATOR_CAP

    Returns
    -------
    FieldElement or None
        The normalised generator (first nonzero coordinate positive, then lexicographically
        least), or None when the ideal is certified non-principal. Certificates of
        non-principality exist for imaginary quadratic fields only.

    Raises
    ------
    CapTooSmall
        No generator in the box and the box does not certify non-principality.
    """
    assert ideal.is_integral() or ideal.is_trivial(), "[LOG] AssertionError: the ideal must be integral"  # noqa E501
    field = ideal.field
    if ideal.is_trivial():
        return field.one
    target = int(ideal.norm)
    if field.degree == 1:
        value = 1
        for P, k in ideal.factors:
            value *= P.p**k
        return field(value)
    imaginary_quadratic = field.degree == 2 and field.signature == (0, 1)
    if imaginary_quadratic:
        bound_a, bound_b = _imag_quadratic_box(field, target)
        bounds = [min(bound_a, search_cap), min(bound_b, search_cap)]
        certifying = search_cap >= max(bound_a, bound_b)
    else:
        bounds = [search_cap] * field.degree
        certifying = False

    best: typing.Optional[FieldElement] = None
    for coords in _box_candidates(field, bounds, target):
        g = field.element(list(coords))
        if abs(g.norm) != target:
            continue
        if any(valuation(g, P) < k for P, k in ideal.factors):
            continue
        g = normalise_generator(g)
        if best is None or g.coeffs < best.coeffs:
            best = g
    if best is not None:
        return best
    if certifying:
        return None
    raise errors.CapTooSmall(
        f"no generator of norm {target} with coordinates up to {search_cap} in {field.label}"  # noqa E501
    )


def verify_class_number(field: NumberField, cap: int = DEF_GENERATOR_CAP) -> bool:
    """
    Check the asserted class number h against the primes below the Minkowski bound.

    Every prime P with N(P) <= the bound must have P^h principal, and for h > 1 some such P
    must have P^k non-principal for all 0 < k < h.

    Parameters
    ----------
    field : NumberField
        The field, with its asserted class number.
    cap : int, optional
        Generator search cap, by default DEF_GENERATOR_CAP

    Returns
    -------
    bool
        Whether the asserted class number is confirmed.

    Raises
    ------
    CapTooSmall
        A generator search could not conclude.
    """
    h = field.class_number
    bound = minkowski_bound(field)
    small_primes = [
        P
        for p in sympy.primerange(2, math.floor(bound) + 1)
        for P in factor_prime(field, int(p))
        if P.norm <= bound
    ]
    for P in small_primes:
        if is_principal(IdealFactorization.of_prime(P, h), cap) is None:
            return False
    if h == 1:
        return True
    for P in small_primes:
        if all(
            is_principal(IdealFactorization.of_prime(P, k), cap) is None
            for k in range(1, h)
        ):
            return True
    return False


def weak_num_denom(
    x: FieldElement, search_cap: int = DEF_GENERATOR_CAP
) -> tuple[FieldElement, FieldElement]:
    """
    Weak numerator and denominator (wn, wd) of x.

    wn and wd are integral, generate coprime ideals, and wn/wd = x^h exactly. wd is the
    normalised generator of the h-th power of the denominator ideal of x.

    Parameters
    ----------
    x : FieldElement
        A nonzero element.
    search_cap : int, optional
        Generator search cap, by default DEF_GENERATOR_CAP

    Returns
    -------
    tuple[FieldElement, FieldElement]
        The pair (wn, wd).

    Raises
    ------
    ZeroElement
        x = 0.
    CapTooSmall
        The generator search failed.
    """
    if x.is_zero():
        raise errors.ZeroElement("0 has no weak numerator")
    field = x.field
    h = field.class_number
    if x.is_rational():
        q = x.coeffs[0]
        return field(q.numerator**h), field(q.denominator**h)
    if x.is_integral():
        return x**h, field.one
    denominator = factor_element(x).denominator_part() ** h
    wd = is_principal(denominator, search_cap)
    if wd is None:
        raise errors.CapTooSmall(
            f"the {h}-th power of the denominator of {x} is not principal: check h"
        )
    wn = x**h * wd
    assert wn.is_integral(), "[LOG] AssertionError: weak numerator is not integral"
    return wn, wd
