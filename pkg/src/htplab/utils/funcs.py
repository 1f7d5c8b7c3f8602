# import dependencies
import sys
import typing
from fractions import Fraction

import sympy


def log(message: str) -> None:
    """
    Print a progress message in the ``[LOG]`` format.

    Messages go to stderr, so that reports written to stdout stay machine readable.

    Parameters
    ----------
    message : str
        Message without the ``[LOG]`` prefix.
    """
    print(f"[LOG] {message}", file=sys.stderr)


def multiplicity(p: int, n: int) -> int:
    """
    Exponent of the prime `p` in the nonzero integer `n`.

    Parameters
    ----------
    p : int
        A rational prime.
    n : int
        A nonzero integer.

    Returns
    -------
    int
        The largest k with p^k | n.

    Raises
    ------
    AssertionError
        `n` is zero.
    """
    assert n != 0, "[LOG] AssertionError: the multiplicity of a prime in 0 is undefined"
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def fraction_valuation(p: int, x: Fraction) -> int:
    """p-adic valuation of a nonzero rational number."""
    return multiplicity(p, x.numerator) - multiplicity(p, x.denominator)


def to_fraction(value: typing.Any) -> Fraction:
    """
    Convert an int, a decimal string, a ``"p/q"`` string, a Fraction or a sympy Rational to a Fraction.

    Parameters
    ----------
    value : typing.Any
        Value to convert.

    Returns
    -------
    Fraction
        The exact rational value.

    Raises
    ------
    TypeError
        The value is a float or another inexact type.
    """  # noqa E501
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("[LOG] TypeError: booleans are not field coefficients")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, sympy.Basic) and value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"[LOG] TypeError: cannot convert {value!r} to an exact rational")


def parse_int(value: typing.Any) -> int:
    """
    Read an integer given as a JSON number or as a decimal string.

    Raises
    ------
    ValueError
        The value is not an integer.
    """
    if isinstance(value, bool):
        raise ValueError(f"[LOG] ValueError: {value!r} is not an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return int(value.strip())
    raise ValueError(f"[LOG] ValueError: {value!r} is not an integer")


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of a nonzero integer, ascending."""
    if abs(n) == 1:
        return []
    return sorted(int(p) for p in sympy.factorint(abs(n)))


def int_to_json(value: int) -> typing.Union[int, str]:
    """Integers beyond 2^53 are written as decimal strings."""
    if abs(value) < 2**53:
        return value
    return str(value)
