import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TypeAlias

from sympy import isprime

from utilities.constants import Constants as CONST


Rational: TypeAlias = Fraction
"""Exact rational scalar. ``Fraction`` keeps values in lowest terms with a
positive denominator and represents zero as 0/1."""


class ExactArithmeticError(ArithmeticError):
    """Base class for failures of exact arithmetic."""


class PoleError(ExactArithmeticError):
    """A negative-index rising factorial hit a zero factor, so its value is infinite."""


class DivisionByZero(ExactArithmeticError, ZeroDivisionError):
    """The reciprocal of a vanishing rising factorial was requested."""


class NonInvertibleDenominator(ExactArithmeticError):
    """The denominator of a rational shares a factor with the modulus."""


class InvalidModulus(ValueError):
    pass


def is_odd_prime(p: int) -> bool:
    """Deterministic primality for the desk-scale range ``3 <= p < 10**6``."""
    return 2 < p < CONST.PRIMALITY_BOUND and bool(isprime(p))


@dataclass(frozen=True)
class PrimePowerModulus:
    """The modulus p**e for an odd prime p.

    Attributes:
        p (int): Odd prime below the primality bound.
        e (int): Exponent, at least 1.
    """

    p: int
    e: int

    def __post_init__(self):
        if self.e < 1:
            raise InvalidModulus(f"exponent must be >= 1, got {self.e}")
        if not is_odd_prime(self.p):
            raise InvalidModulus(
                f"{self.p} is not an odd prime below {CONST.PRIMALITY_BOUND}"
            )

    @property
    def modulus(self) -> int:
        return self.p**self.e

    def __str__(self) -> str:
        return f"{self.p}^{self.e}"


def rising_factorial(a: Rational | int, m: int) -> Rational:
    """Two-sided rising factorial (a)_m.

    For m >= 0 this is a(a+1)...(a+m-1); for m < 0 it is 1/((a+m)(a+m+1)...(a-1)).

    Raises:
        PoleError: m < 0 and one of the factors a-1, ..., a-|m| is zero.
    """
    a = Fraction(a)
    if m >= 0:
        return math.prod((a + j for j in range(m)), start=Fraction(1))
    below = math.prod((a - j for j in range(1, -m + 1)), start=Fraction(1))
    if below == 0:
        raise PoleError(f"({a})_{m} has a pole: a factor a-j vanishes for 1 <= j <= {-m}")
    return 1 / below


def inv_rising_factorial(a: Rational | int, m: int) -> Rational:
    """Reciprocal 1/(a)_m.

    Total for m < 0, where it equals (a+m)_{-m}; in particular
    ``inv_rising_factorial(1, m) == 0`` for every negative m.

    Raises:
        DivisionByZero: m >= 0 and (a)_m vanishes.
    """
    a = Fraction(a)
    if m < 0:
        return rising_factorial(a + m, -m)
    value = rising_factorial(a, m)
    if value == 0:
        raise DivisionByZero(f"({a})_{m} = 0 has no reciprocal")
    return 1 / value


def central_binomial(n: int) -> int:
    if n < 0:
        raise ValueError(f"central binomial needs n >= 0, got {n}")
    return math.comb(2 * n, n)


def mod_reduce(x: Rational | int, m: PrimePowerModulus) -> int:
    """Residue of x = a/b in [0, p**e), computed as a * b**-1 mod p**e.

    Raises:
        NonInvertibleDenominator: p divides the denominator of x.
    """
    x = Fraction(x)
    if math.gcd(x.denominator, m.p) != 1:
        raise NonInvertibleDenominator(
            f"denominator {x.denominator} is not invertible modulo {m}"
        )
    modulus = m.modulus
    return x.numerator * pow(x.denominator, -1, modulus) % modulus
