"""Sparse polynomials and rational functions over Q in the variables L, n, k, s.

L stands for the integer parameter l of the certificates. Terms are stored as
a mapping from exponent vectors (eL, en, ek, es) to nonzero ``Fraction``
coefficients, so the zero polynomial is the empty mapping.
"""

from collections.abc import Iterable, Mapping
from fractions import Fraction
from types import MappingProxyType
from typing import TypeAlias

from verifiers.wz.exact_core import Rational

VARIABLES: tuple[str, ...] = ("L", "n", "k", "s")
Exponents: TypeAlias = tuple[int, int, int, int]
Scalar: TypeAlias = Rational | int

_ZERO_EXPONENTS: Exponents = (0, 0, 0, 0)


class MissingAssignment(LookupError):
    """A variable occurring in the polynomial has no value at the evaluation point."""


class VanishingDenominator(ZeroDivisionError):
    """A rational function was evaluated at a zero of its denominator."""


def _grlex_key(exponents: Exponents) -> tuple[int, Exponents]:
    return sum(exponents), exponents


def _var_index(name: str) -> int:
    try:
        return VARIABLES.index(name)
    except ValueError:
        raise ValueError(f"unknown variable {name!r}, expected one of {VARIABLES}") from None


class MPoly:
    """Immutable sparse polynomial with rational coefficients.

    Supports ``+``, ``-``, ``*``, unary minus and integer powers; scalars
    (``int`` or ``Fraction``) are promoted to constants on either side.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponents, Scalar] | None = None):
        cleaned: dict[Exponents, Fraction] = {}
        for exponents, coeff in (terms or {}).items():
            exponents = tuple(exponents)
            if len(exponents) != len(VARIABLES) or min(exponents) < 0:
                raise ValueError(f"bad exponent vector {exponents}")
            coeff = Fraction(coeff)
            if coeff:
                cleaned[exponents] = coeff
        self._terms = MappingProxyType(cleaned)
        self._hash = None

    @classmethod
    def const(cls, value: Scalar) -> "MPoly":
        return cls({_ZERO_EXPONENTS: value})

    @classmethod
    def var(cls, name: str) -> "MPoly":
        exponents = [0, 0, 0, 0]
        exponents[_var_index(name)] = 1
        return cls({tuple(exponents): 1})

    @property
    def terms(self) -> Mapping[Exponents, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def leading_exponents(self) -> Exponents | None:
        return max(self._terms, key=_grlex_key, default=None)

    def leading_coefficient(self) -> Fraction:
        lead = self.leading_exponents()
        return Fraction(0) if lead is None else self._terms[lead]

    @staticmethod
    def _coerce(other) -> "MPoly":
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(other)
        return NotImplemented

    def __add__(self, other) -> "MPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        merged = dict(self._terms)
        for exponents, coeff in other._terms.items():
            merged[exponents] = merged.get(exponents, 0) + coeff
        return MPoly(merged)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "MPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "MPoly":
        return (-self) + other

    def __mul__(self, other) -> "MPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        product: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exponents = tuple(a + b for a, b in zip(e1, e2))
                product[exponents] = product.get(exponents, 0) + c1 * c2
        return MPoly(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "MPoly":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = MPoly.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def variables(self) -> set[str]:
        return {
            VARIABLES[i]
            for exponents in self._terms
            for i, power in enumerate(exponents)
            if power
        }

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        """Exact value at ``point``.

        Raises:
            MissingAssignment: a variable of the polynomial is absent from ``point``.
        """
        missing = self.variables() - set(point)
        if missing:
            raise MissingAssignment(f"no value for {sorted(missing)}")
        values = [Fraction(point.get(name, 0)) for name in VARIABLES]
        total = Fraction(0)
        for exponents, coeff in self._terms.items():
            term = coeff
            for value, power in zip(values, exponents):
                if power:
                    term *= value**power
            total += term
        return total

    def substitute(self, name: str, value: Scalar) -> "MPoly":
        """Partial evaluation: replace one variable by a rational value."""
        index = _var_index(name)
        value = Fraction(value)
        result: dict[Exponents, Fraction] = {}
        for exponents, coeff in self._terms.items():
            reduced = list(exponents)
            reduced[index] = 0
            reduced = tuple(reduced)
            result[reduced] = result.get(reduced, 0) + coeff * value ** exponents[index]
        return MPoly(result)

    def render(self) -> str:
        """Canonical text, terms sorted by graded lexicographic order L > n > k > s."""
        if not self._terms:
            return "0"
        pieces = []
        for exponents in sorted(self._terms, key=_grlex_key, reverse=True):
            coeff = self._terms[exponents]
            monomial = "*".join(
                name if power == 1 else f"{name}^{power}"
                for name, power in zip(VARIABLES, exponents)
                if power
            )
            magnitude = abs(coeff)
            if not monomial:
                body = str(magnitude)
            elif magnitude == 1:
                body = monomial
            else:
                body = f"{magnitude}*{monomial}"
            sign = "-" if coeff < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        return text + "".join(f" {sign} {body}" for sign, body in pieces[1:])

    def __repr__(self) -> str:
        return f"MPoly({self.render()})"


L, N, K, S = (MPoly.var(name) for name in VARIABLES)
"""Generators of the polynomial ring, for transcribing formulas."""


def mp_add(a: MPoly, b: MPoly) -> MPoly:
    return a + b


def mp_sub(a: MPoly, b: MPoly) -> MPoly:
    return a - b


def mp_mul(a: MPoly, b: MPoly) -> MPoly:
    return a * b


def mp_eval(a: MPoly, point: Mapping[str, Scalar]) -> Fraction:
    return a.evaluate(point)


def mp_product(factors: Iterable[MPoly]) -> MPoly:
    result = MPoly.const(1)
    for factor in factors:
        result = result * factor
    return result


class RationalFunction:
    """Quotient num/den of two MPoly values, den nonzero.

    The pair is content-normalized so that den has leading coefficient 1 under
    the graded lexicographic order. No gcd is cancelled; equality is decided by
    cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly | Scalar, den: MPoly | Scalar = 1):
        num = num if isinstance(num, MPoly) else MPoly.const(num)
        den = den if isinstance(den, MPoly) else MPoly.const(den)
        if den.is_zero():
            raise ValueError("rational function with zero denominator")
        lead = den.leading_coefficient()
        self.num = num * (1 / lead)
        self.den = den * (1 / lead)

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        """Exact value at ``point``.

        Raises:
            VanishingDenominator: den evaluates to zero at ``point``.
        """
        den = self.den.evaluate(point)
        if den == 0:
            raise VanishingDenominator(f"denominator {self.den.render()} vanishes at {dict(point)}")
        return self.num.evaluate(point) / den

    def render(self) -> str:
        return f"({self.num.render()}) / ({self.den.render()})"

    def __repr__(self) -> str:
        return f"RationalFunction({self.render()})"


def rf_add(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den)


def rf_sub(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    return RationalFunction(a.num * b.den - b.num * a.den, a.den * b.den)


def rf_mul(a: RationalFunction, b: RationalFunction) -> RationalFunction:
    return RationalFunction(a.num * b.num, a.den * b.den)


def rf_scalar(a: RationalFunction, c: MPoly | Scalar) -> RationalFunction:
    """Multiply by a polynomial or rational constant."""
    return RationalFunction(a.num * c, a.den)


def rf_eval(a: RationalFunction, point: Mapping[str, Scalar]) -> Fraction:
    return a.evaluate(point)


def rf_cross_difference(a: RationalFunction, b: RationalFunction) -> MPoly:
    """num_a * den_b - num_b * den_a; zero exactly when a and b are equal."""
    return a.num * b.den - b.num * a.den


def rf_equal(a: RationalFunction, b: RationalFunction) -> bool:
    return rf_cross_difference(a, b).is_zero()
