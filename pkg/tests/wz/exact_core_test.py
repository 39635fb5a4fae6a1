import logging
import random
from fractions import Fraction

import allure
import pytest

from verifiers.wz.exact_core import (
    DivisionByZero,
    InvalidModulus,
    NonInvertibleDenominator,
    PoleError,
    PrimePowerModulus,
    Rational,
    central_binomial,
    inv_rising_factorial,
    is_odd_prime,
    mod_reduce,
    rising_factorial,
)

logger = logging.getLogger("ExactCoreTest")


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-12, 12), rng.randint(1, 6))


def _coprime_rational(rng: random.Random, p: int) -> Fraction:
    den = rng.randint(1, 500)
    while den % p == 0:
        den = rng.randint(1, 500)
    return Fraction(rng.randint(-10**6, 10**6), den)


@allure.epic("Exact core")
@allure.feature("Rising factorials")
class TestRisingFactorial:

    @pytest.mark.wz_sanity
    @pytest.mark.parametrize(
        "a, m, expected",
        [
            (Fraction(1, 2), 3, Fraction(15, 8)),
            (5, 0, Fraction(1)),
            (1, 4, Fraction(24)),
            (Fraction(1, 2), -1, Fraction(-2)),
            (3, -2, Fraction(1, 2)),
            (Fraction(1, 3), -2, Fraction(9, 10)),
        ],
    )
    @allure.title("Rising factorial spot values")
    @allure.severity(allure.severity_level.CRITICAL)
    def test_spot_values(self, a, m, expected):
        assert rising_factorial(a, m) == expected

    @pytest.mark.wz_sanity
    @pytest.mark.parametrize("a, m", [(1, -1), (1, -3), (2, -2), (3, -5)])
    @allure.title("Negative index through a zero factor is a pole")
    @allure.severity(allure.severity_level.CRITICAL)
    def test_pole(self, a, m):
        with pytest.raises(PoleError):
            rising_factorial(a, m)

    @allure.title("Negative index agrees with the reflection form")
    @allure.description("(a)_{-n} = (-1)^n / (1-a)_n wherever both sides are finite.")
    @allure.severity(allure.severity_level.NORMAL)
    def test_reflection_form(self, rng):
        for _ in range(200):
            a = _random_rational(rng)
            n = rng.randint(1, 6)
            if a.denominator == 1 and 1 <= a <= n:
                with pytest.raises(PoleError):
                    rising_factorial(a, -n)
                continue
            assert rising_factorial(a, -n) == (-1) ** n / rising_factorial(1 - a, n)

    @allure.title("Index additivity (a)_{m+k} = (a)_m (a+m)_k")
    @allure.severity(allure.severity_level.NORMAL)
    def test_additivity(self, rng):
        for _ in range(200):
            a = _random_rational(rng)
            m, k = rng.randint(0, 6), rng.randint(0, 6)
            assert rising_factorial(a, m + k) == rising_factorial(a, m) * rising_factorial(a + m, k)

    @pytest.mark.wz_sanity
    @allure.title("Reciprocal of (1)_m vanishes for negative m")
    @allure.severity(allure.severity_level.CRITICAL)
    def test_inverse_of_one_at_negative_index(self):
        assert all(inv_rising_factorial(1, m) == 0 for m in range(-6, 0))
        assert inv_rising_factorial(Fraction(1, 2), -1) == Fraction(-1, 2)
        assert inv_rising_factorial(1, 3) == Fraction(1, 6)

    @allure.title("Reciprocal of a vanishing rising factorial raises")
    @allure.severity(allure.severity_level.NORMAL)
    def test_inverse_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            inv_rising_factorial(0, 2)
        with pytest.raises(ZeroDivisionError):
            inv_rising_factorial(-3, 5)

    @allure.title("Reciprocal is the inverse wherever both are finite and nonzero")
    @allure.severity(allure.severity_level.NORMAL)
    def test_inverse_agrees(self, rng):
        for _ in range(100):
            a, m = _random_rational(rng), rng.randint(-5, 5)
            try:
                value = rising_factorial(a, m)
            except PoleError:
                assert inv_rising_factorial(a, m) == 0
                continue
            if value != 0:
                assert inv_rising_factorial(a, m) * value == 1


@allure.epic("Exact core")
@allure.feature("Rationals and moduli")
class TestModularArithmetic:

    @pytest.mark.wz_sanity
    @allure.title("Rationals are kept in canonical form")
    @allure.severity(allure.severity_level.MINOR)
    def test_rational_canonical(self):
        assert Rational(2, -4) == Fraction(-1, 2)
        assert Rational(2, -4).denominator == 2
        assert Rational(0, 7) == Fraction(0, 1)

    @pytest.mark.parametrize("n, expected", [(0, 1), (1, 2), (3, 20), (10, 184756)])
    @allure.title("Central binomial coefficients")
    @allure.severity(allure.severity_level.MINOR)
    def test_central_binomial(self, n, expected):
        assert central_binomial(n) == expected

    @allure.title("Central binomial rejects negative n")
    @allure.severity(allure.severity_level.MINOR)
    def test_central_binomial_negative(self):
        with pytest.raises(ValueError):
            central_binomial(-1)

    @pytest.mark.wz_sanity
    @pytest.mark.parametrize(
        "x, p, e, expected",
        [
            (Fraction(3, 8), 3, 3, 24),
            (Fraction(-117, 8), 3, 3, 9),
            (Fraction(435, 512), 5, 3, 5),
            (Fraction(-1), 5, 1, 4),
            (Fraction(0), 7, 2, 0),
        ],
    )
    @allure.title("Residues of rationals modulo prime powers")
    @allure.severity(allure.severity_level.CRITICAL)
    def test_mod_reduce(self, x, p, e, expected):
        modulus = PrimePowerModulus(p, e)
        residue = mod_reduce(x, modulus)
        assert residue == expected
        assert 0 <= residue < modulus.modulus
        assert (residue * x.denominator - x.numerator) % modulus.modulus == 0

    @allure.title("Residue map is a ring homomorphism on p-coprime rationals")
    @allure.severity(allure.severity_level.CRITICAL)
    def test_mod_reduce_homomorphism(self, rng):
        for _ in range(200):
            modulus = PrimePowerModulus(rng.choice([3, 5, 7, 11, 13]), rng.randint(1, 4))
            x, y = (_coprime_rational(rng, modulus.p) for _ in range(2))
            rx, ry = mod_reduce(x, modulus), mod_reduce(y, modulus)
            assert mod_reduce(x + y, modulus) == (rx + ry) % modulus.modulus
            assert mod_reduce(x * y, modulus) == (rx * ry) % modulus.modulus
            assert mod_reduce(-x, modulus) == -rx % modulus.modulus

    @allure.title("Denominator divisible by p is rejected")
    @allure.severity(allure.severity_level.NORMAL)
    def test_non_invertible(self):
        with pytest.raises(NonInvertibleDenominator):
            mod_reduce(Fraction(1, 3), PrimePowerModulus(3, 2))

    @pytest.mark.parametrize("p, e", [(2, 1), (4, 1), (9, 2), (3, 0), (1_000_003, 1)])
    @allure.title("Invalid prime-power moduli")
    @allure.severity(allure.severity_level.NORMAL)
    def test_invalid_modulus(self, p, e):
        with pytest.raises(InvalidModulus):
            PrimePowerModulus(p, e)

    @allure.title("Prime-power modulus rendering")
    @allure.severity(allure.severity_level.MINOR)
    def test_modulus_value(self):
        modulus = PrimePowerModulus(3, 3)
        assert modulus.modulus == 27
        assert str(modulus) == "3^3"

    @pytest.mark.parametrize(
        "p, expected", [(3, True), (2, False), (1, False), (9, False), (999_983, True), (10**6 + 3, False)]
    )
    @allure.title("Odd-prime predicate")
    @allure.severity(allure.severity_level.MINOR)
    def test_is_odd_prime(self, p, expected):
        assert is_odd_prime(p) is expected
