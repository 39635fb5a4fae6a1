"""Ramanujan-type binomial sums and their supercongruences modulo prime powers.

Family B sums weight(n) C(2n,n)^3 / (-64)^n and family C sums
weight(n) C(2n,n)^4 / 256^n, over n <= (p^r-1)/2 (half range) or
n <= p^r-1 (full range). Every congruence known for a (family, weight, range)
combination is a row of ``CLAIMS``.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import allure

from utilities.constants import Constants as CONST
from verifiers.wz.exact_core import (
    PrimePowerModulus,
    Rational,
    central_binomial,
    is_odd_prime,
    mod_reduce,
    rising_factorial,
)
from verifiers.wz.identities import Theorem, weight_polynomial
from verifiers.wz.mpoly import N, MPoly

logger = logging.getLogger("Supercongruences")


class SumFamily(Enum):
    B = "B"
    C = "C"

    @property
    def binomial_power(self) -> int:
        return 3 if self is SumFamily.B else 4

    @property
    def base(self) -> int:
        return -64 if self is SumFamily.B else 256


class WeightKind(Enum):
    LINEAR = "linear"
    CUBE = "cube"
    GUO_B = "guo-b"
    GUO_C = "guo-c"

    @property
    def polynomial(self) -> MPoly:
        return _WEIGHTS[self]

    def at(self, n: int) -> int:
        return int(self.polynomial.evaluate({"n": n}))


_WEIGHTS: dict[WeightKind, MPoly] = {
    WeightKind.LINEAR: 4 * N + 1,
    WeightKind.CUBE: (4 * N + 1) ** 3,
    WeightKind.GUO_B: (4 * N + 1) * (4 * N**2 + 2 * N + 1),
    WeightKind.GUO_C: (4 * N + 1) * (8 * N**2 + 4 * N + 1),
}


class SummationRange(Enum):
    HALF = "half"
    FULL = "full"

    def upper(self, p: int, r: int) -> int:
        return (p**r - 1) // 2 if self is SummationRange.HALF else p**r - 1


class ClaimStatus(Enum):
    PROVEN_REF = "PROVEN-REF"
    CONJECTURE = "CONJECTURE"


class UnsupportedSpec(ValueError):
    pass


def _requires_p5(family: SumFamily, weight: WeightKind) -> bool:
    return family is SumFamily.C and weight in (WeightKind.LINEAR, WeightKind.CUBE)


@dataclass(frozen=True)
class CongruenceSpec:
    """One supercongruence instance.

    ``force_p3`` admits family C linear/cube sums at p = 3, whose congruences
    are only established for p >= 5; such specs are report-only.
    """

    family: SumFamily
    weight: WeightKind
    p: int
    r: int
    range: SummationRange
    force_p3: bool = False
    max_terms: int = field(default=CONST.MAX_TERMS, compare=False, repr=False)

    def __post_init__(self):
        if not is_odd_prime(self.p):
            raise UnsupportedSpec(f"{self.p} is not an odd prime in the desk-scale range")
        if self.r < 1:
            raise UnsupportedSpec(f"r must be >= 1, got {self.r}")
        if not desk_scale_ok(self.p, self.r, self.max_terms):
            raise UnsupportedSpec(f"p^r = {self.p**self.r} is beyond the desk-scale cap of {self.max_terms} terms")
        if (self.weight, self.family) in (
            (WeightKind.GUO_B, SumFamily.C),
            (WeightKind.GUO_C, SumFamily.B),
        ):
            raise UnsupportedSpec(f"weight {self.weight.value} does not pair with family {self.family.value}")
        if _requires_p5(self.family, self.weight) and self.p < 5 and not self.force_p3:
            raise UnsupportedSpec(
                f"family C with {self.weight.value} weight is only known for p >= 5"
            )

    @property
    def report_only(self) -> bool:
        return _requires_p5(self.family, self.weight) and self.p < 5

    @property
    def upper(self) -> int:
        return self.range.upper(self.p, self.r)

    def as_dict(self) -> dict[str, object]:
        return {
            "family": self.family.value,
            "weight": self.weight.value,
            "p": self.p,
            "r": self.r,
            "range": self.range.value,
        }


@dataclass(frozen=True)
class CongruenceClaim:
    """sum ≡ residue(p, r) (mod p^exponent(r)) for a (family, weight, range) combination."""

    name: str
    family: SumFamily
    weight: WeightKind
    range: SummationRange
    status: ClaimStatus
    residue: Callable[[int, int], int]
    exponent: Callable[[int], int]
    only_r1: bool = False

    def applies_to(self, spec: CongruenceSpec) -> bool:
        return (
            (self.family, self.weight, self.range) == (spec.family, spec.weight, spec.range)
            and (spec.r == 1 or not self.only_r1)
        )


def _legendre_sign(p: int, r: int) -> int:
    return (-1) ** ((p - 1) * r // 2)


_B, _C = SumFamily.B, SumFamily.C
_HALF, _FULL = SummationRange.HALF, SummationRange.FULL
_PROVEN, _CONJ = ClaimStatus.PROVEN_REF, ClaimStatus.CONJECTURE

# first applicable row is the primary (strongest) claim for a spec
# fmt: off
CLAIMS: tuple[CongruenceClaim, ...] = (
    CongruenceClaim("B.2", _B, WeightKind.LINEAR, _HALF, _PROVEN,
                    lambda p, r: _legendre_sign(p, 1) * p, lambda r: 3, only_r1=True),
    CongruenceClaim("B-linear-prime-power", _B, WeightKind.LINEAR, _HALF, _PROVEN,
                    lambda p, r: _legendre_sign(p, r) * p**r, lambda r: r + 2),
    CongruenceClaim("B-cube-prime-power", _B, WeightKind.CUBE, _HALF, _PROVEN,
                    lambda p, r: -3 * _legendre_sign(p, r) * p**r, lambda r: 3),
    CongruenceClaim("B-cube", _B, WeightKind.CUBE, _HALF, _PROVEN,
                    lambda p, r: -3 * _legendre_sign(p, 1) * p, lambda r: 2, only_r1=True),
    CongruenceClaim("B-cubic-weight-half", _B, WeightKind.GUO_B, _HALF, _CONJ,
                    lambda p, r: p ** (3 * r), lambda r: 3 * r + 1),
    CongruenceClaim("B-cubic-weight-vanishing", _B, WeightKind.GUO_B, _HALF, _PROVEN,
                    lambda p, r: 0, lambda r: r + 2),
    CongruenceClaim("B-cubic-weight-full", _B, WeightKind.GUO_B, _FULL, _CONJ,
                    lambda p, r: p ** (3 * r), lambda r: 3 * r + 1),
    CongruenceClaim("C.2", _C, WeightKind.LINEAR, _HALF, _PROVEN,
                    lambda p, r: p, lambda r: 4, only_r1=True),
    CongruenceClaim("C-linear-prime-power", _C, WeightKind.LINEAR, _HALF, _PROVEN,
                    lambda p, r: p**r, lambda r: r + 3),
    CongruenceClaim("C-cube-prime-power", _C, WeightKind.CUBE, _HALF, _PROVEN,
                    lambda p, r: -(p**r), lambda r: r + 3),
    CongruenceClaim("C-quartic-weight-half", _C, WeightKind.GUO_C, _HALF, _CONJ,
                    lambda p, r: p ** (4 * r), lambda r: 4 * r + 1),
    CongruenceClaim("C-quartic-weight-full", _C, WeightKind.GUO_C, _FULL, _CONJ,
                    lambda p, r: p ** (4 * r), lambda r: 4 * r + 1),
)
# fmt: on


def claims_for(spec: CongruenceSpec) -> list[CongruenceClaim]:
    return [claim for claim in CLAIMS if claim.applies_to(spec)]


def has_claims(family: SumFamily, weight: WeightKind, range: SummationRange) -> bool:
    return any((c.family, c.weight, c.range) == (family, weight, range) for c in CLAIMS)


def _primary_claim(spec: CongruenceSpec) -> CongruenceClaim:
    claims = claims_for(spec)
    if not claims:
        raise UnsupportedSpec(f"no congruence is known for {spec.as_dict()}")
    return claims[0]


@dataclass(frozen=True)
class CongruenceReport:
    spec: CongruenceSpec
    claim: str
    status: ClaimStatus
    exact_sum: Rational
    modulus: PrimePowerModulus
    residue: int
    expected: int

    @property
    def passed(self) -> bool:
        return self.residue == self.expected

    @property
    def asserted(self) -> bool:
        return not self.spec.report_only


def exact_sum(spec: CongruenceSpec) -> Rational:
    """sum_{n=0}^{upper} weight(n) C(2n,n)^d / base^n.

    The term is carried from n to n+1 by the exact ratio
    ((2n+1)(2n+2)/(n+1)^2)^d / base, so no factorials are recomputed.
    """
    d, base = spec.family.binomial_power, spec.family.base
    term = Fraction(1)
    total = Fraction(0)
    for n in range(spec.upper + 1):
        total += spec.weight.at(n) * term
        term *= Fraction((2 * n + 1) * (2 * n + 2), (n + 1) ** 2) ** d / base
    return total


def expected_residue(
    spec: CongruenceSpec, claim: CongruenceClaim | None = None
) -> tuple[int, int]:
    """(residue mod p^e, e) stated by ``claim``, by default the strongest claim for ``spec``.

    Raises:
        UnsupportedSpec: no congruence covers the combination.
    """
    claim = claim or _primary_claim(spec)
    e = claim.exponent(spec.r)
    return claim.residue(spec.p, spec.r) % spec.p**e, e


@allure.step("Check congruence {spec}")
def check_congruence(
    spec: CongruenceSpec, claim: CongruenceClaim | None = None
) -> CongruenceReport:
    claim = claim or _primary_claim(spec)
    expected, e = expected_residue(spec, claim)
    modulus = PrimePowerModulus(spec.p, e)
    value = exact_sum(spec)
    report = CongruenceReport(
        spec=spec,
        claim=claim.name,
        status=claim.status,
        exact_sum=value,
        modulus=modulus,
        residue=mod_reduce(value, modulus),
        expected=expected,
    )
    if report.passed:
        logger.info(f"[CONGRUENCE] {claim.name} p={spec.p} r={spec.r}: {report.residue} mod {modulus}")
    elif report.asserted:
        logger.error(
            f"[CONGRUENCE] {claim.name} p={spec.p} r={spec.r}: "
            f"residue {report.residue} != expected {expected} mod {modulus}"
        )
    else:
        logger.warning(
            f"[CONGRUENCE] report-only {claim.name} p={spec.p}: "
            f"residue {report.residue} != {expected} mod {modulus}"
        )
    return report


def desk_scale_ok(p: int, r: int, max_terms: int = CONST.MAX_TERMS) -> bool:
    return p**r <= max_terms


def bridge_check(n_max: int, base_b: int = -64, base_c: int = 256) -> bool:
    """Binomial terms against rising-factorial terms of the l = 2 theorems.

    (-1)^n (1/2)_n^3/(1)_n^3 = C(2n,n)^3/(-64)^n and
    (1/2)_n^4/(1)_n^4 = C(2n,n)^4/256^n for all n <= n_max.
    """
    half = Fraction(1, 2)
    for n in range(n_max + 1):
        ratio = rising_factorial(half, n) / rising_factorial(1, n)
        binom = central_binomial(n)
        if (-1) ** n * ratio**3 != Fraction(binom**3, base_b**n):
            logger.debug(f"[BRIDGE] family B mismatch at n={n}")
            return False
        if ratio**4 != Fraction(binom**4, base_c**n):
            logger.debug(f"[BRIDGE] family C mismatch at n={n}")
            return False
    return True


def weight_relation_holds() -> bool:
    """(4n+1)^3 + 3(4n+1) = 4(4n+1)(4n^2+2n+1) as polynomials."""
    lhs = WeightKind.CUBE.polynomial + 3 * WeightKind.LINEAR.polynomial
    return (lhs - 4 * WeightKind.GUO_B.polynomial).is_zero()


def bridge_weights_match() -> bool:
    """At l = 2 and s = 0 the theorem weights become the GUO_B and GUO_C weights."""
    at_two = {
        theorem: weight_polynomial(theorem).substitute("L", 2).substitute("s", 0)
        for theorem in Theorem
    }
    return (
        at_two[Theorem.T1] == WeightKind.GUO_B.polynomial
        and at_two[Theorem.T2] == WeightKind.GUO_C.polynomial
    )
