"""Closed-form telescoping identities generalizing the l-parametric 1/pi-type sums.

Theorem T1:
    sum_{n=s}^{M} (-1)^n (2ln+1)(l^2n^2+ln+1-l^2s^2) A(n) = (-1)^M B(M)
Theorem T2:
    sum_{n=s}^{M} (2ln+1)(2l^2n^2+2ln+1-l^2s^2) A(n) (1/l)_n/(1)_n = B(M) (1+1/l)_M/(1)_M

with A(n) = (1/l)_{n+s}(1/l)_{n-s}(1/l)_n / ((1)_{n+s}(1)_{n-s}(1)_n) and
B(M) the same product with 1+1/l in place of 1/l. Left sides are summed term by
term; right sides come from the closed-form product, with no shared caching.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import allure

from verifiers.wz.certificates import CertificateId, TermPoint, eval_F, eval_G
from verifiers.wz.exact_core import PoleError, Rational, rising_factorial
from verifiers.wz.mpoly import L, N, S, MPoly

logger = logging.getLogger("TelescopingIdentities")

Weight = Callable[[int, int, int], int]
"""Summand weight as a function of (l, s, n)."""


class Theorem(Enum):
    T1 = 1
    T2 = 2

    @property
    def certificate(self) -> CertificateId:
        return CertificateId.WZ_PAIR if self is Theorem.T1 else CertificateId.ZEILBERGER_PAIR

    @property
    def f_multiplier(self) -> int:
        """q in c * {F(n,0) - q F(n,1)}, the k = 1 instance of the recurrence."""
        return 1 if self is Theorem.T1 else 2


class InvalidIdentityParams(ValueError):
    pass


@dataclass(frozen=True, order=True)
class IdentityParams:
    l: int
    s: int
    M: int

    def __post_init__(self):
        if self.l < 1 or self.s < 0 or self.M < self.s:
            raise InvalidIdentityParams(f"need l >= 1, s >= 0, M >= s, got {self}")

    def as_dict(self) -> dict[str, int]:
        return {"l": self.l, "s": self.s, "M": self.M}


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one identity or proof replay.

    ``checks`` holds named sub-checks of a replay; ``applicable`` is False when
    the replay multiplier has a pole, in which case lhs and rhs are None.
    """

    theorem: Theorem
    params: IdentityParams
    lhs: Rational | None
    rhs: Rational | None
    checks: dict[str, bool] = field(default_factory=dict)
    applicable: bool = True
    trace: tuple[Rational, ...] | None = None

    @property
    def equal(self) -> bool:
        return self.lhs is not None and self.lhs == self.rhs

    @property
    def passed(self) -> bool:
        return self.applicable and self.equal and all(self.checks.values())


def weight_theorem1(ell: int, s: int, n: int) -> int:
    return (2 * ell * n + 1) * (ell**2 * n**2 + ell * n + 1 - ell**2 * s**2)


def weight_theorem2(ell: int, s: int, n: int) -> int:
    return (2 * ell * n + 1) * (2 * ell**2 * n**2 + 2 * ell * n + 1 - ell**2 * s**2)


def _summand(theorem: Theorem, p: IdentityParams, n: int, weight: Weight) -> Rational:
    a = Fraction(1, p.l)
    ratio = (
        rising_factorial(a, n + p.s)
        * rising_factorial(a, n - p.s)
        * rising_factorial(a, n)
        / (rising_factorial(1, n + p.s) * rising_factorial(1, n - p.s) * rising_factorial(1, n))
    )
    if theorem is Theorem.T1:
        return (-1) ** n * weight(p.l, p.s, n) * ratio
    return weight(p.l, p.s, n) * ratio * rising_factorial(a, n) / rising_factorial(1, n)


def summands(
    theorem: Theorem, p: IdentityParams, weight: Weight | None = None
) -> list[Rational]:
    weight = weight or (weight_theorem1 if theorem is Theorem.T1 else weight_theorem2)
    return [_summand(theorem, p, n, weight) for n in range(p.s, p.M + 1)]


def lhs_theorem1(p: IdentityParams, weight: Weight | None = None) -> Rational:
    return sum(summands(Theorem.T1, p, weight), Fraction(0))


def lhs_theorem2(p: IdentityParams, weight: Weight | None = None) -> Rational:
    return sum(summands(Theorem.T2, p, weight), Fraction(0))


def _closed_form(p: IdentityParams, squared_m: bool) -> Rational:
    b = 1 + Fraction(1, p.l)
    value = (
        rising_factorial(b, p.M + p.s)
        * rising_factorial(b, p.M - p.s)
        * rising_factorial(b, p.M)
        / (rising_factorial(1, p.M + p.s) * rising_factorial(1, p.M - p.s) * rising_factorial(1, p.M))
    )
    if squared_m:
        value *= rising_factorial(b, p.M) / rising_factorial(1, p.M)
    return value


def rhs_theorem1(p: IdentityParams) -> Rational:
    return (-1) ** p.M * _closed_form(p, squared_m=False)


def rhs_theorem2(p: IdentityParams) -> Rational:
    return _closed_form(p, squared_m=True)


_SIDES = {
    Theorem.T1: (lhs_theorem1, rhs_theorem1),
    Theorem.T2: (lhs_theorem2, rhs_theorem2),
}


@allure.step("Verify {theorem} at {p}")
def verify_identity(
    theorem: Theorem,
    p: IdentityParams,
    *,
    weight: Weight | None = None,
    trace: bool = False,
) -> IdentityReport:
    lhs_fn, rhs_fn = _SIDES[theorem]
    terms = summands(theorem, p, weight) if trace else None
    lhs = sum(terms, Fraction(0)) if trace else lhs_fn(p, weight)
    report = IdentityReport(
        theorem, p, lhs, rhs_fn(p), trace=tuple(terms) if trace else None
    )
    if not report.equal:
        logger.error(f"[IDENTITY] {theorem.name} fails at {p}: {report.lhs} != {report.rhs}")
    return report


def telescoping_multiplier(ell: int, s: int) -> Rational:
    """c = l^2 (1/l)_{1+s} (1/l)_{1-s}.

    Raises:
        PoleError: (1/l)_{1-s} is infinite, which happens for l = 1 and s >= 2.
    """
    a = Fraction(1, ell)
    return ell**2 * rising_factorial(a, 1 + s) * rising_factorial(a, 1 - s)


@allure.step("Replay telescoping proof of {theorem} at {p}")
def replay_telescoping_proof(theorem: Theorem, p: IdentityParams) -> IdentityReport:
    """Rebuild both sides from the certificate at k = 1.

    Checks recorded in the report:
      termwise        c{F(n,0) - qF(n,1)} equals the n-th summand for every n
      partial_sums    sum_{n=s}^{m} summand = c{G(m+1,1) - G(s,1)} for every m
      closed_form     c{G(M+1,1) - G(s,1)} equals the theorem's right side
      g_boundary      G(s,1) = 0
    """
    try:
        c = telescoping_multiplier(p.l, p.s)
    except PoleError as e:
        logger.warning(f"[REPLAY] {theorem.name} at {p} not applicable: {e}")
        return IdentityReport(theorem, p, None, None, applicable=False)

    cert = theorem.certificate
    q = theorem.f_multiplier
    expected_terms = summands(theorem, p)
    g_boundary = eval_G(cert, TermPoint(p.l, p.s, p.s, 1))

    termwise = True
    partial_sums = True
    rebuilt = Fraction(0)
    running = Fraction(0)
    for n, expected in zip(range(p.s, p.M + 1), expected_terms):
        term = c * (
            eval_F(cert, TermPoint(p.l, p.s, n, 0), enforce_domain=False)
            - q * eval_F(cert, TermPoint(p.l, p.s, n, 1), enforce_domain=False)
        )
        termwise &= term == expected
        rebuilt += term
        running += expected
        telescoped = c * (eval_G(cert, TermPoint(p.l, p.s, n + 1, 1)) - g_boundary)
        partial_sums &= running == telescoped

    rhs = c * (eval_G(cert, TermPoint(p.l, p.s, p.M + 1, 1)) - g_boundary)
    checks = {
        "termwise": termwise,
        "partial_sums": partial_sums,
        "closed_form": rhs == _SIDES[theorem][1](p),
        "g_boundary": g_boundary == 0,
    }
    report = IdentityReport(theorem, p, rebuilt, rhs, checks=checks)
    if not report.passed:
        failed = [name for name, ok in checks.items() if not ok]
        logger.error(f"[REPLAY] {theorem.name} at {p} failed checks {failed}")
    return report


@allure.step("Verify the s = 0 specialization of {theorem} at l={ell}, M={M}")
def special_case_res(theorem: Theorem, ell: int, M: int) -> IdentityReport:
    """s = 0 closed forms summed directly with their own reduced weights.

    T1: sum (-1)^n (2ln+1)(l^2n^2+ln+1) (1/l)_n^3/(1)_n^3 = (-1)^M (1+1/l)_M^3/(1)_M^3
    T2: sum (2ln+1)(2l^2n^2+2ln+1) (1/l)_n^4/(1)_n^4 = (1+1/l)_M^4/(1)_M^4
    """
    p = IdentityParams(ell, 0, M)
    a, b = Fraction(1, ell), 1 + Fraction(1, ell)
    power = 3 if theorem is Theorem.T1 else 4
    lhs = Fraction(0)
    for n in range(M + 1):
        base = (rising_factorial(a, n) / rising_factorial(1, n)) ** power
        if theorem is Theorem.T1:
            lhs += (-1) ** n * (2 * ell * n + 1) * (ell**2 * n**2 + ell * n + 1) * base
        else:
            lhs += (2 * ell * n + 1) * (2 * ell**2 * n**2 + 2 * ell * n + 1) * base
    rhs = (rising_factorial(b, M) / rising_factorial(1, M)) ** power
    if theorem is Theorem.T1:
        rhs *= (-1) ** M
    checks = {"matches_theorem": lhs == _SIDES[theorem][0](p)}
    return IdentityReport(theorem, p, lhs, rhs, checks=checks)


def verify_summand_bracket(theorem: Theorem) -> bool:
    """Polynomial form of the proof step that turns c{F(n,0) - qF(n,1)} into the summand.

    After cancelling common factors, the bracket l^2{(1/l+s)(1/l-s) + q n(1/l+n)}
    must equal the quadratic factor of the theorem's weight.
    """
    q = theorem.f_multiplier
    bracket = (1 + L * S) * (1 - L * S) + q * L * N * (1 + L * N)
    if theorem is Theorem.T1:
        quadratic = L**2 * N**2 + L * N + 1 - L**2 * S**2
    else:
        quadratic = 2 * L**2 * N**2 + 2 * L * N + 1 - L**2 * S**2
    return (bracket - quadratic).is_zero()


def identity_grid(l_max: int, s_max: int, m_extent: int) -> list[IdentityParams]:
    return [
        IdentityParams(ell, s, M)
        for ell in range(1, l_max + 1)
        for s in range(s_max + 1)
        for M in range(s, s + m_extent + 1)
    ]


def weight_polynomial(theorem: Theorem) -> MPoly:
    """The summand weight as a polynomial in L, n, s."""
    if theorem is Theorem.T1:
        return (2 * L * N + 1) * (L**2 * N**2 + L * N + 1 - L**2 * S**2)
    return (2 * L * N + 1) * (2 * L**2 * N**2 + 2 * L * N + 1 - L**2 * S**2)
