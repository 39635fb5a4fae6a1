"""The two certificate pairs (F, G) and checks of their recurrences.

Both pairs are hypergeometric in n and k:

  WZ pair         F(n,k-1) - F(n,k) = G(n+1,k) - G(n,k)
  Zeilberger pair (lk-l+1) F(n,k-1) - (lk-l+2) F(n,k) = G(n+1,k) - G(n,k)

Each term is described structurally (sign exponent, polynomial prefactor,
rising factorials upstairs, reciprocal rising factorials downstairs) so the
same description drives evaluation, rendering and mutation testing. The
ratio triples are transcribed independently as rational functions in
L, n, k, s with every 1/l cleared into the denominator.
"""

import logging
import random
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction

import allure

from verifiers.wz.exact_core import (
    PoleError,
    Rational,
    inv_rising_factorial,
    rising_factorial,
)
from verifiers.wz.mpoly import (
    K,
    L,
    N,
    S,
    MPoly,
    RationalFunction,
    VanishingDenominator,
    rf_cross_difference,
    rf_scalar,
    rf_sub,
)

logger = logging.getLogger("WzCertificates")


class CertificateId(Enum):
    WZ_PAIR = "wz"
    ZEILBERGER_PAIR = "zeilberger"


class FactorBase(Enum):
    INV_ELL = "1/l"
    ONE = "1"

    def at(self, ell: int) -> Fraction:
        return Fraction(1, ell) if self is FactorBase.INV_ELL else Fraction(1)


class InvalidTermPoint(ValueError):
    pass


class SkippedPoint(Exception):
    """A ratio check whose preconditions fail at the requested point."""


@dataclass(frozen=True)
class TermPoint:
    """Evaluation point of a certificate term.

    ``l >= 1`` and ``s >= 0`` always hold; the lemma domain additionally asks
    ``n >= s`` and ``n >= k``, checked by :meth:`in_lemma_domain`.
    """

    l: int
    s: int
    n: int
    k: int

    def __post_init__(self):
        if self.l < 1 or self.s < 0:
            raise InvalidTermPoint(f"need l >= 1 and s >= 0, got {self}")

    def in_lemma_domain(self) -> bool:
        return self.n >= self.s and self.n >= self.k and self.k >= 0

    def shifted(self, dn: int = 0, dk: int = 0) -> "TermPoint":
        return replace(self, n=self.n + dn, k=self.k + dk)

    def as_point(self) -> dict[str, int]:
        return {"L": self.l, "n": self.n, "k": self.k, "s": self.s}


@dataclass(frozen=True)
class Shift:
    """Integer affine form a*n + b*k + c*s + d."""

    n: int = 0
    k: int = 0
    s: int = 0
    const: int = 0

    def at(self, pt: TermPoint) -> int:
        return self.n * pt.n + self.k * pt.k + self.s * pt.s + self.const

    def __str__(self) -> str:
        parts = []
        for coeff, name in ((self.n, "n"), (self.k, "k"), (self.s, "s")):
            if coeff:
                sign = "-" if coeff < 0 else "+"
                mag = "" if abs(coeff) == 1 else str(abs(coeff))
                parts.append(f"{sign}{mag}{name}")
        if self.const or not parts:
            parts.append(f"{'-' if self.const < 0 else '+'}{abs(self.const)}")
        return "".join(parts).lstrip("+")


@dataclass(frozen=True)
class Factor:
    base: FactorBase
    index: Shift

    def __str__(self) -> str:
        return f"({self.base.value})_{{{self.index}}}"


@dataclass(frozen=True)
class TermDescription:
    """(-1)^sign * prefactor * prod(numerator) / prod(denominator)."""

    sign: Shift
    prefactor: MPoly
    numerator: tuple[Factor, ...]
    denominator: tuple[Factor, ...]

    def evaluate(self, pt: TermPoint) -> Rational:
        value = Fraction(-1 if self.sign.at(pt) % 2 else 1)
        value *= self.prefactor.evaluate(pt.as_point())
        try:
            for factor in self.numerator:
                value *= rising_factorial(factor.base.at(pt.l), factor.index.at(pt))
        except PoleError:
            logger.error(f"[EVAL] numerator pole at {pt} in {self.render()}")
            raise
        for factor in self.denominator:
            value *= inv_rising_factorial(factor.base.at(pt.l), factor.index.at(pt))
            if value == 0:
                return value
        return value

    def render(self) -> str:
        top = " ".join(str(f) for f in self.numerator)
        bottom = " ".join(str(f) for f in self.denominator)
        return f"(-1)^({self.sign}) * ({self.prefactor.render()}) * [{top}] / [{bottom}]"


@dataclass(frozen=True)
class Certificate:
    """A certified pair with recurrence multipliers p(k), q(k) (polynomials in L, k)."""

    id: CertificateId
    F: TermDescription
    G: TermDescription
    p: MPoly = field(default_factory=lambda: MPoly.const(1))
    q: MPoly = field(default_factory=lambda: MPoly.const(1))


@dataclass(frozen=True)
class RatioTriple:
    """F(n,k-1)/F(n,k), G(n+1,k)/F(n,k) and G(n,k)/F(n,k)."""

    r1: RationalFunction
    r2: RationalFunction
    r3: RationalFunction


def _f(base: FactorBase, **shift: int) -> Factor:
    return Factor(base, Shift(**shift))


_INV, _ONE = FactorBase.INV_ELL, FactorBase.ONE

_WZ = Certificate(
    id=CertificateId.WZ_PAIR,
    F=TermDescription(
        sign=Shift(n=1, k=1),
        prefactor=2 * L * N + 1,
        numerator=(_f(_INV, n=1, s=1), _f(_INV, n=1, s=-1), _f(_INV, n=1, k=1)),
        denominator=(
            _f(_ONE, n=1, s=1),
            _f(_ONE, n=1, s=-1),
            _f(_ONE, n=1, k=-1),
            _f(_INV, k=1, s=1),
            _f(_INV, k=1, s=-1),
        ),
    ),
    G=TermDescription(
        sign=Shift(n=1, k=1),
        prefactor=L,
        numerator=(
            _f(_INV, n=1, s=1),
            _f(_INV, n=1, s=-1),
            _f(_INV, n=1, k=1, const=-1),
        ),
        denominator=(
            _f(_ONE, n=1, s=1, const=-1),
            _f(_ONE, n=1, s=-1, const=-1),
            _f(_ONE, n=1, k=-1),
            _f(_INV, k=1, s=1),
            _f(_INV, k=1, s=-1),
        ),
    ),
)

_ZEILBERGER = Certificate(
    id=CertificateId.ZEILBERGER_PAIR,
    F=TermDescription(
        sign=Shift(k=1),
        prefactor=2 * L * N + 1,
        numerator=(
            _f(_INV, n=1, s=1),
            _f(_INV, n=1, s=-1),
            _f(_INV, n=1),
            _f(_INV, n=1, k=1),
        ),
        denominator=(
            _f(_ONE, n=1, s=1),
            _f(_ONE, n=1, s=-1),
            _f(_ONE, n=1),
            _f(_ONE, n=1, k=-1),
            _f(_INV, k=1, s=1),
            _f(_INV, k=1, s=-1),
        ),
    ),
    G=TermDescription(
        sign=Shift(k=1, const=-1),
        prefactor=L**2,
        numerator=(
            _f(_INV, n=1, s=1),
            _f(_INV, n=1, s=-1),
            _f(_INV, n=1),
            _f(_INV, n=1, k=1, const=-1),
        ),
        denominator=(
            _f(_ONE, n=1, s=1, const=-1),
            _f(_ONE, n=1, s=-1, const=-1),
            _f(_ONE, n=1, const=-1),
            _f(_ONE, n=1, k=-1),
            _f(_INV, k=1, s=1),
            _f(_INV, k=1, s=-1),
        ),
    ),
    p=L * K - L + 1,
    q=L * K - L + 2,
)

CERTIFICATES: dict[CertificateId, Certificate] = {
    CertificateId.WZ_PAIR: _WZ,
    CertificateId.ZEILBERGER_PAIR: _ZEILBERGER,
}


def certificate(id: CertificateId) -> Certificate:
    return CERTIFICATES[id]


def render_certificate(id: CertificateId) -> str:
    cert = certificate(id)
    return "\n".join(
        [
            f"{id.value} certificate",
            f"  F(n,k) = {cert.F.render()}",
            f"  G(n,k) = {cert.G.render()}",
            f"  p(k) = {cert.p.render()}, q(k) = {cert.q.render()}",
        ]
    )


def _check_domain(pt: TermPoint) -> None:
    if not pt.in_lemma_domain():
        raise InvalidTermPoint(f"{pt} violates n >= s, n >= k, k >= 0")


def eval_F(
    id: CertificateId | Certificate, pt: TermPoint, *, enforce_domain: bool = True
) -> Rational:
    """Exact F(n,k). Reciprocal factors with negative index follow 1/(1)_m = 0."""
    cert = id if isinstance(id, Certificate) else certificate(id)
    if enforce_domain:
        _check_domain(pt)
    return cert.F.evaluate(pt)


def eval_G(id: CertificateId | Certificate, pt: TermPoint) -> Rational:
    """Exact G(n,k); n >= s is not required, so G(s,1) evaluates to 0."""
    cert = id if isinstance(id, Certificate) else certificate(id)
    if pt.k < 0:
        raise InvalidTermPoint(f"{pt} has k < 0")
    return cert.G.evaluate(pt)


def recurrence_sides(
    id: CertificateId | Certificate, pt: TermPoint, *, enforce_domain: bool = True
) -> tuple[Rational, Rational]:
    """Left side p(k)F(n,k-1) - q(k)F(n,k) and right side G(n+1,k) - G(n,k)."""
    cert = id if isinstance(id, Certificate) else certificate(id)
    if pt.k < 1:
        raise InvalidTermPoint(f"{pt} needs k >= 1 so that F(n,k-1) is defined")
    if enforce_domain:
        _check_domain(pt)
    point = pt.as_point()
    left = cert.p.evaluate(point) * cert.F.evaluate(pt.shifted(dk=-1)) - cert.q.evaluate(
        point
    ) * cert.F.evaluate(pt)
    right = cert.G.evaluate(pt.shifted(dn=1)) - cert.G.evaluate(pt)
    return left, right


def check_recurrence_pointwise(id: CertificateId | Certificate, pt: TermPoint) -> bool:
    left, right = recurrence_sides(id, pt)
    if left != right:
        logger.debug(f"[GRID] recurrence fails at {pt}: {left} != {right}")
    return left == right


@dataclass(frozen=True)
class GridBounds:
    l_max: int
    s_max: int
    n_extent: int

    def points(self) -> Iterator[TermPoint]:
        """All (l, s, n, k) with s <= n <= s + n_extent and 1 <= k <= n."""
        for ell in range(1, self.l_max + 1):
            for s in range(self.s_max + 1):
                for n in range(s, s + self.n_extent + 1):
                    for k in range(1, n + 1):
                        yield TermPoint(ell, s, n, k)


@dataclass
class GridResult:
    checked: int = 0
    failures: list[TermPoint] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures


def verify_grid(id: CertificateId | Certificate, bounds: GridBounds) -> GridResult:
    result = GridResult()
    for pt in bounds.points():
        result.checked += 1
        if not check_recurrence_pointwise(id, pt):
            result.failures.append(pt)
    name = id.id.value if isinstance(id, Certificate) else id.value
    logger.info(
        f"[GRID] {name}: {result.checked} points, {len(result.failures)} failures"
    )
    return result


def ratio_triple(id: CertificateId) -> RatioTriple:
    """The displayed ratios of the proof, with (1-l)/l cleared into denominators.

    n + k + (1-l)/l = (Ln + Lk + 1 - L)/L and n + 1/l +- s = (Ln + 1 +- Ls)/L.
    """
    shifted_nk = L * N + L * K + 1 - L
    r1 = RationalFunction(
        -(L * K + L * S + 1 - L) * (L * K - L * S + 1 - L),
        L * shifted_nk * (N - K + 1),
    )
    if id is CertificateId.WZ_PAIR:
        r2 = RationalFunction(
            -(L * N + 1 + L * S) * (L * N + 1 - L * S),
            L * (2 * L * N + 1) * (N - K + 1),
        )
        r3 = RationalFunction(L**2 * (N**2 - S**2), (2 * L * N + 1) * shifted_nk)
    else:
        r2 = RationalFunction(
            -(L * N + 1 + L * S) * (L * N + 1 - L * S) * (L * N + 1),
            L * (2 * L * N + 1) * (N - K + 1),
        )
        r3 = RationalFunction(
            -(L**3) * (N**3 - N * S**2), (2 * L * N + 1) * shifted_nk
        )
    return RatioTriple(r1, r2, r3)


def symbolic_residual(id: CertificateId, triple: RatioTriple | None = None) -> MPoly:
    """Cross-multiplied difference of p*r1 - q and r2 - r3; zero iff the certificate holds."""
    cert = certificate(id)
    triple = triple or ratio_triple(id)
    left = rf_sub(rf_scalar(triple.r1, cert.p), RationalFunction(cert.q))
    right = rf_sub(triple.r2, triple.r3)
    return rf_cross_difference(left, right)


@allure.step("Verify {id} certificate symbolically")
def verify_certificate_symbolic(id: CertificateId, triple: RatioTriple | None = None) -> bool:
    residual = symbolic_residual(id, triple)
    if residual.is_zero():
        logger.info(f"[SYMBOLIC] {id.value}: residual is the zero polynomial")
    else:
        logger.error(f"[SYMBOLIC] {id.value}: nonzero residual {residual.render()}")
    return residual.is_zero()


def check_ratio_consistency(id: CertificateId, pt: TermPoint) -> bool:
    """Compare exact term ratios at ``pt`` with the rational-function ratios.

    Raises:
        SkippedPoint: F(n,k) = 0, k < 1, or a ratio denominator vanishes at ``pt``.
    """
    if pt.k < 1 or not pt.in_lemma_domain():
        raise SkippedPoint(f"{pt} is outside the lemma domain with k >= 1")
    f_nk = eval_F(id, pt)
    if f_nk == 0:
        raise SkippedPoint(f"F vanishes at {pt}")
    triple = ratio_triple(id)
    point = pt.as_point()
    try:
        expected = (triple.r1.evaluate(point), triple.r2.evaluate(point), triple.r3.evaluate(point))
    except VanishingDenominator as e:
        raise SkippedPoint(str(e)) from e
    actual = (
        eval_F(id, pt.shifted(dk=-1)) / f_nk,
        eval_G(id, pt.shifted(dn=1)) / f_nk,
        eval_G(id, pt) / f_nk,
    )
    return actual == expected


@dataclass
class SampleResult:
    passed: int = 0
    failed: int = 0
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0


def sample_ratio_consistency(
    id: CertificateId, bounds: GridBounds, count: int, seed: int
) -> SampleResult:
    """Check ratio consistency at ``count`` distinct admissible points of ``bounds``.

    Points are visited in a seeded random order without replacement. Skipped
    points do not count towards ``count``; a grid with fewer admissible points
    is checked exhaustively.
    """
    points = list(bounds.points())
    random.Random(seed).shuffle(points)
    result = SampleResult()
    for pt in points:
        if result.passed + result.failed >= count:
            break
        try:
            if check_ratio_consistency(id, pt):
                result.passed += 1
            else:
                result.failed += 1
                logger.error(f"[RATIOS] {id.value}: mismatch at {pt}")
        except SkippedPoint as e:
            result.skipped += 1
            logger.debug(f"[RATIOS] skipped: {e}")
    logger.info(
        f"[RATIOS] {id.value}: {result.passed} passed, {result.failed} failed, "
        f"{result.skipped} skipped"
    )
    return result


def _scale_g(cert: Certificate) -> Certificate:
    return replace(cert, G=replace(cert.G, prefactor=cert.G.prefactor * 2))


def _flip_sign(part: str) -> Callable[[Certificate], Certificate]:
    def mutate(cert: Certificate) -> Certificate:
        term = getattr(cert, part)
        return replace(cert, **{part: replace(term, sign=replace(term.sign, const=term.sign.const + 1))})

    return mutate


def _bump_index(part: str, side: str, position: int) -> Callable[[Certificate], Certificate]:
    def mutate(cert: Certificate) -> Certificate:
        term = getattr(cert, part)
        factors = list(getattr(term, side))
        target = factors[position]
        factors[position] = replace(target, index=replace(target.index, const=target.index.const + 1))
        return replace(cert, **{part: replace(term, **{side: tuple(factors)})})

    return mutate


def _set_prefactor(part: str, prefactor: MPoly) -> Callable[[Certificate], Certificate]:
    def mutate(cert: Certificate) -> Certificate:
        return replace(cert, **{part: replace(getattr(cert, part), prefactor=prefactor)})

    return mutate


CANNED_MUTATIONS: dict[str, tuple[CertificateId, Callable[[Certificate], Certificate]]] = {
    "wz-scale-g": (CertificateId.WZ_PAIR, _scale_g),
    "wz-flip-f-sign": (CertificateId.WZ_PAIR, _flip_sign("F")),
    "wz-flip-g-sign": (CertificateId.WZ_PAIR, _flip_sign("G")),
    "wz-f-prefactor": (CertificateId.WZ_PAIR, _set_prefactor("F", 2 * L * N + 2)),
    "wz-f-numerator-index": (CertificateId.WZ_PAIR, _bump_index("F", "numerator", 2)),
    "wz-g-denominator-index": (CertificateId.WZ_PAIR, _bump_index("G", "denominator", 1)),
    "zeilberger-g-prefactor": (CertificateId.ZEILBERGER_PAIR, _set_prefactor("G", L)),
    "zeilberger-flip-f-sign": (CertificateId.ZEILBERGER_PAIR, _flip_sign("F")),
    "zeilberger-f-numerator-index": (
        CertificateId.ZEILBERGER_PAIR,
        _bump_index("F", "numerator", 2),
    ),
    "zeilberger-p-multiplier": (
        CertificateId.ZEILBERGER_PAIR,
        lambda cert: replace(cert, p=L * K - L + 2),
    ),
}


def mutated(name: str) -> Certificate:
    id, mutate = CANNED_MUTATIONS[name]
    return mutate(certificate(id))
