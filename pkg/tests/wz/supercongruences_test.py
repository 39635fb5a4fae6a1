import logging
from fractions import Fraction

import allure
import pytest

from utilities.constants import Constants as CONST
from utilities.report_helper import RecordStatus, ReportRecord
from verifiers.wz.exact_core import central_binomial, rising_factorial
from verifiers.wz.identities import IdentityParams, rhs_theorem1, rhs_theorem2
from verifiers.wz.supercongruences import (
    CLAIMS,
    ClaimStatus,
    CongruenceSpec,
    SumFamily,
    SummationRange,
    UnsupportedSpec,
    WeightKind,
    bridge_check,
    bridge_weights_match,
    check_congruence,
    claims_for,
    desk_scale_ok,
    exact_sum,
    expected_residue,
    has_claims,
    weight_relation_holds,
)

logger = logging.getLogger("SupercongruencesTest")

B, C = SumFamily.B, SumFamily.C
HALF, FULL = SummationRange.HALF, SummationRange.FULL


def _acceptance_specs() -> list[CongruenceSpec]:
    specs = []
    for family, weight, range_ in [
        (B, WeightKind.LINEAR, HALF),
        (B, WeightKind.CUBE, HALF),
        (B, WeightKind.GUO_B, HALF),
        (B, WeightKind.GUO_B, FULL),
        (C, WeightKind.LINEAR, HALF),
        (C, WeightKind.CUBE, HALF),
        (C, WeightKind.GUO_C, HALF),
        (C, WeightKind.GUO_C, FULL),
    ]:
        for p in CONST.PRIMES:
            if p == 3 and family is C and weight in (WeightKind.LINEAR, WeightKind.CUBE):
                continue
            for r in range(1, CONST.R_MAX + 1):
                specs.append(CongruenceSpec(family, weight, p, r, range_))
    return specs


@allure.epic("Supercongruences")
@allure.feature("Pinned residues")
class TestSpotValues:

    @pytest.mark.wz_sanity
    @pytest.mark.parametrize(
        "family, weight, p, range_, total, residue, e",
        [
            (B, WeightKind.LINEAR, 3, HALF, Fraction(3, 8), 24, 3),
            (B, WeightKind.LINEAR, 5, HALF, Fraction(435, 512), 5, 3),
            (B, WeightKind.CUBE, 3, HALF, Fraction(-117, 8), 9, 3),
            (B, WeightKind.CUBE, 5, HALF, Fraction(12195, 512), 110, 3),
            (B, WeightKind.GUO_B, 3, HALF, Fraction(-27, 8), 27, 4),
            (B, WeightKind.GUO_B, 5, HALF, Fraction(3375, 512), 125, 4),
            (C, WeightKind.LINEAR, 5, HALF, Fraction(6105, 4096), 5, 4),
            (C, WeightKind.GUO_C, 3, HALF, Fraction(81, 16), 81, 5),
            (C, WeightKind.GUO_C, 3, FULL, Fraction(50625, 4096), 81, 5),
        ],
    )
    @allure.title("Exact sums and residues at r = 1")
    @allure.severity(allure.severity_level.CRITICAL)
    def test_spot_value(self, family, weight, p, range_, total, residue, e):
        spec = CongruenceSpec(family, weight, p, 1, range_)
        report = check_congruence(spec)
        assert report.exact_sum == total
        assert report.modulus.e == e
        assert report.residue == residue
        assert report.passed and report.asserted

    @pytest.mark.wz_sanity
    @allure.title("Family C linear at p = 3 is rejected without the override")
    @allure.severity(allure.severity_level.NORMAL)
    def test_c_linear_p3_unsupported(self):
        with pytest.raises(UnsupportedSpec):
            CongruenceSpec(C, WeightKind.LINEAR, 3, 1, HALF)

    @allure.title("Forced family C linear at p = 3 fails and is report-only")
    @allure.description("21/16 is 57 mod 81, not 3.")
    @allure.severity(allure.severity_level.NORMAL)
    def test_c_linear_p3_forced(self):
        spec = CongruenceSpec(C, WeightKind.LINEAR, 3, 1, HALF, force_p3=True)
        report = check_congruence(spec)
        assert spec.report_only
        assert report.exact_sum == Fraction(21, 16)
        assert (report.residue, report.expected) == (57, 3)
        assert not report.passed
        assert not report.asserted

    @allure.title("Weaker companion claims hold alongside the primary one")
    @allure.severity(allure.severity_level.NORMAL)
    def test_companion_claims(self):
        spec = CongruenceSpec(B, WeightKind.GUO_B, 3, 1, HALF)
        names = [claim.name for claim in claims_for(spec)]
        assert names == ["B-cubic-weight-half", "B-cubic-weight-vanishing"]
        assert [check_congruence(spec, claim).residue for claim in claims_for(spec)] == [27, 0]
        assert expected_residue(spec) == (27, 4)


@allure.epic("Supercongruences")
@allure.feature("Claim table")
class TestClaims:

    @allure.title("Every claim row pairs a family with its weights")
    @allure.severity(allure.severity_level.MINOR)
    def test_claim_table(self):
        assert len({claim.name for claim in CLAIMS}) == len(CLAIMS)
        assert not has_claims(B, WeightKind.LINEAR, FULL)
        assert has_claims(C, WeightKind.GUO_C, FULL)
        conjectures = {claim.name for claim in CLAIMS if claim.status is ClaimStatus.CONJECTURE}
        assert conjectures == {
            "B-cubic-weight-half",
            "B-cubic-weight-full",
            "C-quartic-weight-half",
            "C-quartic-weight-full",
        }

    @allure.title("r = 1 only claims drop out at r = 2")
    @allure.severity(allure.severity_level.MINOR)
    def test_r1_claims(self):
        assert [c.name for c in claims_for(CongruenceSpec(B, WeightKind.LINEAR, 5, 1, HALF))] == [
            "B.2",
            "B-linear-prime-power",
        ]
        assert [c.name for c in claims_for(CongruenceSpec(B, WeightKind.LINEAR, 5, 2, HALF))] == [
            "B-linear-prime-power"
        ]

    @allure.title("Combination without a known congruence")
    @allure.severity(allure.severity_level.NORMAL)
    def test_unsupported_combination(self):
        spec = CongruenceSpec(B, WeightKind.LINEAR, 5, 1, FULL)
        with pytest.raises(UnsupportedSpec):
            check_congruence(spec)

    @pytest.mark.parametrize(
        "family, weight, p, r",
        [
            (B, WeightKind.LINEAR, 4, 1),
            (B, WeightKind.LINEAR, 2, 1),
            (B, WeightKind.LINEAR, 5, 0),
            (B, WeightKind.GUO_C, 5, 1),
            (C, WeightKind.GUO_B, 5, 1),
        ],
    )
    @allure.title("Invalid congruence specs")
    @allure.severity(allure.severity_level.NORMAL)
    def test_invalid_spec(self, family, weight, p, r):
        with pytest.raises(UnsupportedSpec):
            CongruenceSpec(family, weight, p, r, HALF)

    @allure.title("Desk-scale term cap")
    @allure.severity(allure.severity_level.MINOR)
    def test_desk_scale(self):
        assert desk_scale_ok(13, 2)
        assert not desk_scale_ok(151, 2)
        assert desk_scale_ok(151, 2, max_terms=10**5)
        with pytest.raises(UnsupportedSpec):
            CongruenceSpec(B, WeightKind.LINEAR, 151, 2, HALF)
        wide = CongruenceSpec(B, WeightKind.LINEAR, 151, 2, HALF, max_terms=10**5)
        assert wide.upper == (151**2 - 1) // 2
        assert wide == CongruenceSpec(B, WeightKind.LINEAR, 151, 2, HALF, max_terms=151**2)

    @allure.title("Summation ranges")
    @allure.severity(allure.severity_level.MINOR)
    def test_ranges(self):
        assert HALF.upper(5, 2) == 12
        assert FULL.upper(5, 2) == 24
        assert WeightKind.LINEAR.at(2) == 9
        assert WeightKind.GUO_B.at(1) == 35


@allure.epic("Supercongruences")
@allure.feature("Acceptance grid")
class TestGrid:

    @pytest.mark.grid
    @allure.title("Every claim holds at p <= 13, r <= 2")
    @allure.description("Proven claims and conjectures alike, each at its stated modulus.")
    @allure.severity(allure.severity_level.BLOCKER)
    def test_all_claims(self, records):
        checked = 0
        for spec in _acceptance_specs():
            for claim in claims_for(spec):
                report = check_congruence(spec, claim)
                records.append(
                    ReportRecord(
                        kind="congruence",
                        params=spec.as_dict() | {"claim": claim.name},
                        status=RecordStatus.PASS if report.passed else RecordStatus.FAIL,
                        evidence=claim.status.value,
                        values={"expected": report.expected, "residue": report.residue},
                    )
                )
                checked += 1
        failed = [r for r in records if r.status is RecordStatus.FAIL]
        assert failed == []
        assert checked == 100


@allure.epic("Supercongruences")
@allure.feature("Bridges to the telescoping identities")
class TestBridges:

    @pytest.mark.wz_sanity
    @allure.title("Cubic weight relation as a polynomial identity")
    @allure.severity(allure.severity_level.NORMAL)
    def test_weight_relation(self):
        assert weight_relation_holds()

    @pytest.mark.wz_sanity
    @allure.title("l = 2, s = 0 theorem weights are the conjectured weights")
    @allure.severity(allure.severity_level.NORMAL)
    def test_bridge_weights(self):
        assert bridge_weights_match()

    @allure.title("Sums with the cubic weight follow from the linear and cube sums")
    @allure.description("4 Sum(guo-b) = Sum(cube) + 3 Sum(linear) exactly over random ranges of both families.")
    @allure.severity(allure.severity_level.NORMAL)
    def test_weight_relation_sums(self, rng):
        def weighted_sum(weight: WeightKind, power: int, base: int, lo: int, hi: int) -> Fraction:
            return sum(
                (Fraction(weight.at(n) * central_binomial(n) ** power, base**n) for n in range(lo, hi + 1)),
                Fraction(0),
            )

        for _ in range(20):
            lo = rng.randint(0, 40)
            hi = lo + rng.randint(0, 40)
            for power, base in ((3, -64), (4, 256)):
                guo = weighted_sum(WeightKind.GUO_B, power, base, lo, hi)
                cube = weighted_sum(WeightKind.CUBE, power, base, lo, hi)
                linear = weighted_sum(WeightKind.LINEAR, power, base, lo, hi)
                assert 4 * guo == cube + 3 * linear

    @allure.title("Binomial terms equal rising-factorial terms up to n = 200")
    @allure.severity(allure.severity_level.NORMAL)
    def test_bridge_terms(self):
        for n in range(201):
            assert Fraction(central_binomial(n), 4**n) == rising_factorial(Fraction(1, 2), n) / rising_factorial(1, n)
        assert bridge_check(200)
        assert not bridge_check(3, base_b=64)

    @allure.title("Partial sums equal the l = 2 closed forms at random upper bounds")
    @allure.severity(allure.severity_level.CRITICAL)
    def test_partial_sums(self, rng):
        for _ in range(5):
            M = rng.randint(0, 60)
            family_b = sum(
                (Fraction(WeightKind.GUO_B.at(n) * central_binomial(n) ** 3, (-64) ** n) for n in range(M + 1)),
                Fraction(0),
            )
            family_c = sum(
                (Fraction(WeightKind.GUO_C.at(n) * central_binomial(n) ** 4, 256**n) for n in range(M + 1)),
                Fraction(0),
            )
            assert family_b == rhs_theorem1(IdentityParams(2, 0, M))
            assert family_c == rhs_theorem2(IdentityParams(2, 0, M))

    @allure.title("Incremental sum agrees with direct binomials")
    @allure.severity(allure.severity_level.MINOR)
    def test_exact_sum_direct(self):
        spec = CongruenceSpec(C, WeightKind.CUBE, 7, 1, HALF)
        direct = sum(
            (Fraction((4 * n + 1) ** 3 * central_binomial(n) ** 4, 256**n) for n in range(4)),
            Fraction(0),
        )
        assert exact_sum(spec) == direct
