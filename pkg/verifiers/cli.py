"""Command-line front end: ``wz-verify {verify-identity,verify-wz,verify-congruences}``.

Exit codes: 0 when every asserted record passes, 1 on an asserted failure,
2 on usage, configuration or I/O errors.
"""

import argparse
import logging
import os
import sys
import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from pathlib import Path

from utilities.constants import Constants as CONST
from utilities.report_helper import RecordStatus, ReportHelper, ReportRecord
from verifiers.wz.certificates import (
    CertificateId,
    GridBounds,
    check_recurrence_pointwise,
    mutated,
    render_certificate,
    sample_ratio_consistency,
    symbolic_residual,
)
from verifiers.wz.exact_core import is_odd_prime
from verifiers.wz.identities import (
    IdentityParams,
    IdentityReport,
    Theorem,
    identity_grid,
    replay_telescoping_proof,
    verify_identity,
)
from verifiers.wz.supercongruences import (
    CongruenceReport,
    CongruenceSpec,
    SumFamily,
    SummationRange,
    UnsupportedSpec,
    WeightKind,
    check_congruence,
    claims_for,
    has_claims,
)

logger = logging.getLogger("VerifyCli")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    l_max: int
    s_max: int
    extent: int
    primes: tuple[int, ...]
    r_max: int
    fmt: str
    output: Path | None
    trace: bool
    force_p3: bool
    timings: bool
    max_terms: int = CONST.MAX_TERMS

    def __post_init__(self):
        if self.l_max < 1 or self.s_max < 0 or self.extent < 0 or self.r_max < 1:
            raise ConfigError("grid bounds must satisfy lmax >= 1, smax >= 0, extent >= 0, rmax >= 1")
        if self.command == "verify-wz" and self.s_max + self.extent < 1:
            raise ConfigError("verify-wz grid is empty: need smax + nextent >= 1 so that some n >= k >= 1")
        if self.max_terms < 1:
            raise ConfigError("--max-terms must be positive")
        bad = [p for p in self.primes if not is_odd_prime(p)]
        if bad:
            raise ConfigError(f"prime list contains non odd primes: {bad}")


def _timed(fn: Callable[[], ReportRecord]) -> ReportRecord:
    start = time.perf_counter()
    record = fn()
    record.elapsed_ms = (time.perf_counter() - start) * 1000
    return record


def _identity_record(kind: str, report: IdentityReport) -> ReportRecord:
    if not report.applicable:
        return ReportRecord(
            kind=kind,
            params={"theorem": report.theorem.value} | report.params.as_dict(),
            status=RecordStatus.NOT_APPLICABLE,
            asserted=False,
            evidence="THEOREM",
            detail="telescoping multiplier has a pole",
        )
    detail = ", ".join(f"{name}={ok}" for name, ok in report.checks.items())
    if report.trace is not None:
        detail = "; ".join(filter(None, [detail, "trace=" + " ".join(map(str, report.trace))]))
    return ReportRecord(
        kind=kind,
        params={"theorem": report.theorem.value} | report.params.as_dict(),
        status=RecordStatus.PASS if report.passed else RecordStatus.FAIL,
        evidence="THEOREM",
        values={"lhs": report.lhs, "rhs": report.rhs},
        detail=detail,
    )


def cmd_verify_identity(config: RunConfig, theorems: list[Theorem], replay: bool) -> list[ReportRecord]:
    records = []
    grid = identity_grid(config.l_max, config.s_max, config.extent)
    logger.info(f"[IDENTITY] {len(grid)} parameter points for {[t.name for t in theorems]}")
    for theorem in theorems:
        for params in grid:
            records.append(
                _timed(lambda: _identity_record("identity", verify_identity(theorem, params, trace=config.trace)))
            )
            if replay:
                records.append(
                    _timed(lambda: _identity_record("replay", replay_telescoping_proof(theorem, params)))
                )
    return records


def cmd_verify_wz(
    config: RunConfig,
    ids: list[CertificateId],
    *,
    symbolic: bool,
    grid: bool,
    ratios: bool,
    samples: int,
    seed: int,
    mutate_g: bool,
) -> list[ReportRecord]:
    records = []
    bounds = GridBounds(config.l_max, config.s_max, config.extent)
    for id in ids:
        target = mutated("wz-scale-g") if mutate_g and id is CertificateId.WZ_PAIR else id
        if symbolic:

            def symbolic_record() -> ReportRecord:
                residual = symbolic_residual(id)
                verdict = "ZERO polynomial" if residual.is_zero() else residual.render()
                return ReportRecord(
                    kind="wz-symbolic",
                    params={"certificate": id.value},
                    status=RecordStatus.PASS if residual.is_zero() else RecordStatus.FAIL,
                    evidence="LEMMA",
                    detail=f"symbolic identity: {verdict}\n{render_certificate(id)}",
                )

            records.append(_timed(symbolic_record))
        if grid:
            for pt in bounds.points():
                ok = check_recurrence_pointwise(target, pt)
                records.append(
                    ReportRecord(
                        kind="wz-pointwise",
                        params={"certificate": id.value, "l": pt.l, "s": pt.s, "n": pt.n, "k": pt.k},
                        status=RecordStatus.PASS if ok else RecordStatus.FAIL,
                        evidence="LEMMA",
                    )
                )
        if ratios:

            def ratio_record() -> ReportRecord:
                result = sample_ratio_consistency(id, bounds, samples, seed)
                return ReportRecord(
                    kind="wz-ratios",
                    params={"certificate": id.value, "samples": samples, "seed": seed},
                    status=RecordStatus.PASS if result.ok else RecordStatus.FAIL,
                    evidence="LEMMA",
                    detail=f"passed={result.passed} failed={result.failed} skipped={result.skipped}",
                )

            records.append(_timed(ratio_record))
    return records


def _congruence_specs(
    config: RunConfig,
    families: list[SumFamily],
    weights: list[WeightKind],
    ranges: list[SummationRange],
) -> Iterator[tuple[dict[str, object], CongruenceSpec | str]]:
    """Yields (params, spec) for runnable specs and (params, reason) for skipped ones."""
    for family in families:
        for weight in weights:
            if (family, weight) in ((SumFamily.B, WeightKind.GUO_C), (SumFamily.C, WeightKind.GUO_B)):
                continue
            for range_ in ranges:
                if not has_claims(family, weight, range_):
                    continue
                for p in config.primes:
                    for r in range(1, config.r_max + 1):
                        params = {"family": family.value, "weight": weight.value, "p": p, "r": r, "range": range_.value}
                        try:
                            yield params, CongruenceSpec(
                                family, weight, p, r, range_, force_p3=config.force_p3, max_terms=config.max_terms
                            )
                        except UnsupportedSpec as e:
                            yield params, str(e)


def _report_only_detail(report: CongruenceReport) -> str:
    if report.asserted:
        return ""
    verdict = "holds" if report.passed else "FAILS"
    return f"{verdict} at claimed strength; reported, not asserted (known only for p >= 5)"


def cmd_verify_congruences(
    config: RunConfig,
    families: list[SumFamily],
    weights: list[WeightKind],
    ranges: list[SummationRange],
    include_sum: bool,
) -> list[ReportRecord]:
    records = []
    for params, spec in _congruence_specs(config, families, weights, ranges):
        if isinstance(spec, str):
            logger.warning(f"[CONGRUENCE] skipping {params}: {spec}")
            records.append(
                ReportRecord(kind="congruence", params=params | {"claim": ""}, status=RecordStatus.SKIP, asserted=False, detail=spec)
            )
            continue
        for claim in claims_for(spec):

            def congruence_record() -> ReportRecord:
                report = check_congruence(spec, claim)
                if report.passed:
                    status = RecordStatus.PASS
                else:
                    status = RecordStatus.FAIL if report.asserted else RecordStatus.REPORT_ONLY
                values = {
                    "expected": report.expected,
                    "modulus": f"{report.modulus.p}^{report.modulus.e}",
                    "residue": report.residue,
                }
                if include_sum:
                    values["sum"] = report.exact_sum
                return ReportRecord(
                    kind="congruence",
                    params=params | {"claim": claim.name},
                    status=status,
                    asserted=report.asserted,
                    evidence=report.status.value,
                    values=values,
                    detail=_report_only_detail(report),
                )

            records.append(_timed(congruence_record))
    return records


def _csv_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _int_list(value: str) -> tuple[int, ...]:
    try:
        return tuple(int(item) for item in _csv_list(value))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wz-verify",
        description="Exact verification of WZ certificates, telescoping identities and supercongruences.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=ReportHelper.FORMATS, default=CONST.DEFAULT_FORMAT, dest="fmt")
    common.add_argument("--output", type=Path, default=None, help=f"Report path (default: ${CONST.REPORT_DIR_ENV}/<command>.<format> or stdout).")
    common.add_argument("--no-timings", action="store_true", help="Omit elapsed_ms for byte-identical reports.")
    common.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    identity = sub.add_parser("verify-identity", parents=[common], help="Check both telescoping theorems over a grid.")
    identity.add_argument("--theorem", type=int, choices=[1, 2], action="append", help="Theorem to check (repeatable; default both).")
    identity.add_argument("--lmax", type=int, default=CONST.IDENTITY_L_MAX)
    identity.add_argument("--smax", type=int, default=CONST.IDENTITY_S_MAX)
    identity.add_argument("--mextent", type=int, default=CONST.IDENTITY_M_EXTENT, help="M ranges over [s, s + mextent].")
    identity.add_argument("--replay", action="store_true", help="Also replay the telescoping proofs.")
    identity.add_argument("--trace", action="store_true", help="Record every summand.")

    wz = sub.add_parser("verify-wz", parents=[common], help="Check the certificate recurrences.")
    wz.add_argument("--certificate", choices=["wz", "zeilberger", "both"], default="both")
    wz.add_argument("--symbolic", action="store_true")
    wz.add_argument("--grid", action="store_true")
    wz.add_argument("--ratios", action="store_true")
    wz.add_argument("--lmax", type=int, default=CONST.WZ_L_MAX)
    wz.add_argument("--smax", type=int, default=CONST.WZ_S_MAX)
    wz.add_argument("--nextent", type=int, default=CONST.WZ_N_EXTENT, help="n ranges over [s, s + nextent].")
    wz.add_argument("--samples", type=int, default=CONST.RATIO_SAMPLES)
    wz.add_argument("--seed", type=int, default=CONST.RATIO_SEED)
    wz.add_argument("--mutate-g", action="store_true", help=argparse.SUPPRESS)

    congruences = sub.add_parser("verify-congruences", parents=[common], help="Check the supercongruences at small primes.")
    congruences.add_argument("--primes", type=_int_list, default=CONST.PRIMES)
    congruences.add_argument("--rmax", type=int, default=CONST.R_MAX)
    congruences.add_argument("--family", choices=[f.value for f in SumFamily], action="append")
    congruences.add_argument("--weight", choices=[w.value for w in WeightKind], action="append")
    congruences.add_argument("--range", choices=[r.value for r in SummationRange], action="append", dest="ranges")
    congruences.add_argument("--force-p3", action="store_true", help="Report family C linear/cube sums at p = 3.")
    congruences.add_argument("--include-sum", action="store_true", help="Include the exact sum in each record.")
    congruences.add_argument("--max-terms", type=int, default=CONST.MAX_TERMS, help="Largest p^r admitted.")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    extent = {"verify-identity": "mextent", "verify-wz": "nextent"}.get(args.command)
    return RunConfig(
        command=args.command,
        l_max=getattr(args, "lmax", 1),
        s_max=getattr(args, "smax", 0),
        extent=getattr(args, extent, 0) if extent else 0,
        primes=tuple(getattr(args, "primes", CONST.PRIMES)),
        r_max=getattr(args, "rmax", CONST.R_MAX),
        fmt=args.fmt,
        output=args.output,
        trace=getattr(args, "trace", False),
        force_p3=getattr(args, "force_p3", False),
        timings=not args.no_timings,
        max_terms=getattr(args, "max_terms", CONST.MAX_TERMS),
    )


def _run(args: argparse.Namespace, config: RunConfig) -> list[ReportRecord]:
    if args.command == "verify-identity":
        theorems = [Theorem(t) for t in sorted(set(args.theorem or [1, 2]))]
        return cmd_verify_identity(config, theorems, args.replay)
    if args.command == "verify-wz":
        if args.samples < 1:
            raise ConfigError("--samples must be positive")
        ids = list(CertificateId) if args.certificate == "both" else [CertificateId(args.certificate)]
        run_all = not (args.symbolic or args.grid or args.ratios)
        return cmd_verify_wz(
            config,
            ids,
            symbolic=args.symbolic or run_all,
            grid=args.grid or run_all,
            ratios=args.ratios or run_all,
            samples=args.samples,
            seed=args.seed,
            mutate_g=args.mutate_g,
        )
    families = [SumFamily(f) for f in args.family] if args.family else list(SumFamily)
    weights = [WeightKind(w) for w in args.weight] if args.weight else list(WeightKind)
    ranges = [SummationRange(r) for r in args.ranges] if args.ranges else list(SummationRange)
    if args.family and args.weight and not any(
        (f, w) not in ((SumFamily.B, WeightKind.GUO_C), (SumFamily.C, WeightKind.GUO_B))
        for f in families
        for w in weights
    ):
        raise ConfigError("requested weights do not pair with the requested families")
    return cmd_verify_congruences(config, families, weights, ranges, args.include_sum)


def _output_path(config: RunConfig) -> Path | None:
    if config.output is not None:
        return config.output
    report_dir = os.environ.get(CONST.REPORT_DIR_ENV)
    if report_dir:
        return Path(report_dir) / f"{config.command}.{config.fmt}"
    return None


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return CONST.EXIT_USAGE if e.code else CONST.EXIT_OK
    logging.basicConfig(level=args.log_level, format=CONST.LOG_FORMAT, datefmt=CONST.LOG_DATE_FORMAT)
    try:
        config = _config_from_args(args)
        records = _run(args, config)
        helper = ReportHelper(config.fmt, include_timings=config.timings)
        path = _output_path(config)
        if path is None:
            helper.write(records, sys.stdout)
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("w", encoding="utf-8", newline="") as stream:
                helper.write(records, stream)
            logger.info(f"[REPORT] wrote {len(records)} records to {path}")
    except (ConfigError, OSError) as e:
        logger.error(f"[CONFIG] {type(e).__name__}: {e}")
        return CONST.EXIT_USAGE
    logger.info(f"[SUMMARY] {ReportHelper.summary(records)}")
    return ReportHelper.exit_code(records)


if __name__ == "__main__":
    sys.exit(main())
