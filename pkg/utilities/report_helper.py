import csv
import io
import json
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import TextIO

import allure


class RecordStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIP = "SKIP"
    REPORT_ONLY = "REPORT-ONLY"
    NOT_APPLICABLE = "NOT-APPLICABLE"


VALUE_FIELDS: tuple[str, ...] = ("lhs", "rhs", "sum", "expected", "modulus", "residue")
CSV_FIELDS: tuple[str, ...] = (
    "kind",
    "params",
    *VALUE_FIELDS,
    "status",
    "evidence",
    "asserted",
    "detail",
    "elapsed_ms",
)


@dataclass
class ReportRecord:
    """One verified (or skipped) point of a suite.

    Attributes:
        kind (str): Suite name, e.g. ``identity`` or ``congruence``.
        params (dict): Parameter tuple of the point, in a fixed key order.
        status (RecordStatus): Outcome of the check.
        asserted (bool): Whether a FAIL of this record fails the run.
        evidence (str): What the checked statement is, e.g. ``CONJECTURE``.
        values (dict): Any of lhs, rhs, sum, expected, modulus, residue.
    """

    kind: str
    params: dict[str, object]
    status: RecordStatus
    asserted: bool = True
    evidence: str = ""
    values: dict[str, Fraction | int | str] = field(default_factory=dict)
    detail: str = ""
    elapsed_ms: float | None = None

    def sort_key(self) -> tuple:
        return self.kind, tuple(
            (name, (0, value, "") if isinstance(value, int) else (1, 0, str(value)))
            for name, value in self.params.items()
        )

    @property
    def is_asserted_failure(self) -> bool:
        return self.asserted and self.status is RecordStatus.FAIL


def _json_value(value: Fraction | int | str) -> object:
    if isinstance(value, Fraction):
        return {"num": str(value.numerator), "den": str(value.denominator)}
    if isinstance(value, int):
        return str(value)
    return value


def _flat_value(value: Fraction | int | str) -> str:
    return str(value)


class ReportHelper:
    """Serializes verification records as json, csv or a text summary table."""

    FORMATS: tuple[str, ...] = ("json", "csv", "text")

    def __init__(self, fmt: str = "text", include_timings: bool = True):
        if fmt not in self.FORMATS:
            raise ValueError(f"unknown report format {fmt!r}, expected one of {self.FORMATS}")
        self.fmt = fmt
        self.include_timings = include_timings

    @staticmethod
    def sorted_records(records: Iterable[ReportRecord]) -> list[ReportRecord]:
        return sorted(records, key=ReportRecord.sort_key)

    @staticmethod
    def exit_code(records: Iterable[ReportRecord]) -> int:
        return 1 if any(r.is_asserted_failure for r in records) else 0

    @staticmethod
    def summary(records: Sequence[ReportRecord]) -> str:
        counts = Counter(r.status.value for r in records)
        parts = ", ".join(f"{counts[s.value]} {s.value}" for s in RecordStatus if counts[s.value])
        failed = sum(r.is_asserted_failure for r in records)
        return f"{len(records)} records: {parts or 'none'}; asserted failures: {failed}"

    def _as_dict(self, record: ReportRecord) -> dict[str, object]:
        data: dict[str, object] = {"kind": record.kind, "params": record.params}
        for name in VALUE_FIELDS:
            if name in record.values:
                data[name] = _json_value(record.values[name])
        data.update(
            status=record.status.value,
            evidence=record.evidence,
            asserted=record.asserted,
            detail=record.detail,
        )
        if self.include_timings:
            data["elapsed_ms"] = record.elapsed_ms
        return data

    def render(self, records: Iterable[ReportRecord]) -> str:
        records = self.sorted_records(records)
        if self.fmt == "json":
            return json.dumps([self._as_dict(r) for r in records], indent=2) + "\n"
        if self.fmt == "csv":
            buffer = io.StringIO()
            fields = [f for f in CSV_FIELDS if self.include_timings or f != "elapsed_ms"]
            writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\n")
            writer.writeheader()
            for r in records:
                row = {
                    "kind": r.kind,
                    "params": ";".join(f"{k}={v}" for k, v in r.params.items()),
                    "status": r.status.value,
                    "evidence": r.evidence,
                    "asserted": r.asserted,
                    "detail": r.detail,
                    **{k: _flat_value(v) for k, v in r.values.items() if k in VALUE_FIELDS},
                }
                if self.include_timings:
                    row["elapsed_ms"] = "" if r.elapsed_ms is None else f"{r.elapsed_ms:.3f}"
                writer.writerow(row)
            return buffer.getvalue()
        return self._render_text(records)

    @staticmethod
    def _render_text(records: Sequence[ReportRecord]) -> str:
        lines = [f"{'KIND':<18} {'STATUS':<15} {'EVIDENCE':<11} PARAMS / DETAIL"]
        for r in records:
            params = " ".join(f"{k}={v}" for k, v in r.params.items())
            values = " ".join(f"{k}={v}" for k, v in r.values.items())
            line = f"{r.kind:<18} {r.status.value:<15} {r.evidence:<11} {params}"
            if values:
                line += f" | {values}"
            if r.detail:
                line += f" | {r.detail}"
            lines.append(line)
        lines.append(ReportHelper.summary(records))
        return "\n".join(lines) + "\n"

    def write(self, records: Iterable[ReportRecord], stream: TextIO) -> None:
        stream.write(self.render(records))

    @staticmethod
    def attach(records: Iterable[ReportRecord], name: str) -> None:
        """Attaches the records as JSON to the current allure test."""
        allure.attach(
            body=ReportHelper("json", include_timings=False).render(records),
            name=name,
            attachment_type=allure.attachment_type.JSON,
        )
