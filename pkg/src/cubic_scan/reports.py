import csv
import json
from dataclasses import dataclass
from enum import StrEnum
from typing import Any


class Status(StrEnum):
    VERIFIED = "verified"
    MISMATCH = "mismatch"
    ERROR = "error"


@dataclass(frozen=True, slots=True)
class Mismatch:
    index: int  # coefficient index, or monomial position for symbolic checks
    lhs: int | str
    rhs: int | str


@dataclass(frozen=True, slots=True)
class VerificationReport:
    id: str  # identity case id
    terms_checked: int  # coefficients (or monomials) compared
    status: Status
    first_mismatch: Mismatch | None = None
    elapsed: float = 0.0  # seconds
    notes: str | None = None

    def __post_init__(self) -> None:
        if self.status is Status.VERIFIED and self.first_mismatch is not None:
            raise ValueError(f"{self.id}: a verified report cannot carry a mismatch")
        if self.status is Status.MISMATCH and self.first_mismatch is None:
            raise ValueError(f"{self.id}: a mismatch report needs its first mismatch")

    @property
    def ok(self) -> bool:
        return self.status is Status.VERIFIED

    def to_dict(self) -> dict[str, Any]:
        """Structured form; big integers become decimal strings."""
        mismatch = None
        if self.first_mismatch is not None:
            mismatch = {
                "index": self.first_mismatch.index,
                "lhs": str(self.first_mismatch.lhs),
                "rhs": str(self.first_mismatch.rhs),
            }
        return {
            "id": self.id,
            "terms_checked": self.terms_checked,
            "status": self.status.value,
            "first_mismatch": mismatch,
            "notes": self.notes,
            "elapsed_ms": round(self.elapsed * 1000, 3),
        }


def format_report(report: VerificationReport) -> str:
    """One line of text: id, status, terms and the first mismatch if any."""
    line = f"{report.id:<20} {report.status.value.upper():<9} terms={report.terms_checked:<6} {report.elapsed:8.3f}s"
    if report.first_mismatch is not None:
        m = report.first_mismatch
        line += f"  first mismatch at {m.index}: {m.lhs} != {m.rhs}"
    if report.notes:
        line += f"  [{report.notes}]"
    return line


def reports_to_json(reports: list[VerificationReport]) -> str:
    """Reports as an indented JSON array, in the order given."""
    return json.dumps([r.to_dict() for r in reports], indent=2)


def write_reports_csv(output_path: str, reports: list[VerificationReport]) -> None:
    """
    Save reports to a CSV file.

    Args:
        output_path: Path to save the CSV file
        reports: Reports in registry order
    """
    fieldnames = [
        "id",
        "terms_checked",
        "status",
        "mismatch_index",
        "mismatch_lhs",
        "mismatch_rhs",
        "elapsed_ms",
        "notes",
    ]
    with open(output_path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames)
        writer.writeheader()
        for report in reports:
            row = report.to_dict()
            mismatch = row.pop("first_mismatch") or {}
            row["mismatch_index"] = mismatch.get("index", "")
            row["mismatch_lhs"] = mismatch.get("lhs", "")
            row["mismatch_rhs"] = mismatch.get("rhs", "")
            writer.writerow(row)
