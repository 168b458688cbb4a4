import csv
import json

import pytest

from cubic_scan.reports import (
    Mismatch,
    Status,
    VerificationReport,
    format_report,
    reports_to_json,
    write_reports_csv,
)

BIG = 10**40 + 1


@pytest.fixture
def reports() -> list[VerificationReport]:
    return [
        VerificationReport("chan-3", 200, Status.VERIFIED, elapsed=0.25),
        VerificationReport("bad-case", 50, Status.MISMATCH, Mismatch(7, BIG, BIG - 1), elapsed=0.5),
        VerificationReport("broken", 0, Status.ERROR, notes="ValueError: boom"),
    ]


def test_report_validation():
    """Status and mismatch must agree."""
    with pytest.raises(ValueError, match="cannot carry a mismatch"):
        VerificationReport("x", 10, Status.VERIFIED, Mismatch(0, 1, 2))
    with pytest.raises(ValueError, match="needs its first mismatch"):
        VerificationReport("x", 10, Status.MISMATCH)


def test_to_dict(reports):
    """Test VerificationReport.to_dict method."""
    verified, mismatch, error = (r.to_dict() for r in reports)
    assert verified == {
        "id": "chan-3",
        "terms_checked": 200,
        "status": "verified",
        "first_mismatch": None,
        "notes": None,
        "elapsed_ms": 250.0,
    }
    # integers past 64 bits survive as decimal strings
    assert mismatch["first_mismatch"] == {"index": 7, "lhs": str(BIG), "rhs": str(BIG - 1)}
    assert error["status"] == "error"
    assert [r.ok for r in reports] == [True, False, False]


def test_format_report(reports):
    """Test format_report function."""
    verified, mismatch, error = (format_report(r) for r in reports)
    assert verified.startswith("chan-3")
    assert "VERIFIED" in verified
    assert "terms=200" in verified
    assert f"first mismatch at 7: {BIG} != {BIG - 1}" in mismatch
    assert error.endswith("[ValueError: boom]")


def test_reports_to_json(reports):
    """Test reports_to_json function."""
    payload = json.loads(reports_to_json(reports))
    assert [r["status"] for r in payload] == ["verified", "mismatch", "error"]


def test_write_reports_csv(tmp_path, reports):
    """Test write_reports_csv function."""
    path = tmp_path / "reports.csv"
    write_reports_csv(str(path), reports)
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    assert [row["id"] for row in rows] == ["chan-3", "bad-case", "broken"]
    assert rows[0]["mismatch_index"] == ""
    assert (rows[1]["mismatch_index"], rows[1]["mismatch_lhs"]) == ("7", str(BIG))
    assert rows[2]["notes"] == "ValueError: boom"
