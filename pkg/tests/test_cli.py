import json
import sys

import pytest
from loguru import logger

from cubic_scan.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from cubic_scan.identities import registry

CUBIC = "1/(E(1,1)*E(2,2))"


@pytest.fixture(autouse=True)
def restore_logger():
    yield
    # main() binds the sink to the captured stderr of the test
    logger.remove()
    logger.add(sys.stderr)


def test_coeff(capsys):
    """Test the coeff command."""
    assert main(["coeff", "a", "8"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "54"
    assert main(["coeff", "p", "24"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1575"
    assert main(["coeff", "p", "24", "--modulus", "5"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "0"


def test_coeff_rejects_bad_input(capsys):
    """Test the coeff command with a negative index or a tiny modulus."""
    assert main(["coeff", "p", "-1"]) == EXIT_USAGE
    assert main(["coeff", "a", "5", "--modulus", "1"]) == EXIT_USAGE
    assert capsys.readouterr().out == ""


def test_verify_json(capsys):
    """Test the verify command with structured output."""
    code = main(["verify", "chan-3", "ramanujan-5", "--terms", "50", "--json", "--jobs", "1"])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert [r["id"] for r in payload] == ["chan-3", "ramanujan-5"]
    assert all(r["status"] == "verified" and r["terms_checked"] == 50 for r in payload)
    assert all(r["first_mismatch"] is None for r in payload)


def test_verify_text(capsys):
    """Test the verify command with text output."""
    assert main(["verify", "congruence-a3", "--terms", "20", "--jobs", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("congruence-a3")
    assert "VERIFIED" in out


def test_verify_usage_errors(capsys):
    """Unknown ids, or ids together with --all, are usage errors."""
    assert main(["verify", "no-such-id"]) == EXIT_USAGE
    assert "unknown identity" in capsys.readouterr().err
    assert main(["verify"]) == EXIT_USAGE
    assert main(["verify", "chan-3", "--all"]) == EXIT_USAGE
    assert main(["verify", "chan-3", "--terms", "0"]) == EXIT_USAGE
    assert main(["verify", "chan-3", "--jobs", "0", "--terms", "5"]) == EXIT_USAGE
    assert "expected a nonzero integer" in capsys.readouterr().err


def test_series(capsys):
    """Test the series command."""
    assert main(["series", CUBIC, "--terms", "9"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 9
    assert lines[0] == "0\t1"
    assert lines[-1] == "8\t54"

    assert main(["series", CUBIC, "--terms", "9", "--modulus", "5"]) == EXIT_OK
    assert capsys.readouterr().out.strip().splitlines()[-1] == "8\t4"


def test_series_errors(capsys):
    """Syntax errors are usage errors; evaluation errors are failures."""
    assert main(["series", "E(1,1"]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "syntax error" in err
    assert "offset 6" in err
    assert main(["series", "1/q", "--terms", "5"]) == EXIT_FAILED
    assert "cannot evaluate 'q'" in capsys.readouterr().err
    assert main(["series", "(" * 2000 + "1" + ")" * 2000]) == EXIT_USAGE
    assert "nested deeper" in capsys.readouterr().err


def test_dissect_json(capsys):
    """Test the dissect command on the cubic partition generating function."""
    assert main(["dissect", CUBIC, "3", "2", "--terms", "3", "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["expression"] == CUBIC
    assert payload["terms"] == 3
    assert payload["modulus"] is None
    assert payload["coefficients"] == ["3", "12", "54"]
    assert all(int(c) % 3 == 0 for c in payload["coefficients"])


def test_dissect_rejects_bad_residue():
    """Test the dissect command with r outside 0 <= r < m."""
    assert main(["dissect", CUBIC, "3", "3"]) == EXIT_USAGE


def test_list(capsys):
    """Test the list command."""
    assert main(["list"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == len(registry())
    first = lines[0].split("\t")
    assert first[:2] == ["ramanujan-5", "series"]
    assert all(len(line.split("\t")) == 3 for line in lines)


def test_main_without_command():
    """Test main with no subcommand."""
    assert main([]) == EXIT_USAGE
