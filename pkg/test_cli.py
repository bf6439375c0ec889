"""
Hyperbolic Sobolev Lab - Command Line Tests
Exit codes, error documents, output formats and golden-file stability
"""

import io
import json
import subprocess
import sys
from pathlib import Path

import pandas as pd
import pytest

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent))

import app.cli as cli
from app.config import settings
from app.errors import NonzeroResidual
from app.schemas import RunConfig, Subcommand, Suite

ROOT = Path(__file__).parent


def print_section(title: str) -> None:
    print("\n" + "=" * 70)
    print(f"  {title}")
    print("=" * 70)


def run_cli(*args: str, cwd: Path = ROOT) -> subprocess.CompletedProcess:
    """Run the CLI in a subprocess, the way a user would"""
    return subprocess.run(
        [sys.executable, "-m", "app.cli", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
        timeout=300,
    )


def run_inline(argv, capsys):
    capsys.readouterr()  # drop the test's own progress prints
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


# ============================================================================
# EXAMPLE INVOCATIONS
# ============================================================================

def test_coeffs_symbolic_json(capsys):
    print("🧪 Testing coeffs --k 3 --symbolic...")
    code, out = run_inline(cli.GOLDEN_CASES["coeffs_k3_symbolic.json"], capsys)
    assert code == 0
    doc = json.loads(out)
    by_name = {c["name"]: c for c in doc["coefficients"]}
    assert by_name["a_{32}"]["poly"] == "[8, 3/2, -3/4]"
    assert by_name["a_{32}"]["pretty"] == "-3/4*n^2 + 3/2*n + 8"
    assert doc["b_k"]["poly"].startswith("[0, ")


def test_verify_el_text():
    print("🧪 Testing verify --k 1 --suite el...")
    result = run_cli("verify", "--k", "1", "--suite", "el", "--output", "text")
    assert result.returncode == 0, result.stdout
    assert "residual: 0 (exact)" in result.stdout


def test_verify_el_json(capsys):
    code, out = run_inline(cli.GOLDEN_CASES["verify_k1_el.json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert all(check["residual"] == "0 (exact)" for check in doc["checks"])


def test_quotient_csv(capsys):
    print("🧪 Testing quotient CSV...")
    code, out = run_inline(cli.GOLDEN_CASES["quotient_n5_k1.csv"], capsys)
    assert code == 0
    frame = pd.read_csv(io.StringIO(out))
    assert len(frame) == 4
    assert list(frame["beta"]) == [0.5, 0.9, 0.99, 0.999]
    assert frame["quotient"].is_monotonic_increasing
    assert frame["quotient"].is_unique
    assert (frame["gap"] > 0).all()
    print(f"   ✓ quotient column: {list(frame['quotient'])}")


# ============================================================================
# GOLDEN FILES
# ============================================================================

@pytest.mark.parametrize("filename", sorted(cli.GOLDEN_CASES))
def test_byte_stable_output(filename, tmp_path):
    argv = cli.GOLDEN_CASES[filename]
    first = run_cli(*argv)
    second = run_cli(*argv)
    assert first.returncode == 0
    assert first.stdout == second.stdout

    written = tmp_path / filename
    written.write_text(first.stdout, encoding="utf-8", newline="\n")
    assert written.read_bytes() == second.stdout.encode("utf-8")


@pytest.mark.parametrize("filename", sorted(name for name in cli.GOLDEN_CASES if name.endswith(".json")))
def test_exact_documents_match_golden(filename, capsys):
    golden = ROOT / settings.golden_dir / filename
    assert golden.is_file(), f"missing golden document {golden}"
    code, out = run_inline(cli.GOLDEN_CASES[filename], capsys)
    assert code == 0
    assert out == golden.read_text(encoding="utf-8")


def test_quotient_curve_matches_closed_form_golden(capsys):
    """The golden curve is the closed form for n=5, k=1; quadrature must land on it"""
    golden = ROOT / settings.golden_dir / "quotient_n5_k1.csv"
    assert golden.is_file(), f"missing golden document {golden}"
    expected = pd.read_csv(golden)
    code, out = run_inline(cli.GOLDEN_CASES["quotient_n5_k1.csv"], capsys)
    assert code == 0
    actual = pd.read_csv(io.StringIO(out))

    assert list(actual.columns) == ["beta", "integral_uq", "quotient", "sharp_value", "gap", "err_estimate"]
    assert list(actual.columns) == list(expected.columns)
    assert list(actual["beta"]) == list(expected["beta"])
    for column in ["integral_uq", "quotient", "sharp_value"]:
        assert list(actual[column]) == pytest.approx(list(expected[column]), rel=1e-9)
    for got, want in zip(actual["gap"], expected["gap"]):
        assert got == pytest.approx(want, rel=1e-6, abs=1e-12)
    assert (actual["err_estimate"] <= 10 * settings.rel_tol * actual["quotient"]).all()
    print(f"   ✓ gap column: {list(actual['gap'])}")


# ============================================================================
# ERRORS AND EXIT CODES
# ============================================================================

def test_domain_error(capsys):
    code, out = run_inline(["constants", "--n", "4", "--k", "2"], capsys)
    assert code == 1
    doc = json.loads(out)
    assert doc["error"] == "DOMAIN_ERROR"
    assert "timestamp" not in doc


def test_usage_errors(capsys):
    code, out = run_inline(["constants", "--k", "1"], capsys)
    assert code == 1
    assert json.loads(out)["error"] == "USAGE_ERROR"

    code, out = run_inline(["quotient", "--n", "5", "--k", "1", "--beta-list", "0.9,0.5"], capsys)
    assert code == 1
    assert json.loads(out)["error"] == "USAGE_ERROR"

    code, out = run_inline(["nonsense", "--k", "1"], capsys)
    assert code == 1
    assert json.loads(out)["error"] == "USAGE_ERROR"


def test_thm33_probe_needs_large_dimension(capsys):
    code, out = run_inline(["thm33-probe", "--n", "6", "--k", "2", "--beta", "0.5"], capsys)
    assert code == 1
    assert json.loads(out)["error"] == "DIMENSION_TOO_SMALL"


def test_library_domain_errors_keep_their_code(monkeypatch):
    real = cli.conformal_law_residual

    def outside_support(n, k, bump, sample_points, jet_order):
        return real(n, k, bump, [3.0], jet_order)

    monkeypatch.setattr(cli, "conformal_law_residual", outside_support)
    code, document = cli.run(RunConfig(subcommand=Subcommand.CONFORMAL, n=5, k=1))
    assert code == 1
    assert json.loads(document)["error"] == "DOMAIN_ERROR"


def test_bare_value_error_maps_to_domain_error(monkeypatch):
    def bad_input(*args, **kwargs):
        raise ValueError("betas must be strictly increasing")

    monkeypatch.setattr(cli, "quotient_curve", bad_input)
    code, document = cli.run(RunConfig(subcommand=Subcommand.QUOTIENT, n=5, k=1, beta=0.5))
    assert code == 1
    doc = json.loads(document)
    assert doc["error"] == "DOMAIN_ERROR"
    assert doc["message"] == "betas must be strictly increasing"


def test_verification_failure_exit_code(monkeypatch):
    def broken(k):
        raise NonzeroResidual("forced", {"k": k, "monomial": "c^2"})

    monkeypatch.setattr(cli, "el_residual", broken)
    code, document = cli.run(RunConfig(subcommand=Subcommand.VERIFY, k=1, suite=Suite.EL))
    assert code == 2
    doc = json.loads(document)
    assert doc["passed"] is False
    assert doc["checks"][0]["residual"] == "c^2"


# ============================================================================
# OTHER SUBCOMMANDS
# ============================================================================

def test_constants_document(capsys):
    code, out = run_inline(["constants", "--n", "4", "--k", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["q"] == "4"
    assert doc["b_k"] == "2"
    assert doc["omega_n"] == pytest.approx(26.3189450696716, rel=1e-14)


def test_coeffs_at_dimension(capsys):
    code, out = run_inline(["coeffs", "--k", "2", "--n", "5", "--output", "text"], capsys)
    assert code == 0
    assert "a_{20} = 105/16" in out
    assert "a_{21} = -11/2" in out


def test_verify_recursion_and_constants(capsys):
    code, out = run_inline(["verify", "--k", "3", "--suite", "recursion"], capsys)
    assert code == 0
    code, out = run_inline(["verify", "--k", "2", "--suite", "constants", "--n", "9"], capsys)
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_conformal_subcommand(capsys):
    code, out = run_inline(["conformal", "--n", "5", "--k", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["max_residual"] <= 1e-6
    assert doc["jet_order"] == 6


def test_conformal_seeded_samples_are_reproducible(capsys):
    _, first = run_inline(["conformal", "--n", "5", "--k", "1", "--seed", "3"], capsys)
    _, second = run_inline(["conformal", "--n", "5", "--k", "1", "--seed", "3"], capsys)
    assert first == second


def test_euclid_quotient_subcommand(capsys):
    code, out = run_inline(["euclid-quotient", "--n", "5", "--k", "1", "--beta", "0.9"], capsys)
    assert code == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 1
    assert rows[0]["quotient"] > 0


def test_thm33_probe_reports_divergence(capsys):
    code, out = run_inline(
        ["thm33-probe", "--n", "7", "--k", "1", "--beta", "0.5", "--cutoff", "20", "--output", "text"], capsys
    )
    assert code == 0
    assert "L2 form: divergent" in out


def main():
    """Run the subprocess-based CLI checks"""
    print_section("CLI TESTS")
    result = run_cli("verify", "--k", "1", "--suite", "el", "--output", "text")
    print(result.stdout)
    ok = result.returncode == 0 and "residual: 0 (exact)" in result.stdout
    for filename, argv in cli.GOLDEN_CASES.items():
        same = run_cli(*argv).stdout == run_cli(*argv).stdout
        print(f"   {'✓' if same else '✗'} {filename} byte-stable")
        ok = ok and same
    print_section("CLI TESTS PASSED" if ok else "CLI TESTS FAILED")
    return ok


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
