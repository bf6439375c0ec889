"""
Hyperbolic Sobolev Lab - Command Line Interface
Coefficient tables, constants, verification suites, quotient curves and
conformal-law checks, emitted as JSON, CSV or text on stdout
"""

import argparse
import io
import json
import logging
import math
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import ValidationError

from app.config import configure_logging, settings
from app.constants import consistency_residual, constants_record, gamma_identity_residual
from app.errors import (
    DomainError,
    LabError,
    NonzeroResidual,
    SurplusNonzero,
    UsageError,
    VerificationFailure,
)
from app.numeric_lab import (
    conformal_law_residual,
    euclidean_ball_quotient,
    hyperbolic_quotient,
    quotient_curve,
    thm33_report,
)
from app.operator_core import (
    b_constant,
    check_recursion,
    coefficient_name,
    instantiate,
    standard_operator,
    to_json,
    verify_a0_identity,
)
from app.radial_symbolic import el_residual, el_solve, euclid_el_residual
from app.schemas import (
    BumpSpec,
    ErrorDetail,
    ErrorResponse,
    ExtremalParams,
    OutputFormat,
    QuotientReport,
    RunConfig,
    Subcommand,
    Suite,
    VerificationCheck,
    VerificationReport,
)

logger = logging.getLogger(__name__)

EXACT_ZERO = "0 (exact)"
CONSTANTS_TOL = 1e-12
CONFORMAL_TOL = 1e-6

# Golden documents kept under settings.golden_dir
GOLDEN_CASES: Dict[str, List[str]] = {
    "coeffs_k3_symbolic.json": ["coeffs", "--k", "3", "--symbolic", "--output", "json"],
    "verify_k1_el.json": ["verify", "--k", "1", "--suite", "el"],
    "quotient_n5_k1.csv": [
        "quotient", "--n", "5", "--k", "1", "--beta-list", "0.5,0.9,0.99,0.999", "--output", "csv",
    ],
}


# ============================================================================
# ARGUMENT PARSING
# ============================================================================

class LabArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting"""

    def error(self, message: str):
        raise UsageError(message)


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def build_parser() -> LabArgumentParser:
    common = LabArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="Dimension of hyperbolic space")
    common.add_argument("--k", type=int, required=True, help="Operator order")
    common.add_argument("--beta", type=float)
    common.add_argument("--beta-list", type=_float_list, dest="beta_list")
    common.add_argument("--rel-tol", type=float, dest="rel_tol", default=settings.rel_tol)
    common.add_argument("--cutoff", type=float, dest="cutoff_R", default=settings.cutoff_radius)
    common.add_argument("--jet-order", type=int, dest="jet_order")
    common.add_argument("--output", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--suite", choices=[s.value for s in Suite], default=Suite.ALL.value)
    common.add_argument("--symbolic", action="store_true")
    common.add_argument("--kind", choices=["bump", "constant", "extremal"], default="bump")
    common.add_argument("--center", type=float, default=1.0)
    common.add_argument("--width", type=float, default=0.8)
    common.add_argument("--i", type=int, default=0)
    common.add_argument("--tau", type=_float_list)

    parser = LabArgumentParser(prog="hyperbolic-sobolev-lab", description=settings.app_description)
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for sub in Subcommand:
        subparsers.add_parser(sub.value, parents=[common])
    return parser


def _validation_details(exc: ValidationError) -> List[Dict[str, Any]]:
    return [
        {"field": ".".join(str(part) for part in err["loc"]) or None, "message": err["msg"]}
        for err in exc.errors()
    ]


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """
    Parse command-line arguments into a validated RunConfig.

    Raises:
        UsageError: On unknown flags, bad values or missing required flags
    """
    args = build_parser().parse_args(argv)
    try:
        return RunConfig(**vars(args))
    except ValidationError as exc:
        raise UsageError("Invalid arguments", {"errors": _validation_details(exc)}) from exc


# ============================================================================
# RENDERING
# ============================================================================

def _round_floats(value: Any) -> Any:
    """Fixed significant digits for floats; non-finite values become strings"""
    if isinstance(value, float):
        if not math.isfinite(value):
            return str(value)
        return float(f"{value:.{settings.float_digits}g}")
    if isinstance(value, dict):
        return {key: _round_floats(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(item) for item in value]
    return value


def _render_json(document: Dict[str, Any]) -> str:
    return json.dumps(_round_floats(document), indent=2) + "\n"


def _render_csv(rows: List[Dict[str, Any]]) -> str:
    frame = pd.json_normalize(rows)
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format=f"%.{settings.float_digits}g", lineterminator="\n")
    return buffer.getvalue()


def _render_text(lines: List[str]) -> str:
    return "\n".join(lines) + "\n"


def _emit(config: RunConfig, document: Dict[str, Any], rows: List[Dict[str, Any]], lines: List[str]) -> str:
    if config.output == OutputFormat.CSV:
        return _render_csv(rows)
    if config.output == OutputFormat.TEXT:
        return _render_text(lines)
    return _render_json(document)


def error_document(exc: LabError) -> str:
    details = exc.details.get("errors")
    if details is None and exc.details:
        details = [{"field": key, "message": str(value)} for key, value in sorted(exc.details.items())]
    response = ErrorResponse(
        error=exc.code,
        message=exc.message,
        details=[ErrorDetail(**item) for item in details] if details else None,
    )
    return response.model_dump_json(indent=2) + "\n"


# ============================================================================
# SUBCOMMANDS
# ============================================================================

def _cmd_coeffs(config: RunConfig) -> Tuple[int, str]:
    k = config.k
    op = standard_operator(k)
    b = b_constant(k)
    if config.symbolic:
        document = to_json(op)
        document["b_k"] = {"poly": b.serialize(), "pretty": b.pretty()}
        rows = [
            {"m": c["m"], "name": c["name"], "poly": c["poly"], "pretty": c["pretty"]}
            for c in document["coefficients"]
        ]
        lines = [f"{c['name']} = {c['pretty']}" for c in document["coefficients"]]
        lines.append(f"b_{k} = {b.pretty()}")
    else:
        values = instantiate(op, config.n)
        document = {
            "k": k,
            "n": config.n,
            "coefficients": [
                {"m": m, "name": coefficient_name(k, m), "value": str(v)} for m, v in enumerate(values)
            ],
            "b_k": str(b(config.n)),
        }
        rows = document["coefficients"]
        lines = [f"{c['name']} = {c['value']}" for c in rows]
        lines.append(f"b_{k} = {document['b_k']}")
    return 0, _emit(config, document, rows, lines)


def _cmd_constants(config: RunConfig) -> Tuple[int, str]:
    record = constants_record(config.n, config.k).model_dump()
    lines = [f"{key}: {_round_floats(value)}" for key, value in record.items()]
    return 0, _emit(config, record, [record], lines)


def _exact_check(name: str, k: int, check: Callable[[], bool]) -> VerificationCheck:
    try:
        passed = check()
        residual = EXACT_ZERO if passed else "nonzero"
    except (NonzeroResidual, SurplusNonzero) as exc:
        logger.warning("%s failed for k=%d: %s", name, k, exc.message)
        passed, residual = False, exc.details.get("monomial", exc.message)
    return VerificationCheck(name=name, k=k, residual=residual, passed=passed)


def _el_checks(k: int) -> List[VerificationCheck]:
    def solver_matches() -> bool:
        coefficients, b = el_solve(k)
        expected = standard_operator(k).coeffs
        return all(c.to_dimpoly() == e for c, e in zip(coefficients, expected)) and b.to_dimpoly() == b_constant(k)

    return [
        _exact_check("el", k, lambda: el_residual(k).is_zero()),
        _exact_check("el-solve", k, solver_matches),
    ]


def _numeric_check(name: str, k: int, n: int, residual: float, tol: float) -> VerificationCheck:
    return VerificationCheck(
        name=name, k=k, n=n, residual=f"{residual:.3e}", passed=abs(residual) <= tol
    )


def _suite_checks(suite: Suite, config: RunConfig) -> List[VerificationCheck]:
    k = config.k
    n = config.n if config.n is not None else 2 * k + 3
    if suite == Suite.EL:
        return _el_checks(k)
    if suite == Suite.EUCLID_EL:
        return [_exact_check("euclid-el", k, lambda: euclid_el_residual(k).is_zero())]
    if suite == Suite.RECURSION:
        return [
            _exact_check("recursion", k, lambda: check_recursion(k)),
            _exact_check("a0-identity", k, lambda: verify_a0_identity(k)),
        ]
    if suite == Suite.CONSTANTS:
        return [
            _numeric_check("constants", k, n, consistency_residual(n, k), CONSTANTS_TOL),
            _numeric_check("gamma-identity", k, n, gamma_identity_residual(n), CONSTANTS_TOL),
        ]
    if suite == Suite.CONFORMAL:
        report = conformal_law_residual(n, k, _bump(config), _sample_points(config), config.jet_order)
        return [_numeric_check("conformal", k, n, report.max_residual, CONFORMAL_TOL)]
    checks: List[VerificationCheck] = []
    for part in (Suite.EL, Suite.EUCLID_EL, Suite.RECURSION, Suite.CONSTANTS, Suite.CONFORMAL):
        checks.extend(_suite_checks(part, config))
    return checks


def _cmd_verify(config: RunConfig) -> Tuple[int, str]:
    report = VerificationReport(suite=config.suite, k=config.k, checks=_suite_checks(config.suite, config))
    document = report.model_dump(mode="json")
    document["passed"] = report.passed
    rows = [check.model_dump() for check in report.checks]
    lines = [
        f"{check.name} k={check.k}{'' if check.n is None else f' n={check.n}'}: "
        f"residual: {check.residual} [{'PASS' if check.passed else 'FAIL'}]"
        for check in report.checks
    ]
    output = _emit(config, document, rows, lines)
    if not report.passed:
        failed = [check.name for check in report.checks if not check.passed]
        failure = VerificationFailure(f"{len(failed)} check(s) failed", {"checks": failed})
        logger.error("%s: %s %s", failure.code, failure.message, failed)
        return failure.exit_code, output
    return 0, output


def _quotient_row(report: QuotientReport) -> Dict[str, Any]:
    return {
        "beta": report.params.beta,
        "integral_uq": report.integral_uq,
        "quotient": report.quotient,
        "sharp_value": report.sharp_value,
        "gap": report.gap,
        "err_estimate": report.err_estimate,
    }


def _cmd_quotient(config: RunConfig, report: Callable = hyperbolic_quotient) -> Tuple[int, str]:
    reports = quotient_curve(config.n, config.k, config.betas, config.rel_tol, report=report)
    rows = [_quotient_row(r) for r in reports]
    document = {"n": config.n, "k": config.k, "rows": rows}
    lines = [f"n={config.n} k={config.k} sharp={_round_floats(reports[0].sharp_value)}"]
    lines += [
        f"beta={_round_floats(row['beta'])} quotient={_round_floats(row['quotient'])} gap={_round_floats(row['gap'])}"
        for row in rows
    ]
    return 0, _emit(config, document, rows, lines)


def _bump(config: RunConfig) -> BumpSpec:
    beta = config.beta if config.beta is not None else 0.5
    return BumpSpec(kind=config.kind, center=config.center, width=config.width, beta=beta)


def _sample_points(config: RunConfig) -> Optional[np.ndarray]:
    """Seed 0 keeps the default grid; other seeds draw sorted points in its range"""
    if config.seed == 0:
        return None
    bump = _bump(config)
    if bump.kind == "bump":
        lo, hi = bump.center - 0.9 * bump.width, bump.center + 0.9 * bump.width
    else:
        lo, hi = 0.2, 2.0
    rng = np.random.default_rng(config.seed)
    return np.sort(rng.uniform(lo, hi, settings.conformal_samples))


def _cmd_conformal(config: RunConfig) -> Tuple[int, str]:
    report = conformal_law_residual(config.n, config.k, _bump(config), _sample_points(config), config.jet_order)
    document = report.model_dump()
    lines = [f"{key}: {_round_floats(value)}" for key, value in document.items()]
    return 0, _emit(config, document, [document], lines)


def _cmd_thm33(config: RunConfig) -> Tuple[int, str]:
    beta = config.beta if config.beta is not None else 0.5
    params = ExtremalParams(n=config.n, k=config.k, beta=beta)
    report = thm33_report(
        params,
        rel_tol=config.rel_tol,
        probe_i=config.i,
        probe_tau=config.tau,
        cutoff=config.cutoff_R,
    )
    document = report.model_dump()
    document["l2_form"]["divergent"] = report.l2_form.divergent
    document["gradient_form"]["divergent"] = report.gradient_form.divergent
    lines = [
        f"L2 form: {'divergent' if report.l2_form.divergent else _round_floats(report.l2_form.value)}"
        f" (endpoint exponents {_round_floats(list(report.l2_form.endpoint_exponents))})",
        f"gradient form: {'divergent' if report.gradient_form.divergent else _round_floats(report.gradient_form.value)}"
        f" (endpoint exponents {_round_floats(list(report.gradient_form.endpoint_exponents))})",
        f"growth rate: {_round_floats(report.growth_rate)} (power counting {report.expected_growth_rate})",
        f"probe: {_round_floats(report.probe)} vs sharp {_round_floats(report.sharp_value)}",
    ]
    return 0, _emit(config, document, [document], lines)


_HANDLERS: Dict[Subcommand, Callable[[RunConfig], Tuple[int, str]]] = {
    Subcommand.COEFFS: _cmd_coeffs,
    Subcommand.CONSTANTS: _cmd_constants,
    Subcommand.VERIFY: _cmd_verify,
    Subcommand.QUOTIENT: _cmd_quotient,
    Subcommand.EUCLID_QUOTIENT: lambda config: _cmd_quotient(config, euclidean_ball_quotient),
    Subcommand.CONFORMAL: _cmd_conformal,
    Subcommand.THM33_PROBE: _cmd_thm33,
}


# ============================================================================
# ENTRY POINTS
# ============================================================================

def run(config: RunConfig) -> Tuple[int, str]:
    """
    Execute one validated request.

    Returns:
        (exit status, document): 0 on success, 1 with an error document on
        bad input or library errors, 2 when a verification fails
    """
    try:
        if config.n is not None and config.n <= 2 * config.k:
            raise DomainError(
                f"Need n > 2k, got n={config.n}, k={config.k}", {"n": config.n, "k": config.k}
            )
        return _HANDLERS[config.subcommand](config)
    except LabError as exc:
        logger.error("%s: %s", exc.code, exc.message)
        return exc.exit_code, error_document(exc)
    except ValidationError as exc:
        error = UsageError("Invalid parameters", {"errors": _validation_details(exc)})
        return error.exit_code, error_document(error)
    except ValueError as exc:
        error = DomainError(str(exc))
        logger.error("%s: %s", error.code, error.message)
        return error.exit_code, error_document(error)
    except Exception as exc:
        logger.exception("Unexpected failure")
        response = ErrorResponse(error="INTERNAL_ERROR", message=str(exc))
        return 1, response.model_dump_json(indent=2) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging()
    try:
        config = parse_config(argv)
    except LabError as exc:
        sys.stdout.write(error_document(exc))
        return exc.exit_code
    code, document = run(config)
    sys.stdout.write(document)
    return code


if __name__ == "__main__":
    sys.exit(main())
