# src/besselpairs/main.py

import argparse
import csv
import io
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from besselpairs import __version__
from besselpairs.core import constants, oracle, sturm, weights
from besselpairs.core.grammar import format_potential, parse_potential
from besselpairs.core.potentials import Constant, Product
from besselpairs.models.enums import HigherOrderVariant, OutputFormat, Suite, Verb
from besselpairs.models.schemas import BesselPairSpec, ConstantResult
from besselpairs.services.tables import TABLE_CONSTANTS, TableService
from besselpairs.services.verification import VerificationService
from besselpairs.utils.exceptions import BesselPairError, ParamError
from besselpairs.utils.helpers import (
    format_float,
    parse_float_range,
    parse_int_range,
    parse_sizes,
    render_json,
)
from besselpairs.utils.logger import configure_logging, get_run_logger
from besselpairs.utils.validators import (
    optional_positive,
    require_dimension,
    require_finite,
    require_mode,
    require_positive,
)

EXIT_OK = 0
EXIT_SUITE_FAILED = 1
EXIT_USAGE = 2

CSV_COLUMNS = ("n", "m", "value", "case", "k_min")
CONSTANT_NAMES = (
    "hardy", "ckn", "cn", "A", "a_nm", "beta_nm", "sigma", "power", "bbdgv",
    "ho", "brezis-vazquez", "radial-hr", "hrs", "log-hardy",
)


# -----------------------------
# Parser
# -----------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a single JSON object on stdout")
    common.add_argument("--csv", metavar="PATH", help="write CSV rows to PATH ('-' for stdout)")
    common.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING or ERROR (logs go to stderr)")

    # only the shooting verbs take a cutoff and a tolerance
    numerical = argparse.ArgumentParser(add_help=False)
    numerical.add_argument("--eps", type=float, help="inner cutoff for shooting (default: ratio * R)")
    numerical.add_argument("--tol", type=float, help="shooting tolerance for pair-check, bisection width for weight")

    parser = argparse.ArgumentParser(prog="bessel", description="Bessel pairs, Hardy and Hardy-Rellich constants")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbs = parser.add_subparsers(dest="verb", required=True)

    pair = verbs.add_parser(Verb.PAIR_CHECK.value, parents=[common, numerical], help="shoot (B_{V,cW}) and report positivity")
    pair.add_argument("--V", required=True, help="potential expression for V")
    pair.add_argument("--W", required=True, help="potential expression for W")
    pair.add_argument("--n", type=int, required=True)
    pair.add_argument("--R", type=float, required=True)
    pair.add_argument("--c", type=float, default=1.0)

    weight = verbs.add_parser(Verb.WEIGHT.value, parents=[common, numerical], help="weight beta(V, W; R) by bisection")
    weight.add_argument("--potential", help="W for the Bessel-potential weight beta(W; R)")
    weight.add_argument("--V", help="potential expression for V")
    weight.add_argument("--W", help="potential expression for W")
    weight.add_argument("--n", type=int)
    weight.add_argument("--R", type=float, required=True)

    constant = verbs.add_parser(Verb.CONSTANT.value, parents=[common], help="closed-form constants")
    constant.add_argument("name", choices=CONSTANT_NAMES)
    for flag, kind in (("--n", int), ("--m", float), ("--k", float), ("--l", int), ("--R", float),
                       ("--alpha", float), ("--beta", float), ("--a", float), ("--b", float)):
        constant.add_argument(flag, type=kind)
    constant.add_argument("--lambda", dest="lam", type=float)
    constant.add_argument("--betaW", dest="betaW", type=float)
    constant.add_argument("--variant", choices=[variant.value for variant in HigherOrderVariant])

    verify = verbs.add_parser(Verb.VERIFY.value, parents=[common], help="run a verification suite")
    verify.add_argument("--suite", required=True, help="classical, appendixB, rellich or weights")
    verify.add_argument("--N", type=int, help="oracle grid size")

    table = verbs.add_parser(Verb.TABLE.value, parents=[common], help="a_nm or beta_nm over an (n, m) grid")
    table.add_argument("name", choices=sorted(TABLE_CONSTANTS))
    table.add_argument("--n-range", dest="n_range", required=True, help="a..b")
    table.add_argument("--m-range", dest="m_range", required=True, help="a..b..step; write --m-range=-1..0..0.5 when a is negative")

    study = verbs.add_parser(Verb.STUDY.value, parents=[common], help="oracle convergence study")
    study.add_argument("--problem", required=True, help="hardy:n=..[,V=..,W=..] | mode:n=..,m=..,k=.. | flat[:R=..]")
    study.add_argument("--N", required=True, help="comma separated, strictly increasing grid sizes")
    return parser


# -----------------------------
# Verbs
# -----------------------------
def _payload(query: Dict[str, Any], value=None, bracket=None, case_taken=None, **diagnostics) -> Dict[str, Any]:
    body: Dict[str, Any] = {"query": query}
    if bracket is not None:
        body["bracket"] = bracket
    body["value"] = value
    body["case_taken"] = case_taken
    body["diagnostics"] = diagnostics
    return body


def _pair_check(args) -> Dict[str, Any]:
    V, W = parse_potential(args.V), parse_potential(args.W)
    pair = BesselPairSpec(V=V, W=W, n=require_dimension(args.n), R=require_positive(args.R, "R"), c=args.c)
    report = sturm.prufer_shoot(pair, eps=optional_positive(args.eps, "eps"), tol=optional_positive(args.tol, "tol"))
    scaled = W if args.c == 1.0 else Product(members=(Constant(level=args.c), W))
    criterion, criterion_error = None, None
    if args.c > 0 and not W.is_zero():
        try:
            criterion = weights.criterion_at_zero(V, scaled, pair.n, pair.R)
        except BesselPairError as exc:
            criterion_error = f"{exc.error_code}: {exc.message}"
    return _payload(
        {"verb": args.verb, "V": format_potential(V), "W": format_potential(W), "n": pair.n, "R": pair.R, "c": pair.c},
        value=report.positive_on_interval,
        case_taken="degenerate" if report.degenerate else "shooting",
        zero_count=report.zero_count,
        first_zero=report.first_zero,
        theta_final=report.theta_final,
        epsilon_used=report.epsilon_used,
        boundary_zero=report.boundary_zero,
        oscillatory_at_origin=report.oscillatory_at_origin,
        origin_index=report.origin_index,
        step_stats=report.step_stats.model_dump(),
        criterion=None if criterion is None else {
            "limit_estimate": criterion.limit_estimate,
            "classification": criterion.classification.value,
        },
        criterion_error=criterion_error,
        hypotheses_hold=sturm.hypothesis_check(pair).holds,
    )


def _weight(args) -> Dict[str, Any]:
    R = require_positive(args.R, "R")
    tol, eps = optional_positive(args.tol, "tol"), optional_positive(args.eps, "eps")
    if args.potential:
        W = parse_potential(args.potential)
        estimate = weights.weight_potential(W, R, tol=tol, eps=eps)
        query = {"verb": args.verb, "potential": format_potential(W), "R": R, "tol": args.tol, "eps": args.eps}
    else:
        if not (args.V and args.W and args.n is not None):
            raise ParamError("weight needs --potential, or all of --V, --W and --n", "potential", None)
        V, W = parse_potential(args.V), parse_potential(args.W)
        n = require_dimension(args.n)
        estimate = weights.weight_pair(V, W, n, R, tol=tol, eps=eps)
        query = {"verb": args.verb, "V": format_potential(V), "W": format_potential(W), "n": n, "R": R,
                 "tol": args.tol, "eps": args.eps}
    estimate.require_finite()
    return _payload(
        query,
        value=estimate.value,
        bracket=[estimate.lower, estimate.upper],
        case_taken="bisection",
        iterations=estimate.iterations,
        cap=estimate.cap,
    )


def _need(args, *names: str) -> None:
    missing = [name for name in names if getattr(args, name) is None]
    if missing:
        flags = ", ".join("--" + {"lam": "lambda"}.get(name, name) for name in missing)
        raise ParamError(f"constant {args.name} needs {flags}", missing[0], None)


def _constant_result(args) -> ConstantResult:
    name = args.name
    single: Dict[str, Callable[[], float]] = {
        "hardy": lambda: constants.hardy_constant(args.n, args.lam),
        "ckn": lambda: constants.ckn_constant(args.n, args.a),
        "cn": lambda: constants.cn_constant(args.n),
        "sigma": lambda: constants.sigma_nm(args.n, args.m, args.lam, args.betaW),
        "power": lambda: constants.power_family_constant(args.n, args.m, args.alpha, args.beta),
        "brezis-vazquez": lambda: constants.brezis_vazquez_constant(require_positive(args.R, "R")),
        "radial-hr": lambda: constants.radial_hardy_rellich_constant(args.n, args.m),
        "log-hardy": lambda: constants.weighted_log_hardy_constant(args.n, args.m),
    }
    required = {
        "hardy": ("n", "lam"), "ckn": ("n", "a"), "cn": ("n",), "A": ("k", "m", "n"),
        "a_nm": ("n", "m"), "beta_nm": ("n", "m"), "sigma": ("n", "m", "lam", "betaW"),
        "power": ("n", "m", "alpha", "beta"), "bbdgv": ("n", "alpha", "beta", "b"),
        "ho": ("variant", "n", "k", "m", "l"), "brezis-vazquez": ("R",), "radial-hr": ("n", "m"),
        "hrs": ("n", "m", "betaW"), "log-hardy": ("n", "m"),
    }
    _need(args, *required[name])

    if name in single:
        return ConstantResult(value=single[name](), case_taken=name)
    if name == "A":
        return ConstantResult(value=constants.mode_constant_A(require_mode(args.k), args.m, args.n), case_taken="A(k,m,n)")
    if name == "a_nm":
        return constants.a_nm(args.n, args.m)
    if name == "beta_nm":
        return constants.beta_nm(args.n, args.m)
    if name == "hrs":
        return constants.hrs_constants(args.n, args.m, args.betaW)
    if name == "bbdgv":
        value = constants.bbdgv_constant(args.n, args.alpha, args.beta, args.b)
        if isinstance(value, tuple):
            lower, upper = value
            return ConstantResult(value=lower, case_taken="bounds (alpha*beta > 0)", table_value=upper)
        return ConstantResult(value=value, case_taken="alpha*beta < 0")
    return constants.higher_order_constants(
        args.variant,
        args.n,
        require_finite(args.k, "k"),
        args.m,
        args.l,
        betaW=0.25 if args.betaW is None else args.betaW,
        lam=2.0 if args.lam is None else args.lam,
    )


def _constant(args) -> Dict[str, Any]:
    if args.m is not None and args.name == "ho":
        if args.m != int(args.m):
            raise ParamError("order m must be an integer for ho", "m", args.m)
        args.m = int(args.m)
    result = _constant_result(args)
    query = {key: value for key, value in vars(args).items()
             if value is not None and key not in ("json", "csv", "log_level", "handler")}
    bracket = None
    if args.name == "bbdgv" and result.table_value is not None:
        bracket = [result.value, result.table_value]
    return _payload(
        query,
        value=result.value,
        bracket=bracket,
        case_taken=result.case_taken,
        k_min=result.k_min,
        components={component.label: component.value for component in result.components},
        table_value=result.table_value,
        table_case=result.table_case,
        table_agrees=result.table_agrees,
        modes_scanned=result.modes_scanned,
    )


def _verify(args) -> Dict[str, Any]:
    try:
        suite = Suite(args.suite)
    except ValueError:
        raise ParamError(
            f"unknown suite {args.suite!r}; expected one of {[s.value for s in Suite]}", "suite", args.suite
        )
    report = VerificationService(oracle_grid=args.N).run(suite)
    return _payload(
        {"verb": args.verb, "suite": suite.value, "N": args.N},
        value=report.passed,
        case_taken=suite.value,
        max_deviation=report.max_deviation,
        items=[item.model_dump() for item in report.items],
    )


def _table(args) -> Dict[str, Any]:
    rows = TableService().build(args.name, parse_int_range(args.n_range), parse_float_range(args.m_range))
    return _payload(
        {"verb": args.verb, "name": args.name, "n_range": args.n_range, "m_range": args.m_range},
        value=len(rows),
        case_taken=args.name,
        rows=[row.model_dump() for row in rows],
    )


def _study(args) -> Dict[str, Any]:
    result = oracle.convergence_study(args.problem, parse_sizes(args.N))
    return _payload(
        {"verb": args.verb, "problem": args.problem, "N": args.N},
        value=result.limit,
        case_taken="first-order extrapolation",
        observed_order=result.observed_order,
        rows=[row.model_dump() for row in result.rows],
    )


HANDLERS: Dict[str, Callable[[argparse.Namespace], Dict[str, Any]]] = {
    Verb.PAIR_CHECK.value: _pair_check,
    Verb.WEIGHT.value: _weight,
    Verb.CONSTANT.value: _constant,
    Verb.VERIFY.value: _verify,
    Verb.TABLE.value: _table,
    Verb.STUDY.value: _study,
}


# -----------------------------
# Output
# -----------------------------
def _write_csv(rows: List[Dict[str, Any]], target: str, stdout: TextIO) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([
            row["n"],
            format_float(row["m"]),
            format_float(row["value"]),
            row["case"],
            "" if row["k_min"] is None else row["k_min"],
        ])
    if target == "-":
        stdout.write(buffer.getvalue())
    else:
        with open(target, "w", encoding="utf-8", newline="") as handle:
            handle.write(buffer.getvalue())


def _human(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return str(value).lower()
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _write_human(body: Dict[str, Any], stdout: TextIO) -> None:
    if "bracket" in body:
        lower, upper = body["bracket"]
        stdout.write(f"bracket: [{_human(lower)}, {_human(upper)}]\n")
    stdout.write(f"value: {_human(body['value'])}\n")
    stdout.write(f"case_taken: {_human(body['case_taken'])}\n")
    for key, value in body["diagnostics"].items():
        if key == "items":
            for item in value:
                status = "PASS" if item["passed"] else "FAIL"
                deviation = "" if item["deviation"] is None else f" deviation={_human(item['deviation'])}"
                detail = f" ({item['detail']})" if item["detail"] else ""
                stdout.write(f"  [{status}] {item['name']}{deviation}{detail}\n")
        elif key == "rows" and value and "case" in value[0]:
            for row in value:
                stdout.write(f"  n={row['n']} m={_human(row['m'])} value={_human(row['value'])} "
                             f"case={row['case']} k_min={_human(row['k_min'])}\n")
        elif key == "rows":
            for row in value:
                stdout.write(f"  N={row['N']} value={_human(row['value'])} extrapolated={_human(row['extrapolated'])}\n")
        elif isinstance(value, dict):
            stdout.write(f"{key}:\n")
            for inner, inner_value in value.items():
                stdout.write(f"  {inner}: {_human(inner_value)}\n")
        else:
            stdout.write(f"{key}: {_human(value)}\n")


def _emit(args, body: Dict[str, Any], stdout: TextIO) -> None:
    output = OutputFormat.JSON if args.json else OutputFormat.HUMAN
    if args.csv:
        if args.verb != Verb.TABLE.value:
            raise ParamError("--csv is only available for table", "csv", args.csv)
        _write_csv(body["diagnostics"]["rows"], args.csv, stdout)
        if args.csv == "-":
            return
    if output == OutputFormat.JSON:
        stdout.write(render_json(body) + "\n")
    else:
        _write_human(body, stdout)


# -----------------------------
# Entry points
# -----------------------------
def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """Execute one verb; returns the process exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    configure_logging(args.log_level)
    log = get_run_logger(args.verb)
    log.info("run_start", argv=list(argv) if argv is not None else sys.argv[1:])
    try:
        body = HANDLERS[args.verb](args)
        _emit(args, body, stdout)
    except BesselPairError as exc:
        log.error("run_failed", error_code=exc.error_code, message=exc.message, details=exc.details)
        stderr.write(f"error [{exc.error_code}]: {exc.message}\n")
        return exc.exit_code
    except ValidationError as exc:
        log.error("run_failed", error_code="PARAM_ERROR", message=str(exc))
        stderr.write(f"error [PARAM_ERROR]: {exc}\n")
        return EXIT_USAGE

    code = EXIT_OK
    if args.verb == Verb.VERIFY.value and not body["value"]:
        code = EXIT_SUITE_FAILED
    log.info("run_done", exit_code=code)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
