"""Command line front end.

Exit codes: 0 success, 2 invalid input, 3 non-convergence, 4 a cross-check
exceeded its threshold.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import sys

import click

from . import __version__
from .agm import DEFAULT_TOL, agm_mean, elliptic_k
from .agm3 import MeanResult, extended_mean
from .core import (
    AGMError,
    DomainError,
    NonConvergence,
    ParamError,
    Triple,
    ValidationError,
    validate_triple,
)
from .hypergeom import AppellF1Params, appell_f1, f1_reduce
from .quadrature import integral_theta_form, integral_u_form

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NONCONVERGENCE = 3
EXIT_VERIFY_FAILED = 4

VERIFY_THRESHOLD = 1e-9

# lets "-0.5" through as a positional argument instead of an unknown option
_NUMERIC = {"ignore_unknown_options": True}

_HALF = AppellF1Params(0.5, 0.5, 0.5, 1.0)


# -- serialization -----------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, floats with 17 significant digits.

    Parsing the output with :func:`json.loads` and dumping it again gives the
    same bytes.
    """
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {dumps(obj[k])}" for k in sorted(obj))
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _trace_rows(result: MeanResult) -> list[dict]:
    return [
        {
            "n": s.index,
            "a": s.triple.a,
            "b": s.triple.b,
            "c": s.triple.c,
            "kappa": s.moduli.kappa,
            "lambda": s.moduli.lambda_,
        }
        for s in result.trace
    ]


def output_record(result: MeanResult, residuals=None, routes=None, trace=False) -> dict:
    """Flat record describing one mean computation."""
    t, m = result.start, result.moduli
    rec = {
        "a": t.a,
        "b": t.b,
        "c": t.c,
        "kappa": m.kappa,
        "lambda": m.lambda_,
        "mean": result.mean,
        "iterations": result.iterations,
        "converged": result.converged,
    }
    if residuals is not None:
        rec["residuals"] = dict(residuals)
        rec["routes"] = dict(routes)
    if trace:
        rec["trace"] = _trace_rows(result)
    return rec


_TRACE_COLUMNS = ["n", "a", "b", "c", "kappa", "lambda"]
_SUMMARY_COLUMNS = ["a", "b", "c", "kappa", "lambda", "mean", "iterations", "converged"]


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v)


def _csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row[k]) for k in columns])
    return buf.getvalue()


def _human(rec: dict) -> str:
    lines = []
    for key in _SUMMARY_COLUMNS:
        lines.append(f"{key:<11} {_cell(rec[key])}")
    if "residuals" in rec:
        lines.append("routes (a0/M):")
        for name, v in rec["routes"].items():
            lines.append(f"  {name:<12} {v!r}")
        lines.append("residuals:")
        for name, v in rec["residuals"].items():
            flag = "ok" if v <= VERIFY_THRESHOLD else "FAIL"
            lines.append(f"  {name:<26} {v:.3e}  {flag}")
    if "trace" in rec:
        lines.append("  ".join(f"{c:>22}" if c != "n" else f"{c:>3}" for c in _TRACE_COLUMNS))
        for row in rec["trace"]:
            cells = [f"{row['n']:>3}"] + [f"{row[c]!r:>22}" for c in _TRACE_COLUMNS[1:]]
            lines.append("  ".join(cells))
    return "\n".join(lines)


# -- shared plumbing ---------------------------------------------------------


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _run_mean(a: float, b: float, c: float, tol: float) -> MeanResult:
    try:
        t = validate_triple(a, b, c)
        return extended_mean(t, tol)
    except ValidationError as exc:
        _fail(EXIT_INVALID, f"{exc} [constraint: {exc.constraint}]")
    except NonConvergence as exc:
        _fail(EXIT_NONCONVERGENCE, str(exc))
    except ValueError as exc:
        _fail(EXIT_INVALID, str(exc))


def verify_routes(t: Triple, result: MeanResult) -> tuple[dict, dict, list[str]]:
    """Evaluate ``a0/M`` along every independent route and their pairwise residuals.

    Routes whose argument lies outside their series domain are skipped and
    named in the third return value.
    """
    m = result.moduli
    candidates = {
        "iteration": lambda: t.a / result.mean,
        "u_form": lambda: integral_u_form(m),
        "theta_form": lambda: integral_theta_form(t),
        "appell_f1": lambda: appell_f1(_HALF, m.kappa, m.lambda_),
        "reduced_2f1": lambda: f1_reduce(_HALF, m.kappa, m.lambda_),
    }
    routes, skipped = {}, []
    for name, fn in candidates.items():
        try:
            routes[name] = fn()
        except DomainError:
            skipped.append(name)
    residuals = {}
    for (n1, v1), (n2, v2) in itertools.combinations(routes.items(), 2):
        residuals[f"{n1}_vs_{n2}"] = abs(v1 - v2) / max(abs(v1), abs(v2))
    return routes, residuals, skipped


def _emit_mean(result: MeanResult, as_json: bool, as_csv: bool, trace: bool) -> None:
    rec = output_record(result, trace=trace)
    if as_json:
        click.echo(dumps(rec))
    elif as_csv:
        if trace:
            click.echo(_csv(_TRACE_COLUMNS, rec["trace"]), nl=False)
        else:
            click.echo(_csv(_SUMMARY_COLUMNS, [rec]), nl=False)
    else:
        click.echo(_human(rec))


# -- commands ----------------------------------------------------------------


@click.group()
@click.version_option(__version__)
def cli():
    """Three-variable arithmetic-geometric mean and its cross-checks."""


def _mean_options(fn):
    fn = click.option("--csv", "as_csv", is_flag=True, help="CSV output.")(fn)
    fn = click.option("--json", "as_json", is_flag=True, help="One JSON record.")(fn)
    fn = click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True,
                      help="Relative stopping tolerance (>= 4*eps).")(fn)
    fn = click.argument("c", type=float)(fn)
    fn = click.argument("b", type=float)(fn)
    fn = click.argument("a", type=float)(fn)
    return fn


@cli.command(context_settings=_NUMERIC)
@_mean_options
@click.option("--trace", is_flag=True, help="Include every iterate.")
def mean(a, b, c, tol, as_json, as_csv, trace):
    """Extended mean M(A, B, C) by iteration."""
    if as_json and as_csv:
        _fail(EXIT_INVALID, "--json and --csv are exclusive")
    result = _run_mean(a, b, c, tol)
    _emit_mean(result, as_json, as_csv, trace)


@cli.command("trace", context_settings=_NUMERIC)
@_mean_options
def trace_cmd(a, b, c, tol, as_json, as_csv):
    """Same as `mean --trace`."""
    if as_json and as_csv:
        _fail(EXIT_INVALID, "--json and --csv are exclusive")
    result = _run_mean(a, b, c, tol)
    _emit_mean(result, as_json, as_csv, True)


@cli.command(context_settings=_NUMERIC)
@click.argument("a", type=float)
@click.argument("b", type=float)
@click.argument("c", type=float)
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def verify(a, b, c, tol, as_json):
    """Compare a0/M across iteration, quadrature and hypergeometric routes."""
    result = _run_mean(a, b, c, tol)
    t = result.start
    try:
        routes, residuals, skipped = verify_routes(t, result)
    except NonConvergence as exc:
        _fail(EXIT_NONCONVERGENCE, str(exc))
    for name in skipped:
        click.echo(f"note: route {name} skipped (argument outside its series domain)", err=True)
    rec = output_record(result, residuals, routes)
    click.echo(dumps(rec) if as_json else _human(rec))
    bad = {k: v for k, v in residuals.items() if not v <= VERIFY_THRESHOLD}
    if bad:
        for k, v in bad.items():
            click.echo(f"error: {k} residual {v:.3e} exceeds {VERIFY_THRESHOLD:g}", err=True)
        sys.exit(EXIT_VERIFY_FAILED)


@cli.command(context_settings=_NUMERIC)
@click.argument("alpha", type=float)
@click.argument("beta", type=float)
@click.argument("beta_prime", type=float)
@click.argument("gamma", type=float)
@click.argument("x", type=float)
@click.argument("y", type=float)
@click.option("--method", type=click.Choice(["series", "reduce"]), default="series",
              show_default=True)
def f1(alpha, beta, beta_prime, gamma, x, y, method):
    """Appell F1(ALPHA; BETA, BETA_PRIME; GAMMA; X, Y)."""
    try:
        p = AppellF1Params(alpha, beta, beta_prime, gamma)
        value = appell_f1(p, x, y) if method == "series" else f1_reduce(p, x, y)
    except NonConvergence as exc:
        _fail(EXIT_NONCONVERGENCE, str(exc))
    except (DomainError, ParamError) as exc:
        _fail(EXIT_INVALID, str(exc))
    click.echo(repr(value))


@cli.command("gauss-agm", context_settings=_NUMERIC)
@click.argument("a", type=float)
@click.argument("b", type=float)
@click.option("--tol", type=float, default=DEFAULT_TOL, show_default=True)
def gauss_agm(a, b, tol):
    """Classic arithmetic-geometric mean of A and B."""
    try:
        value = agm_mean(a, b, tol)
    except NonConvergence as exc:
        _fail(EXIT_NONCONVERGENCE, str(exc))
    except (AGMError, ValueError) as exc:
        _fail(EXIT_INVALID, str(exc))
    click.echo(repr(value))


@cli.command("elliptic-k", context_settings=_NUMERIC)
@click.argument("k", type=float)
def elliptic_k_cmd(k):
    """Complete elliptic integral of the first kind, modulus K."""
    try:
        value = elliptic_k(k)
    except NonConvergence as exc:
        _fail(EXIT_NONCONVERGENCE, str(exc))
    except DomainError as exc:
        _fail(EXIT_INVALID, str(exc))
    click.echo(repr(value))


def main(argv=None):
    cli.main(args=argv, prog_name="extagm")
