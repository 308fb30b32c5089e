"""Command-line front end.

Exit codes: 0 success, 1 convergence threshold missed, 2 bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .bernstein_stancu import (
    OperatorConfig,
    StancuShift,
    apply,
    apply_grid,
    basis_matrix,
    basis_vector,
    moment_direct,
    moments,
    nodes,
    original_operator_defect,
)
from .functions import parse_function
from .korovkin import (
    DEFAULT_GRID,
    DEFAULT_THRESHOLD,
    default_schedule,
    korovkin_sweep,
    parse_schedule,
    uniform_grid,
)
from .pq_core import PQParams
from .scalar import parse_scalar

MAX_N_FLOAT = 1000
MAX_N_EXACT = 64
MAX_GRID = 10_001
MAX_GRID_EXACT = 257
# cap on grid * (n+1) float weights, and grid * (n+1)**2 rational operations
MAX_CELLS_FLOAT = 4_000_000
MAX_CELLS_EXACT = 300_000


class UsageError(Exception):
    pass


# -- serialization -----------------------------------------------------------


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, Fraction):
        return str(v)
    return format(float(v), ".17g")


def _json_value(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    return float(v)


def render(params: dict, schema: list, rows: list, fmt: str) -> str:
    """Serialize one output record as CSV (LF endings) or JSON."""
    if fmt == "json":
        doc = {
            "params": params,
            "schema": schema,
            "rows": [[_json_value(v) for v in row] for row in rows],
        }
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    buf.write("# params: " + json.dumps(params, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(schema)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def parse_output(text: str, fmt: str):
    """Inverse of :func:`render`: returns ``(params, schema, rows)``.

    Cells are left as strings for CSV and as JSON scalars otherwise.
    """
    if fmt == "json":
        doc = json.loads(text)
        return doc["params"], doc["schema"], doc["rows"]
    lines = text.splitlines()
    params = {}
    if lines and lines[0].startswith("# params: "):
        params = json.loads(lines[0][len("# params: ") :])
        lines = lines[1:]
    reader = list(csv.reader(lines))
    return params, reader[0], reader[1:]


# -- argument handling ---------------------------------------------------------


def _scalar(text: str, exact: bool, name: str):
    try:
        return parse_scalar(text, exact=exact)
    except ValueError as exc:
        raise UsageError(f"--{name}: {exc}") from exc


def _resolve_n(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    limit = MAX_N_EXACT if args.exact else MAX_N_FLOAT
    if not 1 <= args.n <= limit:
        raise UsageError(f"--n must satisfy 1 <= n <= {limit} ({'exact' if args.exact else 'float'} backend)")
    return args.n


def _resolve_params(args, n: int) -> PQParams:
    if args.p is None and args.q is None:
        if args.exact:
            raise UsageError("--exact needs explicit --p and --q")
        params = default_schedule()(n)
        return params
    if args.p is None or args.q is None:
        raise UsageError("give both --p and --q, or neither to use the default schedule")
    p, q = _scalar(args.p, args.exact, "p"), _scalar(args.q, args.exact, "q")
    try:
        return PQParams(p, q)
    except ValueError as exc:
        raise UsageError(f"invalid (p, q): {exc}") from exc


def _resolve_shift(args) -> StancuShift:
    alpha = _scalar(args.alpha, args.exact, "alpha")
    beta = _scalar(args.beta, args.exact, "beta")
    try:
        return StancuShift(alpha, beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _resolve_grid(args, n: int = 1):
    limit = MAX_GRID_EXACT if args.exact else MAX_GRID
    if not 2 <= args.grid <= limit:
        raise UsageError(f"--grid must satisfy 2 <= grid <= {limit}")
    if args.exact and args.grid * (n + 1) ** 2 > MAX_CELLS_EXACT:
        raise UsageError(f"grid * (n+1)**2 exceeds {MAX_CELLS_EXACT} for the exact backend; reduce --grid or --n")
    if not args.exact and args.grid * (n + 1) > MAX_CELLS_FLOAT:
        raise UsageError(f"grid * (n+1) exceeds {MAX_CELLS_FLOAT}; reduce --grid or --n")
    if args.exact:
        return [Fraction(i, args.grid - 1) for i in range(args.grid)]
    return uniform_grid(args.grid)


def _config(args, with_shift: bool = True):
    n = _resolve_n(args)
    params = _resolve_params(args, n)
    shift = _resolve_shift(args) if with_shift else StancuShift()
    return OperatorConfig(n, params, shift)


def _echo(args, config: OperatorConfig | None = None, **extra) -> dict:
    out = {"command": args.command, "backend": "exact" if args.exact else "float", "grid": args.grid}
    if config is not None:
        out.update(
            n=config.n,
            p=format_value(config.params.p),
            q=format_value(config.params.q),
            alpha=format_value(config.alpha),
            beta=format_value(config.beta),
        )
    out.update(extra)
    return out


# -- commands ----------------------------------------------------------------


def cmd_basis(args):
    config = _config(args, with_shift=False)
    xs = _resolve_grid(args, config.n)
    schema = ["x"] + [f"b_{k}" for k in range(config.n + 1)]
    if config.is_exact:
        rows = [[x, *basis_vector(config, x).values] for x in xs]
    else:
        weights = basis_matrix(config, xs)
        rows = [[x, *w] for x, w in zip(xs, weights)]
    params = _echo(args, config)
    for key in ("alpha", "beta"):
        params.pop(key)
    return params, schema, rows, 0


def cmd_nodes(args):
    config = _config(args)
    schema = ["k", "t"]
    rows = [[k, t] for k, t in enumerate(nodes(config).nodes)]
    params = _echo(args, config)
    params.pop("grid")
    return params, schema, rows, 0


def cmd_moments(args):
    config = _config(args)
    xs = _resolve_grid(args, config.n)
    schema = ["x", "m0", "m1", "m2", "c1", "c2", "m1_direct", "m2_direct"]
    if config.is_exact:
        direct1 = [moment_direct(config, 1, x) for x in xs]
        direct2 = [moment_direct(config, 2, x) for x in xs]
    else:
        direct1 = apply_grid(config, lambda t: t, xs)
        direct2 = apply_grid(config, lambda t: t * t, xs)
    rows = []
    for x, d1, d2 in zip(xs, direct1, direct2):
        ms = moments(config, x)
        rows.append([x, ms.m0, ms.m1, ms.m2, ms.c1, ms.c2, d1, d2])
    return _echo(args, config), schema, rows, 0


def cmd_eval(args):
    config = _config(args)
    if not args.function or len(args.function) != 1:
        raise UsageError("eval takes exactly one --function")
    try:
        f = parse_function(args.function[0], exact=args.exact)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    xs = _resolve_grid(args, config.n)
    schema = ["x", "f", "S", "error"]
    if config.is_exact:
        approx = [apply(config, f, x) for x in xs]
        exact_vals = [f(x) for x in xs]
    else:
        approx = apply_grid(config, f, xs)
        exact_vals = np.asarray(f(xs), dtype=float)
    rows = [[x, fx, s, abs(s - fx)] for x, fx, s in zip(xs, exact_vals, approx)]
    return _echo(args, config, function=f.name), schema, rows, 0


def cmd_defect(args):
    config = _config(args, with_shift=False)
    if config.params.p == 1:
        raise UsageError("defect needs p < 1; at p = 1 the uncorrected operator has no defect")
    if not config.params.q < config.params.p:
        raise UsageError("defect needs q < p")
    xs = _resolve_grid(args, config.n)
    schema = ["x", "defect"]
    rows = [[x, original_operator_defect(config, x)] for x in xs]
    params = _echo(args, config)
    for key in ("alpha", "beta"):
        params.pop(key)
    return params, schema, rows, 0


def _parse_n_list(text: str) -> list:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"--n-list must be comma-separated integers, got {text!r}") from exc
    if not values:
        raise UsageError("--n-list is empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise UsageError("--n-list must be strictly increasing")
    if values[0] < 1 or values[-1] > MAX_N_FLOAT:
        raise UsageError(f"--n-list entries must lie in 1..{MAX_N_FLOAT}")
    return values


def cmd_converge(args):
    if args.exact:
        raise UsageError("converge runs on the float backend only")
    n_values = _parse_n_list("8,16,32,64,128,256,512" if args.n_list is None else args.n_list)
    try:
        schedule = parse_schedule(args.schedule)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    shift = _resolve_shift(args)
    try:
        fs = [parse_function(s) for s in (args.function or ["1", "t", "t^2"])]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _resolve_grid(args, n_values[-1])
    threshold = _scalar(args.threshold, False, "threshold")
    if not threshold > 0:
        raise UsageError("--threshold must be positive")
    try:
        report = korovkin_sweep(n_values, schedule, shift, fs, args.grid, threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    names = report.functions
    schema = ["n", "p", "q"] + [f"err[{s}]" for s in names] + [f"bound[{s}]" for s in names] + ["c2_sup", "korovkin_max"]
    rows = [
        [row.n, row.p, row.q, *(row.errors[s] for s in names), *(row.bounds[s] for s in names), row.c2_sup, row.korovkin_max]
        for row in report.rows
    ]
    params = _echo(
        args,
        schedule=schedule.name,
        alpha=format_value(shift.alpha),
        beta=format_value(shift.beta),
        n_list=n_values,
        functions=names,
        threshold=threshold,
    )
    status = "converged" if report.converged else "not converged"
    print(f"pqstancu converge: {status} (max monomial error {report.rows[-1].korovkin_max:.3g} at n={n_values[-1]}, threshold {threshold:g})", file=sys.stderr)
    return params, schema, rows, 0 if report.converged else 1


COMMANDS = {
    "basis": (cmd_basis, "basis weights b_0..b_n on a grid"),
    "nodes": (cmd_nodes, "Stancu nodes t_0..t_n"),
    "moments": (cmd_moments, "closed-form raw and central moments with direct twins"),
    "eval": (cmd_eval, "apply the operator to a catalog function"),
    "defect": (cmd_defect, "normalization defect of the uncorrected operator"),
    "converge": (cmd_converge, "sup-norm convergence sweep along a schedule"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="degree")
    common.add_argument("--p", help="p parameter (decimal or ratio); default: schedule value at n")
    common.add_argument("--q", help="q parameter (decimal or ratio)")
    common.add_argument("--alpha", default="0")
    common.add_argument("--beta", default="0")
    common.add_argument("--grid", type=int, default=DEFAULT_GRID, help="uniform grid points incl. endpoints")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--function", action="append", help="catalog function, e.g. abs:1/2, t^2, poly:0,1,1")
    common.add_argument("--n-list", help="comma-separated increasing degrees (converge)")
    common.add_argument("--schedule", default="default", help="default | power:a,b | constant:p,q")
    common.add_argument("--threshold", default=str(DEFAULT_THRESHOLD))
    common.add_argument("--exact", action="store_true", help="exact rational backend")
    common.add_argument("--output", "-o", help="write to file instead of stdout")

    parser = argparse.ArgumentParser(prog="pqstancu", description="(p,q)-Bernstein-Stancu operators")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        params, schema, rows, code = handler(args)
    except (UsageError, ValueError, OverflowError, ZeroDivisionError) as exc:
        print(f"pqstancu {args.command}: error: {exc}", file=sys.stderr)
        return 2
    text = render(params, schema, rows, args.format)
    if args.output:
        try:
            with open(args.output, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"pqstancu {args.command}: error: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
