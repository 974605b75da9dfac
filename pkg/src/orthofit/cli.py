"""Command-line interface.

Four subcommands:

* fit      read a point cloud, fit the orthogonal-distance line, print it
* gen      generate a synthetic cloud along a known line, write it as CSV
* compare  fit both the orthogonal line and the classical explicit form
* check    run the self-diagnostics (oracles and invariants) on an input

All output is deterministic: the same invocation on the same input produces
byte-identical bytes. Exit codes: 0 success, 1 a check reported FAIL,
2 degenerate input or a rank-deficient explicit fit, 3 unreadable input,
4 solver non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .errors import (
    DegenerateInput,
    NoConvergence,
    OrthofitError,
    ParseError,
    ZeroVector,
)
from .fit import (
    fit_lse_explicit,
    fit_tls_line,
    line_from_explicit,
    total_orthogonal_distance,
    vertical_residual_sq,
)
from .geometry import PointSet, center
from .oracle import cubic_eigenvalues, grid_search_direction
from .scatter import accumulate_scatter
from .solver import (
    SolverConfig,
    finite_diff_gradient,
    quadratic_objective,
    stationarity_forms,
)


def _fmt(x: float) -> str:
    """Human format: 12 significant digits."""
    return format(float(x), ".12g")


def _fmt_vec(v) -> str:
    return " ".join(_fmt(c) for c in v)


def _repr_num(x: float) -> str:
    """Machine format: shortest representation that round-trips."""
    return repr(float(x))


def _repr_vec(v) -> str:
    return ",".join(_repr_num(c) for c in v)


def _angle_rad(u, v) -> float:
    """Angle between two unit directions, ignoring sign."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    dot = float(u @ v)
    if dot < 0.0:
        v = -v
        dot = -dot
    rejection = u - dot * v
    return math.atan2(float(np.linalg.norm(rejection)), dot)


def parse_points_text(lines) -> PointSet:
    """Parse point-cloud text: one point per line, commas or whitespace.

    Blank lines and lines starting with '#' are skipped. The dimension is
    set by the first data row; every later row must match it.

    Raises:
        ParseError: empty input, a bad token, or a column-count mismatch,
            always with the offending line number.
        DegenerateInput: a single data row.
    """
    rows: list[list[float]] = []
    dim: int | None = None
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        values = []
        for token in stripped.replace(",", " ").split():
            try:
                value = float(token)
            except ValueError:
                raise ParseError(f"line {lineno}: {token!r} is not a number") from None
            if not math.isfinite(value):
                raise ParseError(f"line {lineno}: non-finite value {token!r}")
            values.append(value)
        if dim is None:
            if len(values) < 2:
                raise ParseError(
                    f"line {lineno}: points need at least 2 coordinates, got {len(values)}"
                )
            dim = len(values)
        elif len(values) != dim:
            raise ParseError(
                f"line {lineno}: expected {dim} coordinates, got {len(values)}"
            )
        rows.append(values)
    if not rows:
        raise ParseError("no points in input")
    if len(rows) == 1:
        raise DegenerateInput("a single point does not determine a line")
    return PointSet(np.array(rows, dtype=np.float64))


def _read_points(path: str) -> PointSet:
    if path == "-":
        return parse_points_text(sys.stdin)
    with open(path, "r", encoding="utf-8") as fh:
        return parse_points_text(fh)


def _write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _parse_vector_flag(text: str, name: str) -> np.ndarray:
    try:
        values = [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"{name}: could not parse {text!r} as numbers") from None
    if not values or not all(math.isfinite(v) for v in values):
        raise ParseError(f"{name}: expected finite numbers, got {text!r}")
    return np.array(values, dtype=np.float64)


def _fit_document(result, per_point: bool) -> dict:
    doc = {
        "anchor": [float(c) for c in result.line.anchor],
        "direction": [float(c) for c in result.line.direction],
        "total_sq_distance": float(result.total_sq_distance),
        "spectrum": [float(v) for v in result.eigen.spectrum],
        "ambiguous": bool(result.eigen.ambiguous),
    }
    if per_point:
        doc["per_point_sq"] = [float(v) for v in result.per_point_sq]
    return doc


def _fit_table(result, per_point: bool) -> str:
    rows = [
        ("n-points", str(result.n_points)),
        ("dim", str(result.line.dim)),
        ("anchor", _fmt_vec(result.line.anchor)),
        ("direction", _fmt_vec(result.line.direction)),
        ("total-sq-distance", _fmt(result.total_sq_distance)),
        ("spectrum", _fmt_vec(result.eigen.spectrum)),
        ("ambiguous", "yes" if result.eigen.ambiguous else "no"),
    ]
    width = max(len(key) for key, _ in rows)
    lines = [f"{key:<{width}}  {value}" for key, value in rows]
    if per_point:
        lines.append("")
        lines.append("index  sq-distance")
        for i, value in enumerate(result.per_point_sq):
            lines.append(f"{i:>5}  {_fmt(value)}")
    return "\n".join(lines) + "\n"


def _fit_csv(result) -> str:
    lines = [
        f"# anchor: {_repr_vec(result.line.anchor)}",
        f"# direction: {_repr_vec(result.line.direction)}",
        f"# total_sq_distance: {_repr_num(result.total_sq_distance)}",
        f"# spectrum: {_repr_vec(result.eigen.spectrum)}",
        f"# ambiguous: {'true' if result.eigen.ambiguous else 'false'}",
        "index,sq_distance",
    ]
    for i, value in enumerate(result.per_point_sq):
        lines.append(f"{i},{_repr_num(value)}")
    return "\n".join(lines) + "\n"


def cmd_fit(args) -> int:
    points = _read_points(args.input)
    config = SolverConfig(tol=args.tol, max_sweeps=args.max_sweeps)
    result = fit_tls_line(points, config)
    if args.format == "json":
        text = json.dumps(_fit_document(result, args.per_point), indent=2) + "\n"
    elif args.format == "csv":
        text = _fit_csv(result)
    else:
        text = _fit_table(result, args.per_point)
    _write_output(args.output, text)
    return 0


def cmd_gen(args) -> int:
    if args.n < 2:
        raise ParseError(f"--n must be at least 2, got {args.n}")
    if args.dim < 2:
        raise ParseError(f"--dim must be at least 2, got {args.dim}")
    if args.sigma < 0.0:
        raise ParseError(f"--sigma must be nonnegative, got {args.sigma}")
    t_lo, t_hi = args.t_range
    if not (t_lo < t_hi):
        raise ParseError(f"--t-range must satisfy MIN < MAX, got {t_lo} {t_hi}")

    rng = np.random.default_rng(args.seed)
    if args.direction is not None:
        raw = _parse_vector_flag(args.direction, "--direction")
        if raw.shape[0] != args.dim:
            raise ParseError(
                f"--direction has {raw.shape[0]} components, --dim is {args.dim}"
            )
        if float(np.linalg.norm(raw)) == 0.0:
            raise ZeroVector("--direction has zero length")
        direction = raw / float(np.linalg.norm(raw))
    else:
        raw = rng.standard_normal(args.dim)
        while float(np.linalg.norm(raw)) == 0.0:
            raw = rng.standard_normal(args.dim)
        direction = raw / float(np.linalg.norm(raw))

    if args.anchor is not None:
        anchor = _parse_vector_flag(args.anchor, "--anchor")
        if anchor.shape[0] != args.dim:
            raise ParseError(
                f"--anchor has {anchor.shape[0]} components, --dim is {args.dim}"
            )
    else:
        anchor = np.zeros(args.dim)

    t = rng.uniform(t_lo, t_hi, args.n)
    if args.noise == "uniform":
        noise = rng.uniform(-1.0, 1.0, (args.n, args.dim)) * args.sigma
    else:
        noise = rng.standard_normal((args.n, args.dim)) * args.sigma
    points = anchor + t[:, None] * direction + noise

    lines = [
        f"# generated cloud: n={args.n} dim={args.dim} seed={args.seed}"
        f" sigma={_repr_num(args.sigma)} noise={args.noise}",
        f"# direction: {_repr_vec(direction)}",
        f"# anchor: {_repr_vec(anchor)}",
        f"# t-range: {_repr_num(t_lo)},{_repr_num(t_hi)}",
    ]
    for row in points:
        lines.append(",".join(_repr_num(c) for c in row))
    _write_output(args.output, "\n".join(lines) + "\n")
    return 0


def cmd_compare(args) -> int:
    points = _read_points(args.input)
    config = SolverConfig(tol=args.tol, max_sweeps=args.max_sweeps)
    tls = fit_tls_line(points, config)
    tls_vertical = vertical_residual_sq(points, tls.line, args.dependent_col)

    lse_error: str | None = None
    lse = None
    lse_line = None
    lse_orth = None
    try:
        lse = fit_lse_explicit(points, args.dependent_col)
    except OrthofitError as exc:
        lse_error = str(exc)
    else:
        lse_line = line_from_explicit(lse)
        lse_orth = total_orthogonal_distance(points, lse_line)
        # The orthogonal fit minimizes exactly this quantity, so any other
        # line scoring better means the fitter is broken, not the data.
        cloud_scale = float(np.sum(tls.eigen.spectrum))
        assert (
            lse_orth - tls.total_sq_distance >= -1e-9 * cloud_scale
        ), "explicit-fit line scored below the orthogonal minimum"

    ratio = None
    if lse_orth is not None and tls.total_sq_distance > 0.0:
        ratio = lse_orth / tls.total_sq_distance

    if args.format == "json":
        text = _compare_json(tls, tls_vertical, lse, lse_line, lse_orth, lse_error, ratio)
    elif args.format == "csv":
        text = _compare_csv(points, tls, lse_line)
    else:
        text = _compare_table(tls, tls_vertical, lse, lse_line, lse_orth, lse_error, ratio)
    _write_output(args.output, text)
    return 2 if lse_error is not None else 0


def _compare_json(tls, tls_vertical, lse, lse_line, lse_orth, lse_error, ratio) -> str:
    doc: dict = {"tls": _fit_document(tls, per_point=False)}
    doc["tls"]["vertical_residual_sq"] = (
        float(tls_vertical) if tls_vertical is not None else None
    )
    if lse_error is not None:
        doc["lse"] = {"error": lse_error}
    else:
        doc["lse"] = {
            "coefficients": [float(c) for c in lse.coefficients],
            "offset": float(lse.offset),
            "dependent_col": int(lse.dependent_col),
            "vertical_residual_sq": float(lse.residual_sq),
            "anchor": [float(c) for c in lse_line.anchor],
            "direction": [float(c) for c in lse_line.direction],
            "orthogonal_sq_distance": float(lse_orth),
        }
    doc["ratio_orthogonal"] = float(ratio) if ratio is not None else None
    return json.dumps(doc, indent=2) + "\n"


def _compare_table(tls, tls_vertical, lse, lse_line, lse_orth, lse_error, ratio) -> str:
    lines = [
        "orthogonal (total least squares):",
        f"  anchor            {_fmt_vec(tls.line.anchor)}",
        f"  direction         {_fmt_vec(tls.line.direction)}",
        f"  orthogonal-sq     {_fmt(tls.total_sq_distance)}",
        f"  vertical-sq       "
        + (_fmt(tls_vertical) if tls_vertical is not None else "undefined"),
        f"  ambiguous         {'yes' if tls.eigen.ambiguous else 'no'}",
        "explicit (vertical least squares):",
    ]
    if lse_error is not None:
        lines.append(f"  error             {lse_error}")
    else:
        lines.extend(
            [
                f"  coefficients      {_fmt_vec(lse.coefficients)}",
                f"  offset            {_fmt(lse.offset)}",
                f"  vertical-sq       {_fmt(lse.residual_sq)}",
                f"  line-anchor       {_fmt_vec(lse_line.anchor)}",
                f"  line-direction    {_fmt_vec(lse_line.direction)}",
                f"  orthogonal-sq     {_fmt(lse_orth)}",
            ]
        )
    lines.append(
        "ratio explicit/orthogonal  "
        + (_fmt(ratio) if ratio is not None else "undefined")
    )
    return "\n".join(lines) + "\n"


def _compare_csv(points, tls, lse_line) -> str:
    from .geometry import line_distances_sq

    lines = [
        f"# tls_direction: {_repr_vec(tls.line.direction)}",
    ]
    if lse_line is not None:
        lines.append(f"# lse_direction: {_repr_vec(lse_line.direction)}")
        lines.append("index,tls_sq,lse_sq")
        lse_per = line_distances_sq(points, lse_line)
        for i, (a, b) in enumerate(zip(tls.per_point_sq, lse_per)):
            lines.append(f"{i},{_repr_num(a)},{_repr_num(b)}")
    else:
        lines.append("index,tls_sq")
        for i, a in enumerate(tls.per_point_sq):
            lines.append(f"{i},{_repr_num(a)}")
    return "\n".join(lines) + "\n"


def cmd_check(args) -> int:
    """Run the built-in diagnostics against an input cloud.

    Each line of the report is 'PASS name measured=... tol=...', or FAIL
    in the same shape, or 'SKIP name (reason)' for checks that do not apply
    to the input's dimension. Exit code is 1 when anything failed.
    """
    points = _read_points(args.input)
    config = SolverConfig(tol=args.tol, max_sweeps=args.max_sweeps)
    result = fit_tls_line(points, config)
    centered, _ = center(points)
    summary = accumulate_scatter(centered)
    direction = result.line.direction
    cloud_scale = summary.total_sq_norm
    rng = np.random.default_rng(args.seed)

    report: list[tuple[str, str, str]] = []

    measured = result.eigen.stationarity_residual
    tol = 1e-8 * cloud_scale
    report.append(_verdict("stationarity-residual", measured, tol))

    measured = float(np.linalg.norm(finite_diff_gradient(summary, direction)))
    tol = 1e-6 * cloud_scale
    report.append(_verdict("gradient-norm", measured, tol))

    worst = 0.0
    for _ in range(50):
        probe = rng.standard_normal(points.dim)
        if float(np.linalg.norm(probe)) == 0.0:
            continue
        form_a, form_b = stationarity_forms(summary, probe)
        scale = max(
            float(np.linalg.norm(form_a)),
            float(np.linalg.norm(form_b)),
            1e-30,
        )
        worst = max(worst, float(np.linalg.norm(form_a - form_b)) / scale)
    report.append(_verdict("stationarity-forms", worst, 1e-9))

    routes = [
        result.total_sq_distance,
        quadratic_objective(summary, direction),
        summary.total_sq_norm - result.eigen.rayleigh,
    ]
    measured = max(abs(a - b) for a in routes for b in routes)
    tol = 1e-9 * cloud_scale
    report.append(_verdict("objective-consistency", measured, tol))

    if points.dim <= 3:
        grid = grid_search_direction(points, args.resolution_deg)
        gap = grid.best_sq_distance - result.total_sq_distance
        res_rad = math.radians(args.resolution_deg)
        quantization = (
            float(result.eigen.spectrum[0] - result.eigen.spectrum[-1])
            * math.sin(res_rad) ** 2
        )
        tol = max(1e-4 * result.total_sq_distance, quantization, 1e-12 * cloud_scale)
        if gap < -1e-12 * cloud_scale:
            report.append(("FAIL", "grid-agreement", _measured_tol(gap, tol)))
        else:
            report.append(_verdict("grid-agreement", gap, tol))
        if result.eigen.ambiguous:
            report.append(
                ("SKIP", "grid-direction", "(dominant direction is ambiguous)")
            )
        else:
            angle_deg = math.degrees(_angle_rad(direction, grid.best_direction))
            tol_deg = max(0.5, 2.0 * args.resolution_deg)
            report.append(_verdict("grid-direction", angle_deg, tol_deg))
    else:
        report.append(
            ("SKIP", "grid-agreement", f"(grid oracle covers dim <= 3, input is {points.dim})")
        )
        report.append(
            ("SKIP", "grid-direction", f"(grid oracle covers dim <= 3, input is {points.dim})")
        )

    if points.dim == 3:
        closed_form = cubic_eigenvalues(summary.scatter)
        measured = float(np.max(np.abs(result.eigen.spectrum - closed_form)))
        tol = 1e-8 * cloud_scale
        report.append(_verdict("spectrum-cubic", measured, tol))
    else:
        report.append(
            ("SKIP", "spectrum-cubic", f"(closed form covers dim 3, input is {points.dim})")
        )

    lines = [f"{status} {name}  {detail}" for status, name, detail in report]
    failed = sum(1 for status, _, _ in report if status == "FAIL")
    lines.append(f"checks: {len(report)}  failed: {failed}")
    _write_output(args.output, "\n".join(lines) + "\n")
    return 1 if failed else 0


def _measured_tol(measured: float, tol: float) -> str:
    return f"measured={measured:.6g} tol={tol:.6g}"


def _verdict(name: str, measured: float, tol: float) -> tuple[str, str, str]:
    status = "PASS" if measured <= tol else "FAIL"
    return status, name, _measured_tol(measured, tol)


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the input-error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(3)


def _add_io_flags(sub, with_format: bool = True) -> None:
    sub.add_argument("--input", default="-", help="point file, or - for stdin")
    sub.add_argument("--output", default="-", help="output file, or - for stdout")
    if with_format:
        sub.add_argument(
            "--format",
            choices=("table", "json", "csv"),
            default="table",
            help="output style (default table)",
        )


def _add_solver_flags(sub) -> None:
    sub.add_argument(
        "--tol", type=float, default=1e-12, help="solver tolerance (default 1e-12)"
    )
    sub.add_argument(
        "--max-sweeps", type=int, default=64, help="solver sweep budget (default 64)"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="orthofit",
        description="Fit lines to point clouds by minimizing orthogonal distances.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_fit = subparsers.add_parser("fit", help="fit a line to a point cloud")
    _add_io_flags(p_fit)
    _add_solver_flags(p_fit)
    p_fit.add_argument(
        "--per-point",
        action="store_true",
        help="include per-point squared distances in table/json output",
    )
    p_fit.set_defaults(func=cmd_fit)

    p_gen = subparsers.add_parser("gen", help="generate a synthetic cloud as CSV")
    p_gen.add_argument("--output", default="-", help="output file, or - for stdout")
    p_gen.add_argument("--n", type=int, default=100, help="number of points")
    p_gen.add_argument("--dim", type=int, default=3, help="dimension")
    p_gen.add_argument("--seed", type=int, default=0, help="random seed")
    p_gen.add_argument(
        "--sigma", type=float, default=0.1, help="noise scale (0 for exact collinear)"
    )
    p_gen.add_argument(
        "--direction",
        default=None,
        help="line direction, comma separated (default: random unit vector)",
    )
    p_gen.add_argument(
        "--anchor", default=None, help="line anchor, comma separated (default: origin)"
    )
    p_gen.add_argument(
        "--t-range",
        type=float,
        nargs=2,
        default=(-1.0, 1.0),
        metavar=("MIN", "MAX"),
        help="parameter range along the line (default -1 1)",
    )
    p_gen.add_argument(
        "--noise",
        choices=("gaussian", "uniform"),
        default="gaussian",
        help="noise model (default gaussian)",
    )
    p_gen.set_defaults(func=cmd_gen)

    p_cmp = subparsers.add_parser(
        "compare", help="orthogonal fit vs. classical explicit fit"
    )
    _add_io_flags(p_cmp)
    _add_solver_flags(p_cmp)
    p_cmp.add_argument(
        "--dependent-col",
        type=int,
        default=-1,
        help="dependent coordinate for the explicit fit (default: last)",
    )
    p_cmp.set_defaults(func=cmd_compare)

    p_chk = subparsers.add_parser("check", help="run self-diagnostics on an input")
    _add_io_flags(p_chk, with_format=False)
    _add_solver_flags(p_chk)
    p_chk.add_argument("--seed", type=int, default=0, help="seed for probe directions")
    p_chk.add_argument(
        "--resolution-deg",
        type=float,
        default=0.5,
        help="grid oracle resolution in degrees (default 0.5)",
    )
    p_chk.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OrthofitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
