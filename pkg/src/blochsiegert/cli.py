"""Command-line front end: ``blochsiegert {shift,table,coeffs,scan}``.

Exit codes: 0 success, 2 usage error, 3 numerical (Floquet) failure.
"""
from __future__ import annotations

import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import click

from . import __version__, kernels
from .approx import (
    RabiParams,
    ShiftReport,
    asymptotic_shift,
    extrapolated_shift,
    pt_shift,
    rwa_shift,
)
from .errors import BlochSiegertError
from .floquet import FloquetConfig, find_resonance
from .series import SUPPORTED_ORDERS, asymptotic_divisor, derive_formula

TABLE1_RATIOS = (1.0, 3.5, 6.0, 8.5, 11.0, 13.5, 16.0, 18.5, 21.0)
DEFAULT_TABLE_METHODS = ("numerical", "extrap6", "extrap8")
FORMATS = ("text", "csv", "json")
EXIT_NUMERICAL = 3


@dataclass
class TableRow:
    """Relative shifts ``shift / omega0`` for one ``A / omega0`` ratio."""

    ratio: float
    values: dict[str, float | None] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)


def method_label(token: str, default_order: int) -> str:
    """Normalize a method token (``extrap``, ``extrap6``, ``floquet``...) to a label."""
    t = token.strip().lower()
    if t in ("numerical", "floquet"):
        return "numerical"
    if t in ("rwa", "asymptotic"):
        return t
    for prefix in ("extrap", "pt"):
        if t.startswith(prefix):
            rest = t[len(prefix):]
            order = default_order if rest == "" else int(rest) if rest.isdigit() else None
            if order not in SUPPORTED_ORDERS:
                raise click.BadParameter(
                    f"{token!r}: order must be one of {', '.join(map(str, SUPPORTED_ORDERS))}"
                )
            return f"{prefix}{order}"
    raise click.BadParameter(
        f"unknown method {token!r} (choose from pt, extrap, rwa, asymptotic, floquet/numerical)"
    )


def parse_methods(values: Sequence[str], default_order: int) -> list[str]:
    labels: list[str] = []
    for value in values:
        for token in value.split(","):
            if token.strip():
                label = method_label(token, default_order)
                if label not in labels:
                    labels.append(label)
    if not labels:
        raise click.BadParameter("at least one method is required")
    return labels


def evaluate(label: str, params: RabiParams, cfg: FloquetConfig) -> ShiftReport:
    if label == "numerical":
        return find_resonance(params, cfg)
    if label == "rwa":
        return rwa_shift(params)
    if label == "asymptotic":
        return asymptotic_shift(params)
    if label.startswith("extrap"):
        return extrapolated_shift(params, int(label[6:]))
    if label.startswith("pt"):
        return pt_shift(params, int(label[2:]))
    raise ValueError(f"unknown method label {label!r}")


def _table_row(ratio: float, labels: Sequence[str], cfg: FloquetConfig) -> TableRow:
    row = TableRow(ratio)
    params = RabiParams(1.0, ratio)
    for label in labels:
        try:
            row.values[label] = evaluate(label, params, cfg).relative_shift
        except BlochSiegertError as exc:
            row.values[label] = None
            row.errors[label] = str(exc)
    return row


def _scan_point(omega0: float, amplitude: float, labels: Sequence[str], cfg: FloquetConfig):
    out = []
    params = RabiParams(omega0, amplitude)
    for label in labels:
        try:
            out.append((label, evaluate(label, params, cfg).shift, None))
        except BlochSiegertError as exc:
            out.append((label, None, str(exc)))
    return out


def run_batch(fn: Callable, args_list: list[tuple], parallel: int) -> list:
    """Run ``fn(*args)`` for each entry; results come back in input order."""
    if parallel <= 1 or len(args_list) <= 1:
        return [fn(*args) for args in args_list]
    with ProcessPoolExecutor(max_workers=parallel) as pool:
        futures = [pool.submit(fn, *args) for args in args_list]
        return [f.result() for f in futures]


def fmt6(value: float | None) -> str:
    return "ERR" if value is None else f"{value:.6f}"


def fmt_num(value: float) -> str:
    return repr(float(value))


def render_csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def render_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows)
    return "\n".join(lines) + "\n"


def render_json(rows: list, config: dict) -> str:
    return json.dumps({"rows": rows, "config": config, "version": __version__}, indent=2) + "\n"


def _resolve_format(ctx: click.Context, fmt: str | None) -> str:
    return fmt or ctx.obj.get("format") or "text"


def _resolve_parallel(ctx: click.Context, parallel: int | None) -> int:
    return parallel if parallel is not None else ctx.obj.get("parallel", 1)


def _floquet_options(f):
    options = [
        click.option("--omega-tol", type=click.FloatRange(min=0, min_open=True), default=1e-6,
                     show_default=True, help="Resonance tolerance, relative to omega0."),
        click.option("--truncation-rtol", type=click.FloatRange(min=0, min_open=True), default=1e-5,
                     show_default=True),
        click.option("--max-n-photon", type=click.IntRange(min=1), default=200, show_default=True),
        click.option("--bracket-width", type=click.FloatRange(min=0, min_open=True), default=0.1,
                     show_default=True),
        click.option("--solver", type=click.Choice(["auto", "jacobi", "lapack"]), default="auto",
                     show_default=True),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _make_config(omega_tol, truncation_rtol, max_n_photon, bracket_width, solver) -> FloquetConfig:
    return FloquetConfig(
        omega_tol=omega_tol,
        truncation_rtol=truncation_rtol,
        max_n_photon=max_n_photon,
        bracket_width=bracket_width,
        solver=solver,
    )


_format_option = click.option("--format", "fmt", type=click.Choice(FORMATS), default=None,
                              help="Output format (overrides the global flag).")
_parallel_option = click.option("--parallel", type=click.IntRange(min=1), default=None,
                                help="Worker processes for independent rows.")


@click.group()
@click.version_option(__version__, prog_name="blochsiegert")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="text", show_default=True)
@click.option("--parallel", type=click.IntRange(min=1), default=1, show_default=True)
@click.pass_context
def main(ctx: click.Context, fmt: str, parallel: int):
    """Bloch-Siegert shift of the Rabi model: closed forms and Floquet-exact values."""
    ctx.ensure_object(dict)
    ctx.obj["format"] = fmt
    ctx.obj["parallel"] = parallel


@main.command()
@click.option("--omega0", type=click.FloatRange(min=0, min_open=True), required=True)
@click.option("--amplitude", type=click.FloatRange(min=0), required=True)
@click.option("--method", "methods", multiple=True, default=("extrap",), show_default=True,
              help="pt, extrap, rwa, asymptotic, floquet; repeatable or comma separated.")
@click.option("--order", type=click.Choice([str(o) for o in SUPPORTED_ORDERS]), default="8",
              show_default=True, help="Order for bare pt/extrap methods.")
@_format_option
@_floquet_options
@click.pass_context
def shift(ctx, omega0, amplitude, methods, order, fmt, **floquet_opts):
    """Compute the shift for one (omega0, amplitude) pair."""
    fmt = _resolve_format(ctx, fmt)
    labels = parse_methods(methods, int(order))
    cfg = _make_config(**floquet_opts)
    params = RabiParams(omega0, amplitude)
    reports = []
    for label in labels:
        try:
            reports.append(evaluate(label, params, cfg))
        except BlochSiegertError as exc:
            click.echo(f"error: {label}: {exc}", err=True)
            diagnostics = getattr(exc, "diagnostics", None)
            if diagnostics:
                click.echo(json.dumps(diagnostics, default=str), err=True)
            ctx.exit(EXIT_NUMERICAL)
    header = ["method", "omega0", "amplitude", "shift", "resonance"]
    if fmt == "json":
        config = {"methods": labels, "floquet": cfg.to_dict(), "backend": kernels.BACKEND}
        click.echo(render_json([r.to_dict() for r in reports], config), nl=False)
        return
    rows = [[str(r.method).lower(), fmt_num(omega0), fmt_num(amplitude), fmt6(r.shift),
             fmt6(r.resonance)] for r in reports]
    out = render_csv(header, rows) if fmt == "csv" else render_text(header, rows)
    click.echo(out, nl=False)


def _parse_ratios(ctx, param, value):
    if value is None:
        return TABLE1_RATIOS
    try:
        ratios = tuple(float(v) for v in value.split(",") if v.strip())
    except ValueError:
        raise click.BadParameter(f"not a comma separated list of numbers: {value!r}")
    if not ratios or any(not r > 0 for r in ratios):
        raise click.BadParameter("ratios must be positive")
    return ratios


@main.command()
@click.option("--ratios", callback=_parse_ratios, default=None,
              help="Comma separated A/omega0 values (default: the nine Table 1 rows).")
@click.option("--methods", "methods", multiple=True, default=DEFAULT_TABLE_METHODS,
              show_default=True)
@click.option("--fast", is_flag=True, help="Skip the Floquet column (extrap8 stands in).")
@_format_option
@_parallel_option
@_floquet_options
@click.pass_context
def table(ctx, ratios, methods, fast, fmt, parallel, **floquet_opts):
    """Relative shifts (omega0 = 1) for a list of drive ratios."""
    fmt = _resolve_format(ctx, fmt)
    parallel = _resolve_parallel(ctx, parallel)
    labels = parse_methods(methods, 8)
    if fast and "numerical" in labels:
        labels = [label for label in labels if label != "numerical"]
        if "extrap8" not in labels:
            labels.append("extrap8")
    cfg = _make_config(**floquet_opts)
    rows = run_batch(_table_row, [(r, labels, cfg) for r in ratios], parallel)
    failed = any(row.errors for row in rows)
    for row in rows:
        for label, message in row.errors.items():
            click.echo(f"error: ratio {row.ratio!r}, {label}: {message}", err=True)
    if fmt == "json":
        config = {"ratios": list(ratios), "methods": labels, "omega0": 1.0,
                  "floquet": cfg.to_dict(), "backend": kernels.BACKEND}
        payload = []
        for row in rows:
            entry = {"ratio": row.ratio, **row.values}
            if row.errors:
                entry["errors"] = row.errors
            payload.append(entry)
        click.echo(render_json(payload, config), nl=False)
    else:
        header = ["ratio", *labels]
        body = [[fmt_num(row.ratio), *(fmt6(row.values[label]) for label in labels)] for row in rows]
        click.echo(render_csv(header, body) if fmt == "csv" else render_text(header, body), nl=False)
    if failed:
        ctx.exit(EXIT_NUMERICAL)


@main.command()
@click.option("--order", "orders", type=click.Choice([str(o) for o in SUPPORTED_ORDERS]),
              multiple=True, help="Formula order (repeatable; default all).")
@_format_option
@click.pass_context
def coeffs(ctx, orders, fmt):
    """Exact radicand coefficients of the extrapolation formulas."""
    fmt = _resolve_format(ctx, fmt)
    orders = [int(o) for o in orders] or list(SUPPORTED_ORDERS)
    formulas = [derive_formula(n) for n in orders]
    if fmt == "json":
        payload = [{**f.to_dict(), "asymptotic_divisor": asymptotic_divisor(f)} for f in formulas]
        click.echo(render_json(payload, {"orders": orders}), nl=False)
        return
    if fmt == "csv":
        body = []
        for f in formulas:
            div = f"{asymptotic_divisor(f):.6g}"
            for power, c in enumerate(f.radicand.coeffs):
                body.append([str(f.order), str(2 * power), str(c), div])
        click.echo(render_csv(["order", "power", "coefficient", "asymptotic_divisor"], body), nl=False)
        return
    lines = []
    for f in formulas:
        terms = " + ".join(
            "1" if k == 0 else f"{c}*x^{2 * k}" for k, c in enumerate(f.radicand.coeffs)
        )
        lines.append(f"order {f.order}")
        lines.append(f"  radicand (x = A/omega0): {terms}")
        lines.append(f"  coefficients: {', '.join(str(c) for c in f.d)}")
        lines.append(f"  asymptotic divisor: {asymptotic_divisor(f):.6g}")
    click.echo("\n".join(lines) + "\n", nl=False)


@main.command()
@click.option("--omega0", type=click.FloatRange(min=0, min_open=True), default=1.0, show_default=True)
@click.option("--a-min", type=click.FloatRange(min=0), required=True)
@click.option("--a-max", type=float, required=True)
@click.option("--points", type=click.IntRange(min=2), default=50, show_default=True)
@click.option("--methods", "methods", multiple=True, default=("extrap8",), show_default=True)
@click.option("--order", type=click.Choice([str(o) for o in SUPPORTED_ORDERS]), default="8")
@_format_option
@_parallel_option
@_floquet_options
@click.pass_context
def scan(ctx, omega0, a_min, a_max, points, methods, order, fmt, parallel, **floquet_opts):
    """Shift versus amplitude on an evenly spaced grid."""
    if not a_max > a_min:
        raise click.BadParameter("--a-max must exceed --a-min", param_hint="--a-max")
    fmt = _resolve_format(ctx, fmt)
    parallel = _resolve_parallel(ctx, parallel)
    labels = parse_methods(methods, int(order))
    cfg = _make_config(**floquet_opts)
    step = (a_max - a_min) / (points - 1)
    grid = [a_min + i * step for i in range(points - 1)] + [a_max]
    results = run_batch(_scan_point, [(omega0, a, labels, cfg) for a in grid], parallel)
    failed = False
    rows = []
    for amplitude, point in zip(grid, results):
        for label, value, error in point:
            if error is not None:
                failed = True
                click.echo(f"error: amplitude {amplitude!r}, {label}: {error}", err=True)
            rows.append((amplitude, label, value))
    if fmt == "json":
        config = {"omega0": omega0, "a_min": a_min, "a_max": a_max, "points": points,
                  "methods": labels, "floquet": cfg.to_dict(), "backend": kernels.BACKEND}
        payload = [{"amplitude": a, "method": m, "shift": v} for a, m, v in rows]
        click.echo(render_json(payload, config), nl=False)
    else:
        body = [[fmt_num(a), m, fmt6(v)] for a, m, v in rows]
        header = ["amplitude", "method", "shift"]
        click.echo(render_csv(header, body) if fmt == "csv" else render_text(header, body), nl=False)
    if failed:
        ctx.exit(EXIT_NUMERICAL)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
