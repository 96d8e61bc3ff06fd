"""
Command-line interface for fisherquartic.

Usage:
    fisherquartic infer --k 1 --lambda 1
    fisherquartic table --format csv
    fisherquartic oracle --lambda 1,10 --basis-size 128
    fisherquartic check --suite all

Exit codes: 0 success, 1 check failure, 2 usage error, 3 convergence error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
import time
from contextlib import contextmanager
from dataclasses import asdict

import click

from .checks import run_suite
from .errors import ConvergenceError, DomainError
from .oracle import SolverConfig, cramer_rao_check, solve_ground_state
from .quartic import TABLE_LAMBDAS, Convention, OscillatorSpec, infer_ground_state
from .table import build_rows

__all__ = ["cli", "main"]

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3

TABLE_HEADER = ("lambda", "E_num", "E_inferred", "cr_product")


def parse_lambdas(value: str | None) -> list[float]:
    """Parse ``"1"`` or ``"0.1,1,10"`` into non-negative floats."""
    if value is None:
        return list(TABLE_LAMBDAS)
    parts = [p.strip() for p in value.split(",")]
    if not value.strip() or any(not p for p in parts):
        raise click.BadParameter("expected a real or a comma-separated list of reals", param_hint="--lambda")
    try:
        lams = [float(p) for p in parts]
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--lambda") from None
    if any(not math.isfinite(x) or x < 0 for x in lams):
        raise click.BadParameter("lambda values must be finite and >= 0", param_hint="--lambda")
    return lams


def fmt_sig(x: float) -> str:
    """9 significant digits, used for CSV and JSON."""
    return "nan" if x is None or math.isnan(x) else f"{x:.9g}"


def fmt_fixed(x: float | None) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "-"
    return f"{x:.6f}"


def _json_num(x: float | None):
    if x is None or math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(fmt_sig(x))


@contextmanager
def _output(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_records(out, fmt: str, command: str, header, rows, summary: dict, elapsed: float, text_lines=None):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt_sig(row[h]) if isinstance(row[h], float) else row[h] for h in header])
        out.write(buf.getvalue())
    elif fmt == "json":
        report = {
            "command": command,
            "rows": [{k: _json_num(v) if isinstance(v, float) else v for k, v in r.items()} for r in rows],
            "summary": {k: _json_num(v) if isinstance(v, float) else v for k, v in summary.items()},
            "timing": {"elapsed_seconds": round(elapsed, 6)},
        }
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        for line in text_lines or []:
            out.write(line + "\n")


def _command_echo() -> str:
    return " ".join(["fisherquartic", *sys.argv[1:]])


def _spec(k: float, lam: float, convention: str) -> OscillatorSpec:
    try:
        return OscillatorSpec(k, lam, Convention(convention))
    except DomainError as exc:
        raise click.UsageError(str(exc)) from None


common_format = click.option(
    "--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text", show_default=True
)
common_out = click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
                          help="Write the report here instead of stdout.")
common_k = click.option("--k", "k", type=float, default=1.0, show_default=True, help="Harmonic coefficient.")
common_convention = click.option(
    "--convention", type=click.Choice(["literature", "paper"]), default="literature", show_default=True
)
common_basis = click.option("--basis-size", type=click.IntRange(min=16), default=256, show_default=True)


@click.group()
@click.version_option(package_name="artifact")
def cli():
    """Quartic anharmonic oscillator ground states from Fisher-information inference."""


@cli.command()
@common_k
@click.option("--lambda", "lam", default="0", show_default=True, help="Anharmonicity (one value or a comma list).")
@common_convention
@common_format
@common_out
def infer(k, lam, convention, fmt, out):
    """Infer F2, F4, alpha, E, I, moments and the Cramer-Rao product."""
    start = time.perf_counter()
    lams = parse_lambdas(lam)
    header = ("lambda", "F2", "F4", "alpha", "E", "I", "x2", "x4", "cr_product")
    rows, lines = [], []
    for value in lams:
        r = infer_ground_state(_spec(k, value, convention))
        rows.append({
            "lambda": value, "F2": r.f2, "F4": r.f4, "alpha": r.alpha, "E": r.energy,
            "I": r.fisher_info, "x2": r.x2, "x4": r.x4, "cr_product": r.cr_product,
        })
    for row in rows:
        lines.append(f"k = {k:g}  lambda = {row['lambda']:g}  convention = {convention}")
        for key in header[1:]:
            lines.append(f"  {key:<11}{fmt_fixed(row[key]) if math.isfinite(row[key]) else row[key]}")
    summary = {"k": k, "convention": convention}
    with _output(out) as fh:
        _emit_records(fh, fmt, _command_echo(), header, rows, summary, time.perf_counter() - start, lines)


@cli.command()
@common_k
@click.option("--lambda", "lam", default=None, help="Comma list of anharmonicities (default: the reference grid).")
@common_convention
@common_basis
@common_format
@common_out
def table(k, lam, convention, basis_size, fmt, out):
    """Oracle and inferred energies side by side with the reference table."""
    start = time.perf_counter()
    lams = parse_lambdas(lam)
    built = build_rows(lams, k, Convention(convention), SolverConfig(basis_size=basis_size))
    rows = []
    for r in built:
        ref = r.reference
        rows.append({
            "lambda": r.lam, "E_num": r.e_num, "E_inferred": r.e_inferred, "cr_product": r.cr_product,
            "ref_E_num": ref.e_num if ref else None, "ref_E_inferred": ref.e_inferred if ref else None,
            "ref_cr_product": ref.cr_product if ref else None,
            "flagged": r.flagged, "error": r.error,
        })
    devs = [d for r in built if r.error is None for d in r.deviations.values()]
    failures = [r for r in built if r.error]
    summary = {
        "rows": len(built),
        "max_deviation": max(devs) if devs else None,
        "flagged": [r.lam for r in built if r.flagged],
        "failed": [r.lam for r in failures],
    }

    lines = [f"{'lambda':>10} {'E_num':>12} {'E=alpha/8':>12} {'f=I<x^2>':>12}   {'ref E_num':>10} {'ref E':>10} {'ref f':>10}"]
    for row in rows:
        mark = "  !" if row["flagged"] else ("  FAILED" if row["error"] else "")
        lines.append(
            f"{row['lambda']:>10g} {fmt_fixed(row['E_num']):>12} {fmt_fixed(row['E_inferred']):>12} "
            f"{fmt_fixed(row['cr_product']):>12}   {fmt_fixed(row['ref_E_num']):>10} "
            f"{fmt_fixed(row['ref_E_inferred']):>10} {fmt_fixed(row['ref_cr_product']):>10}{mark}"
        )
    if summary["max_deviation"] is not None:
        lines.append(f"max |computed - reference| = {summary['max_deviation']:.3e}")
    for r in failures:
        lines.append(f"lambda = {r.lam:g}: {r.error}")

    with _output(out) as fh:
        _emit_records(fh, fmt, _command_echo(), TABLE_HEADER, rows, summary, time.perf_counter() - start, lines)
    if failures:
        sys.exit(EXIT_CONVERGENCE)


@cli.command()
@common_k
@click.option("--lambda", "lam", default="0", show_default=True, help="Anharmonicity (one value or a comma list).")
@common_convention
@common_basis
@common_format
@common_out
def oracle(k, lam, convention, basis_size, fmt, out):
    """Solve the Schrodinger equation numerically for reference values."""
    start = time.perf_counter()
    lams = parse_lambdas(lam)
    config = SolverConfig(basis_size=basis_size)
    header = ("lambda", "E_num", "x2", "x4", "I", "momentum_variance", "cr_product", "refinement_shift")
    rows, lines, failed = [], [], []
    for value in lams:
        try:
            sol = solve_ground_state(_spec(k, value, convention), config)
        except ConvergenceError as exc:
            failed.append(value)
            lines.append(f"lambda = {value:g}: {exc}")
            continue
        rows.append({
            "lambda": value, "E_num": sol.eigenvalue, "x2": sol.x2, "x4": sol.x4, "I": sol.fisher_info,
            "momentum_variance": sol.momentum_variance, "cr_product": cramer_rao_check(sol),
            "refinement_shift": sol.refinement_shift,
        })
        lines.append(f"k = {k:g}  lambda = {value:g}  convention = {convention}")
        for key in header[1:-1]:
            lines.append(f"  {key:<19}{fmt_fixed(rows[-1][key])}")
        lines.append(f"  {'refinement_shift':<19}{sol.refinement_shift:.1e}")
    summary = {"basis_size": basis_size, "failed": failed}
    with _output(out) as fh:
        _emit_records(fh, fmt, _command_echo(), header, rows, summary, time.perf_counter() - start, lines)
    if failed:
        sys.exit(EXIT_CONVERGENCE)


@cli.command()
@click.option("--suite", type=click.Choice(["identities", "table", "all"]), default="all", show_default=True)
@common_basis
@common_format
@common_out
def check(suite, basis_size, fmt, out):
    """Run the identity and table check suites; exit 1 if any check fails."""
    start = time.perf_counter()
    results = run_suite(suite, SolverConfig(basis_size=basis_size))
    header = ("name", "value", "tolerance", "passed")
    rows = [asdict(r) for r in results]
    n_fail = sum(not r.passed for r in results)
    summary = {"suite": suite, "checks": len(results), "failed": n_fail}
    lines = [
        f"{'PASS' if r.passed else 'FAIL'}  {r.name:<52} {r.value:.3e}  (tol {r.tolerance:g})"
        + (f"  {r.detail}" if r.detail else "")
        for r in results
    ]
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    with _output(out) as fh:
        _emit_records(fh, fmt, _command_echo(), header, rows, summary, time.perf_counter() - start, lines)
    if n_fail:
        sys.exit(EXIT_CHECK_FAILED)


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="fisherquartic", standalone_mode=True)
    except ConvergenceError as exc:
        click.echo(f"convergence error: {exc}", err=True)
        sys.exit(EXIT_CONVERGENCE)


if __name__ == "__main__":
    main()
