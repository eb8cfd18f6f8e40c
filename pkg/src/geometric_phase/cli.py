import asyncio
import csv
import json
import math
from pathlib import Path
from typing import Any

import numpy as np
import typer
from rich.console import Console
from rich.table import Table

from . import __version__
from .checks import CHECK_REGISTRY, VerificationContext, register_all_checks
from .dynamics import detect_cycle, fs_length, phase_ledger, propagate_exact, propagate_rk4
from .logging_config import get_logger, setup_cli_logging
from .models import Scenario
from .operators import read_clock, regauge, two_level_gamma, two_level_sweep
from .rational import format_rational
from .scenario import ScenarioError, parse_scenario, write_matrix_csv, write_sweep_csv, write_trajectory_csv
from .verifier import ScenarioVerifier

app = typer.Typer(
    name="geometric-phase",
    help="Cyclic evolution, geometric phases and time operators of finite quantum systems",
    add_completion=False,
)
console = Console()
logger = get_logger(__name__)

# Set up CLI logging on module import
setup_cli_logging()

METHODS = ("exact", "rk4")
ORDERS = ("normal", "reversed")
EIGENSOLVERS = ("jacobi", "lapack")


def version_callback(value: bool) -> None:
    if value:
        # Use print for version info to ensure it's always shown
        print(f"geometric-phase version {__version__}")
        raise typer.Exit()


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:.12g}"


def _options(ctx: typer.Context) -> dict[str, Any]:
    return ctx.obj or {"hbar": None, "eigensolver": "jacobi"}


def _load(file: Path) -> Scenario:
    try:
        return parse_scenario(file)
    except ScenarioError as e:
        logger.error(str(e))
        raise typer.Exit(1) from e


def _context(ctx: typer.Context, file: Path) -> VerificationContext:
    scenario = _load(file)
    options = _options(ctx)
    try:
        return VerificationContext(scenario, hbar=options["hbar"], method=options["eigensolver"])
    except ValueError as e:
        logger.error(f"{file}: {e}")
        raise typer.Exit(1) from e


def _analysis_payload(vctx: VerificationContext) -> dict[str, Any]:
    analysis = vctx.analysis
    payload: dict[str, Any] = {
        "scenario": vctx.scenario.name,
        "hbar": vctx.hbar,
        "spectrum_commensurate": vctx.spectrum.commensurate,
        "analysis": analysis.model_dump(mode="json"),
    }
    if vctx.moving_cycle:
        payload["selection"] = vctx.selection.model_dump(mode="json")
        payload["operator"] = vctx.operator.model_dump(mode="json")
    return payload


@app.command()
def analyze(
    ctx: typer.Context,
    file: Path = typer.Argument(..., help="Scenario file"),
    output: Path | None = typer.Option(None, "--output", "-o", help="Write the analysis as JSON"),
    operator_csv: Path | None = typer.Option(None, "--operator-csv", help="Write the geometric operator matrix"),
) -> None:
    """Period, phases, p-coefficients and selection rule of the scenario state"""
    vctx = _context(ctx, file)
    analysis = vctx.analysis
    supp = vctx.support

    table = Table(title=f"Cyclic analysis of {vctx.scenario.name or file.name}")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="green")

    if not analysis.cyclic:
        verdict = "not cyclic"
    elif analysis.stationary:
        verdict = "stationary; gamma = 0"
    else:
        verdict = "cyclic"
    table.add_row("verdict", verdict)
    table.add_row("support levels", ", ".join(_fmt(float(e)) for e in supp.energies))
    table.add_row("support weights", ", ".join(_fmt(float(w)) for w in supp.probabilities))
    table.add_row("<H>", _fmt(analysis.expectation_energy))
    table.add_row("Delta H", _fmt(analysis.energy_uncertainty))

    if analysis.cyclic:
        table.add_row("rational levels", ", ".join(format_rational(r) for r in supp.levels))
        table.add_row("L", "-" if analysis.period_lcm is None else format_rational(analysis.period_lcm))
        table.add_row("tau", _fmt(analysis.period))
        table.add_row("p", ", ".join(str(p) for p in analysis.p_coefficients))
        table.add_row("total phase", f"{_fmt(analysis.total_phase)} (winding {analysis.total_phase_winding})")
        table.add_row("Gamma (unreduced)", _fmt(analysis.unreduced_phase))
        table.add_row("gamma", _fmt(analysis.geometric_phase))
        table.add_row("S", _fmt(analysis.length))
    else:
        table.add_row("diagnostic", analysis.diagnostic or "-")

    if vctx.moving_cycle:
        selection = vctx.selection
        table.add_row("omega'", str(selection.omega_prime) if selection.omega_prime else "-")
        table.add_row("omega", str(selection.omega) if selection.omega else "-")
        table.add_row("lattice index", str(selection.lattice_index) if selection.lattice_index is not None else "-")
        allowed = selection.allowed_phases(limit=8)
        if allowed:
            table.add_row("allowed phases", ", ".join(_fmt(p) for p in allowed))
        operator = vctx.operator
        table.add_row("G entries", ", ".join(_fmt(float(e)) for e in operator.level_entries))

        if supp.size == 2:
            lower = float(supp.probabilities[0] / np.sum(supp.probabilities))
            theta = math.acos(min(1.0, max(-1.0, 1.0 - 2.0 * lower)))
            table.add_row("theta", _fmt(theta))
            table.add_row("two-level closed form", _fmt(two_level_gamma(theta, lambda0_less=True)))
            upper = regauge(operator, vctx.spectrum, supp.indices[-1])
            table.add_row("G entries (upper gauge)", ", ".join(_fmt(float(e)) for e in upper.level_entries))

    console.print(table)

    if output:
        output.parent.mkdir(parents=True, exist_ok=True)
        with open(output, "w") as f:
            json.dump(_analysis_payload(vctx), f, indent=2)
        logger.info(f"Analysis saved to {output}")

    if operator_csv:
        if not vctx.moving_cycle:
            logger.error("No geometric operator: state is stationary or not cyclic")
            raise typer.Exit(1)
        write_matrix_csv(operator_csv, vctx.operator.matrix)
        logger.info(f"Operator saved to {operator_csv}")


@app.command()
def evolve(
    ctx: typer.Context,
    file: Path = typer.Argument(..., help="Scenario file"),
    t_max: float = typer.Option(..., "--t-max", help="End of the time window"),
    samples: int = typer.Option(2048, "--samples", help="Number of samples including t = 0"),
    method: str = typer.Option("exact", "--method", help="exact or rk4"),
    out: Path = typer.Option(..., "--out", help="Trajectory CSV path"),
    renormalize: bool = typer.Option(False, "--renormalize", help="Renormalize after each RK4 step"),
) -> None:
    """Propagate the scenario state and write the trajectory with its phase ledger"""
    if t_max <= 0:
        raise typer.BadParameter("t-max must be positive", param_hint="--t-max")
    if samples < 2:
        raise typer.BadParameter("at least two samples are needed", param_hint="--samples")
    if method not in METHODS:
        raise typer.BadParameter(f"method must be one of {', '.join(METHODS)}", param_hint="--method")

    vctx = _context(ctx, file)
    gauge = vctx.gauge
    try:
        if method == "exact":
            times = np.linspace(0.0, t_max, samples)
            trajectory = propagate_exact(vctx.spectrum, vctx.state, times, gauge=gauge)
        else:
            dt = t_max / (samples - 1)
            hamiltonian = vctx.scenario.hamiltonian.to_array()
            trajectory = propagate_rk4(
                hamiltonian, vctx.state, dt, samples - 1, gauge=gauge, hbar=vctx.hbar, renormalize=renormalize
            )
        ledger = phase_ledger(trajectory, vctx.analysis)
        write_trajectory_csv(out, trajectory, ledger)
    except OSError as e:
        logger.error(f"Cannot write {out}: {e.strerror or e}")
        raise typer.Exit(1) from e
    except ValueError as e:
        logger.error(str(e))
        raise typer.Exit(1) from e

    length = fs_length(trajectory)
    console.print(f"samples: {trajectory.samples}")
    console.print(f"final fidelity: {_fmt(float(ledger.fidelity[-1]))}")
    console.print(f"final sb phase: {_fmt(float(ledger.sb[-1]))}")
    console.print(f"fs length: {_fmt(length.total_length)} (geodesic {_fmt(length.geodesic_length)})")
    if trajectory.samples >= 3 and trajectory.speed > 0:
        detection = detect_cycle(trajectory, vctx.options.fidelity_tol)
        if detection.detected:
            console.print(f"detected period: {_fmt(detection.period)}")
        else:
            console.print(f"no return within window (best fidelity {_fmt(detection.best_fidelity)})")
    for warning in trajectory.warnings:
        console.print(f"[yellow]warning:[/yellow] {warning}")
    logger.info(f"Trajectory saved to {out}")


@app.command()
def verify(
    ctx: typer.Context,
    file: Path = typer.Argument(..., help="Scenario file"),
    as_json: bool = typer.Option(False, "--json", help="Print the report as JSON"),
) -> None:
    """Run the invariant suite; exit code 1 when any check fails"""
    options = _options(ctx)
    verifier = ScenarioVerifier(hbar=options["hbar"], method=options["eigensolver"])
    report = verifier.verify_file(file)

    if as_json:
        typer.echo(report.model_dump_json(indent=2))
    elif report.error_message:
        typer.echo(f"ERROR {report.error_message}", err=True)
    else:
        for check in report.checks:
            typer.echo(check.line())
        typer.echo(f"SUMMARY passed={report.passed} failed={report.failed} skipped={report.skipped}")

    raise typer.Exit(report.exit_code)


@app.command()
def clock(
    ctx: typer.Context,
    file: Path = typer.Argument(..., help="Scenario file"),
    t1: float = typer.Option(..., "--t1", help="First reading time"),
    t2: float = typer.Option(..., "--t2", help="Second reading time"),
) -> None:
    """Read elapsed time off the time operator between t1 and t2"""
    if t1 < 0:
        raise typer.BadParameter("t1 must be non-negative", param_hint="--t1")
    if t1 >= t2:
        raise typer.BadParameter("t1 must be smaller than t2", param_hint="--t2")

    vctx = _context(ctx, file)
    try:
        reading = read_clock(vctx.spectrum, vctx.state, vctx.analysis, t1, t2)
    except ValueError as e:
        logger.error(str(e))
        raise typer.Exit(1) from e

    console.print(f"<T>(t1): {_fmt(reading.expect_T1)}")
    console.print(f"<T>(t2): {_fmt(reading.expect_T2)}")
    console.print(f"estimate: {_fmt(reading.estimate)}")
    console.print(f"elapsed: {_fmt(reading.elapsed)}")
    console.print(f"error: {reading.error:.3e}")


@app.command()
def sweep_two_level(
    steps: int = typer.Option(100, "--steps", help="Number of theta values on [0, pi]"),
    order: str = typer.Option("normal", "--order", help="normal (lambda0 < lambda1) or reversed"),
    out: Path = typer.Option(..., "--out", help="Sweep CSV path"),
) -> None:
    """Two-level geometric phase over the Bloch polar angle by three routes"""
    if steps < 2:
        raise typer.BadParameter("at least two steps are needed", param_hint="--steps")
    if order not in ORDERS:
        raise typer.BadParameter(f"order must be one of {', '.join(ORDERS)}", param_hint="--order")

    rows = two_level_sweep(steps, lambda0_less=order == "normal")
    try:
        write_sweep_csv(out, rows)
    except OSError as e:
        logger.error(f"Cannot write {out}: {e.strerror or e}")
        raise typer.Exit(1) from e

    worst = max(row.max_discrepancy for row in rows)
    console.print(f"rows: {len(rows)}")
    console.print(f"max discrepancy: {worst:.3e}")
    logger.info(f"Sweep saved to {out}")


@app.command()
def batch(
    ctx: typer.Context,
    files: list[Path] = typer.Argument(..., help="Scenario files"),
    output_dir: Path = typer.Option(Path("results"), "--output-dir", "-o", help="Output directory for reports"),
    max_concurrent: int = typer.Option(4, "--max-concurrent", "-c", help="Maximum concurrent verifications"),
) -> None:
    """Verify many scenario files concurrently"""
    if max_concurrent < 1:
        raise typer.BadParameter("must be at least 1", param_hint="--max-concurrent")

    options = _options(ctx)
    verifier = ScenarioVerifier(hbar=options["hbar"], method=options["eigensolver"], max_concurrent=max_concurrent)
    reports = asyncio.run(verifier.verify_multiple(files))

    output_dir.mkdir(parents=True, exist_ok=True)
    csv_output = output_dir / "verify_summary.csv"
    with open(csv_output, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["scenario", "status", "passed", "failed", "skipped", "error"])
        for report in reports:
            writer.writerow(
                [
                    report.scenario,
                    "pass" if report.success else "fail",
                    report.passed,
                    report.failed,
                    report.skipped,
                    report.error_message or "",
                ]
            )

    # Individual JSON reports, numbered to keep equal file names apart
    for index, (path, report) in enumerate(zip(files, reports, strict=True)):
        report_file = output_dir / f"{index:03d}_{path.stem}.json"
        with open(report_file, "w") as f:
            f.write(report.model_dump_json(indent=2))

    table = Table(title="Batch Verification Summary")
    table.add_column("Scenario", style="cyan")
    table.add_column("Status", style="green")
    table.add_column("Passed", style="green")
    table.add_column("Failed", style="red")
    table.add_column("Skipped", style="yellow")
    for report in reports:
        table.add_row(
            report.scenario,
            "✓" if report.success else "✗",
            str(report.passed),
            str(report.failed),
            str(report.skipped),
        )
    console.print(table)
    logger.info(f"Results saved to {output_dir}/")

    if any(not report.success for report in reports):
        raise typer.Exit(1)


@app.command()
def list_checks() -> None:
    """List all registered verification checks"""
    register_all_checks()

    table = Table(title="Verification Checks")
    table.add_column("Name", style="cyan")
    table.add_column("Relation", style="yellow")
    table.add_column("Tolerance", style="green")

    for name, check_class in CHECK_REGISTRY.items():
        check = check_class()
        tolerance = "-" if check.tolerance is None else f"{check.tolerance:.0e}"
        table.add_row(name, check.reference, tolerance)

    console.print(table)


@app.callback()
def main(
    ctx: typer.Context,
    version: bool = typer.Option(
        None, "--version", "-v", callback=version_callback, is_eager=True, help="Show version"
    ),
    hbar: float | None = typer.Option(None, "--hbar", help="Override the scenario's hbar"),
    eigensolver: str = typer.Option("jacobi", "--eigensolver", help="jacobi or lapack"),
) -> None:
    """Geometric phase and time operator toolkit"""
    if hbar is not None and hbar <= 0:
        raise typer.BadParameter("hbar must be positive", param_hint="--hbar")
    if eigensolver not in EIGENSOLVERS:
        raise typer.BadParameter(f"eigensolver must be one of {', '.join(EIGENSOLVERS)}", param_hint="--eigensolver")
    ctx.obj = {"hbar": hbar, "eigensolver": eigensolver}


if __name__ == "__main__":
    app()
