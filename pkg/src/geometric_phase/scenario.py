"""Scenario file ingestion and CSV emission."""

import csv
import json
from collections.abc import Iterable
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from .logging_config import get_logger
from .models.report import SweepRow
from .models.scenario import DiagonalHamiltonian, Scenario
from .models.spectrum import Spectrum
from .models.trajectory import PhaseLedger, Trajectory
from .spectral import build_spectrum, commensurate_structure

logger = get_logger(__name__)

TRAJECTORY_COLUMNS = ["t", "s", "fidelity", "pancharatnam", "dynamical", "sb", "linear_law", "divergence"]
SWEEP_COLUMNS = ["theta", "closed_form", "pipeline", "sb_oracle", "max_discrepancy"]


class ScenarioError(ValueError):
    """A scenario file could not be read or failed validation."""


def _format(value: float) -> str:
    return f"{value:.15g}"


def _error_location(loc: tuple[int | str, ...]) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def parse_scenario_text(text: str, source: str = "<string>") -> Scenario:
    """Validate scenario JSON text; errors carry line/column or the field path."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{source}:{e.lineno}:{e.colno}: malformed scenario file: {e.msg}") from e

    if not isinstance(payload, dict):
        raise ScenarioError(f"{source}: scenario must be a single JSON object")

    try:
        return Scenario.model_validate(payload)
    except ValidationError as e:
        details = "; ".join(f"{_error_location(err['loc'])}: {err['msg']}" for err in e.errors())
        raise ScenarioError(f"{source}: invalid scenario: {details}") from e


def parse_scenario(path: Path | str) -> Scenario:
    """Read and validate a scenario file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(f"{path}: cannot read scenario file: {e.strerror or e}") from e

    scenario = parse_scenario_text(text, str(path))
    logger.debug(f"Loaded scenario {scenario.name or path.name} (dimension {scenario.dimension})")
    return scenario


def serialize_scenario(scenario: Scenario) -> str:
    """JSON text that :func:`parse_scenario_text` maps back to an equal scenario."""
    return json.dumps(scenario.model_dump(mode="json"), indent=2)


def scenario_spectrum(scenario: Scenario, hbar: float | None = None, method: str = "jacobi") -> Spectrum:
    """
    Spectrum of the scenario Hamiltonian.

    Diagonal blocks keep their rational levels exactly; dense blocks are
    diagonalized and rationalized with the scenario tolerances.
    """
    options = scenario.options
    hbar = scenario.hbar if hbar is None else hbar
    hamiltonian = scenario.hamiltonian

    if isinstance(hamiltonian, DiagonalHamiltonian):
        return commensurate_structure(hamiltonian.rational_eigenvalues(), scale=hamiltonian.scale, hbar=hbar)

    return build_spectrum(
        hamiltonian.to_array(),
        hbar=hbar,
        deg_tol=options.deg_tol,
        max_denominator=options.max_denominator,
        rat_tol=options.rat_tol,
        herm_tol=options.herm_tol,
        max_dimension=options.max_dimension,
        method=method,
    )


def write_trajectory_csv(path: Path, trajectory: Trajectory, ledger: PhaseLedger) -> None:
    """One row per sample: ledger columns then re/im of every state component."""
    n = trajectory.dimension
    header = TRAJECTORY_COLUMNS + [f"{part}_{k}" for k in range(n) for part in ("re", "im")]
    columns = np.column_stack(
        [
            ledger.times,
            ledger.distances,
            ledger.fidelity,
            ledger.pancharatnam,
            ledger.dynamical,
            ledger.sb,
            ledger.linear_law,
            ledger.divergence,
        ]
    )

    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row, state in zip(columns, trajectory.states, strict=True):
            amplitudes = [value for z in state for value in (z.real, z.imag)]
            writer.writerow([_format(x) for x in row] + [_format(x) for x in amplitudes])
    logger.debug(f"Wrote {trajectory.samples} samples to {path}")


def write_sweep_csv(path: Path, rows: Iterable[SweepRow]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    _format(row.theta),
                    _format(row.closed_form),
                    _format(row.pipeline),
                    "" if row.sb_oracle is None else _format(row.sb_oracle),
                    _format(row.max_discrepancy),
                ]
            )


def write_matrix_csv(path: Path, matrix: np.ndarray) -> None:
    """Row-major complex matrix, each entry as a re,im column pair."""
    n = matrix.shape[1]
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow([f"{part}_{k}" for k in range(n) for part in ("re", "im")])
        for row in matrix:
            writer.writerow([_format(value) for z in row for value in (z.real, z.imag)])
