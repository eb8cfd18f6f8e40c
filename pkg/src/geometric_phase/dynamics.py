"""
Numerical oracles: exact spectral and RK4 propagation, Fubini-Study length,
phase ledger, equation-of-motion residuals and cycle detection.

All propagation uses the shifted Hamiltonian H' = H - gauge.
"""

import math
from collections.abc import Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import minimize_scalar

from .logging_config import get_logger
from .models.cycle import CyclicAnalysis
from .models.operators import GeometricOperator
from .models.spectrum import Spectrum
from .models.trajectory import (
    CycleDetection,
    EomResidual,
    FubiniStudyLength,
    PhaseLedger,
    Trajectory,
    TrajectoryMethod,
)
from .spectral import check_hermitian, check_state, diagonalize
from .utils.angles import circle_distances

logger = get_logger(__name__)

DEFAULT_EPS_SUPPORT = 1e-12
NORM_DRIFT_WARNING = 1e-6
ORTHOGONAL_OVERLAP = 1e-9
BRANCH_JUMP = math.pi / 2
STENCIL_FRACTION = 1e-4


def _check_times(times: Sequence[float] | np.ndarray) -> np.ndarray:
    grid = np.asarray(times, dtype=float).reshape(-1)
    if grid.size == 0:
        raise ValueError("at least one sample time is required")
    if grid[0] != 0.0:
        raise ValueError(f"times must start at 0, got {grid[0]!r}")
    if np.any(np.diff(grid) < 0):
        raise ValueError("times must be nondecreasing")
    return grid


def minimum_gauge(spectrum: Spectrum, state: np.ndarray, eps_support: float = DEFAULT_EPS_SUPPORT) -> float:
    """Lowest level energy carrying weight above ``eps_support``."""
    weights = spectrum.level_weights(state)
    occupied = np.flatnonzero(weights > eps_support)
    if occupied.size == 0:
        raise ValueError(f"no level carries weight above eps_support={eps_support:g}")
    return float(spectrum.eigenvalues[occupied[0]])


def _speed(hamiltonian: np.ndarray, psi: np.ndarray, hbar: float) -> float:
    h_psi = hamiltonian @ psi
    mean = np.vdot(psi, h_psi).real
    return float(np.linalg.norm(h_psi - mean * psi)) / hbar


def stencil_times(
    centres: Sequence[float],
    step: float | None = None,
    norm: float = 1.0,
    hbar: float = 1.0,
) -> tuple[np.ndarray, list[int]]:
    """
    Sample times 0, c - h, c, c + h for each centre c, plus the positions of the centres.

    The default step is h = 1e-4 * hbar / norm, with ``norm`` the largest
    shifted level energy, small enough for second-order central
    differences to meet 1e-6.
    """
    if step is None:
        step = STENCIL_FRACTION * hbar / norm if norm > 0 else STENCIL_FRACTION * hbar
    if step <= 0:
        raise ValueError("stencil step must be positive")

    times = [0.0]
    positions = []
    for centre in sorted(centres):
        if centre - step < times[-1] or centre - step <= 0:
            raise ValueError(f"stencil around t={centre!r} overlaps its predecessor or t = 0")
        times.extend([centre - step, centre, centre + step])
        positions.append(len(times) - 2)
    return np.array(times), positions


def propagate_exact(
    spectrum: Spectrum,
    state: np.ndarray,
    times: Sequence[float] | np.ndarray,
    gauge: float | None = None,
) -> Trajectory:
    """
    Spectral propagation psi(t) = sum_k exp(-i (lambda_k - gauge) t / hbar) P_k psi.

    Incommensurate spectra are fine; ``gauge`` defaults to the lowest
    occupied level.
    """
    psi = check_state(state, spectrum.dimension)
    grid = _check_times(times)
    if gauge is None:
        gauge = minimum_gauge(spectrum, psi)

    hbar = spectrum.hbar
    projections = np.array([spectrum.projector(k) @ psi for k in range(spectrum.level_count)])
    phases = np.exp(-1j * np.outer(grid, spectrum.eigenvalues - gauge) / hbar)
    states = phases @ projections

    hamiltonian = spectrum.matrix()
    speed = _speed(hamiltonian, psi, hbar)
    return Trajectory(
        gauge=gauge,
        hbar=hbar,
        times=grid,
        distances=speed * grid,
        states=states,
        speed=speed,
        method=TrajectoryMethod.EXACT,
        hamiltonian=hamiltonian,
        spectrum=spectrum,
    )


def propagate_rk4(
    H: np.ndarray,
    state: np.ndarray,
    dt: float,
    steps: int,
    gauge: float | None = None,
    hbar: float = 1.0,
    renormalize: bool = False,
) -> Trajectory:
    """
    Classical fourth-order Runge-Kutta for i hbar d/dt psi = H' psi.

    Distances come from :func:`fs_length`, not from speed * t. Norm drift
    above 1e-6 without renormalization is recorded in ``warnings``.
    """
    H = np.asarray(H, dtype=complex)
    check_hermitian(H)
    psi = check_state(state, H.shape[0])
    if dt <= 0:
        raise ValueError("dt must be positive")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if hbar <= 0:
        raise ValueError("hbar must be positive")

    if gauge is None:
        system = diagonalize(H)
        weights = np.array([float(np.linalg.norm(v.conj().T @ psi) ** 2) for v in system.eigenvectors])
        gauge = float(system.eigenvalues[np.flatnonzero(weights > DEFAULT_EPS_SUPPORT)[0]])

    h_shift = H - gauge * np.eye(H.shape[0])
    ratio = dt * float(np.linalg.norm(h_shift, 2)) / hbar
    if ratio > 0.1:
        logger.debug(f"RK4 step dt*|H'|/hbar = {ratio:.3g} exceeds the recommended 0.1")

    def rhs(vector: np.ndarray) -> np.ndarray:
        return -1j * (h_shift @ vector) / hbar

    states = np.empty((steps + 1, psi.shape[0]), dtype=complex)
    states[0] = psi
    current = psi.copy()
    drift = 0.0
    for step in range(1, steps + 1):
        k1 = rhs(current)
        k2 = rhs(current + 0.5 * dt * k1)
        k3 = rhs(current + 0.5 * dt * k2)
        k4 = rhs(current + dt * k3)
        current = current + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        norm = float(np.linalg.norm(current))
        drift = max(drift, abs(norm - 1.0))
        if renormalize:
            current = current / norm
        states[step] = current

    warnings: list[str] = []
    if drift > NORM_DRIFT_WARNING and not renormalize:
        message = f"RK4 norm drift {drift:.3e} exceeds {NORM_DRIFT_WARNING:g} (dt={dt:g}, steps={steps})"
        logger.warning(message)
        warnings.append(message)

    times = dt * np.arange(steps + 1)
    trajectory = Trajectory(
        gauge=gauge,
        hbar=hbar,
        times=times,
        distances=np.zeros_like(times),
        states=states,
        speed=_speed(h_shift, psi, hbar),
        method=TrajectoryMethod.RK4,
        hamiltonian=H,
        dt=dt,
        renormalized=renormalize,
        norm_drift=drift,
        warnings=warnings,
    )
    if steps > 0:
        trajectory = trajectory.model_copy(update={"distances": fs_length(trajectory).distances})
    return trajectory


def fs_length(trajectory: Trajectory) -> FubiniStudyLength:
    """
    Fubini-Study arc length by trapezoid integration of the instantaneous speed.

    The speed at each sample is |(H' - <H'>) psi| / hbar on the normalized
    state; its spread around the trajectory's Delta H / hbar is reported.
    The polygon length sum(arccos|<psi_k|psi_k+1>|) is reported as an
    H-free cross-check.
    """
    if trajectory.samples < 2:
        raise ValueError("Fubini-Study length needs at least two samples")

    states = trajectory.states / np.linalg.norm(trajectory.states, axis=1, keepdims=True)
    h_states = states @ trajectory.shifted_hamiltonian().T
    means = np.einsum("ij,ij->i", states.conj(), h_states).real
    speeds = np.linalg.norm(h_states - means[:, None] * states, axis=1) / trajectory.hbar
    distances = cumulative_trapezoid(speeds, trajectory.times, initial=0.0)

    overlaps = np.abs(np.einsum("ij,ij->i", states[:-1].conj(), states[1:]))
    geodesic = float(np.sum(np.arccos(np.clip(overlaps, 0.0, 1.0))))

    return FubiniStudyLength(
        distances=distances,
        speeds=speeds,
        total_length=float(distances[-1]),
        expected_speed=trajectory.speed,
        max_speed_deviation=float(np.max(np.abs(speeds - trajectory.speed))),
        geodesic_length=geodesic,
    )


def _segments(flags: np.ndarray) -> list[tuple[int, int]]:
    """Contiguous runs of flagged samples as (first, last) index pairs."""
    segments: list[tuple[int, int]] = []
    for k in np.flatnonzero(flags):
        k = int(k)
        if segments and segments[-1][1] >= k - 1:
            segments[-1] = (segments[-1][0], k)
        else:
            segments.append((k, k))
    return segments


def phase_ledger(trajectory: Trajectory, analysis: CyclicAnalysis) -> PhaseLedger:
    """
    Pancharatnam, dynamical and Samuel-Bhandari phases along a trajectory.

    The Pancharatnam phase is continued by nearest branch. Samples where the
    overlap with the initial state vanishes, or where consecutive arguments
    jump by more than pi/2, are reported as ambiguous segments.
    """
    psi0 = trajectory.initial_state
    overlaps = trajectory.states @ psi0.conj()
    fidelity = np.abs(overlaps)
    raw = np.angle(overlaps)
    pancharatnam = np.unwrap(raw)
    pancharatnam -= pancharatnam[0]

    jumps = np.zeros(trajectory.samples, dtype=bool)
    jumps[1:] = np.abs(np.diff(pancharatnam)) > BRANCH_JUMP
    ambiguous = _segments((fidelity < ORTHOGONAL_OVERLAP) | jumps)
    if ambiguous:
        logger.warning(f"Pancharatnam phase is branch-ambiguous on samples {ambiguous}")

    h_shift = trajectory.shifted_hamiltonian()
    epsilon = float(np.vdot(psi0, h_shift @ psi0).real)
    dynamical = -epsilon * trajectory.times / trajectory.hbar
    sb = pancharatnam - dynamical

    if not analysis.cyclic:
        linear_law = np.full(trajectory.samples, np.nan)
    elif analysis.stationary or not analysis.length:
        linear_law = np.zeros(trajectory.samples)
    else:
        linear_law = trajectory.distances * analysis.unreduced_phase / analysis.length

    return PhaseLedger(
        times=trajectory.times,
        distances=trajectory.distances,
        fidelity=fidelity,
        pancharatnam=pancharatnam,
        dynamical=dynamical,
        sb=sb,
        linear_law=linear_law,
        divergence=circle_distances(sb, linear_law),
        ambiguous_segments=ambiguous,
    )


def eom_residual(trajectory: Trajectory, operator: GeometricOperator, S_psi: float | None = None) -> EomResidual:
    """
    Residuals of i S d/ds psi = G psi and i tau d/dt psi = G psi per sample.

    Derivatives are analytic in the trajectory's own gauge; a central
    difference in s is evaluated on interior samples as well.
    """
    if trajectory.speed <= 0:
        raise ValueError("equation of motion undefined for stationary states")
    length = operator.S_psi if S_psi is None else S_psi
    tau = operator.period
    hbar = trajectory.hbar

    h_states = trajectory.states @ trajectory.shifted_hamiltonian().T
    g_states = trajectory.states @ operator.matrix.T
    # i S (-i H' psi / (hbar speed)) and i tau (-i H' psi / hbar)
    residual_s = np.linalg.norm(length / (hbar * trajectory.speed) * h_states - g_states, axis=1)
    residual_t = np.linalg.norm(tau / hbar * h_states - g_states, axis=1)

    interior = slice(1, -1) if trajectory.samples >= 3 else slice(None)
    fd_max = None
    if trajectory.samples >= 3:
        ds = trajectory.distances[2:] - trajectory.distances[:-2]
        if np.all(ds > 0):
            central = (trajectory.states[2:] - trajectory.states[:-2]) / ds[:, None]
            fd = np.linalg.norm(1j * length * central - g_states[1:-1], axis=1)
            fd_max = float(np.max(fd))

    return EomResidual(
        residual_s=residual_s,
        residual_t=residual_t,
        max_residual_s=float(np.max(residual_s[interior])),
        max_residual_t=float(np.max(residual_t[interior])),
        max_residual_fd=fd_max,
    )


def _fidelity_function(trajectory: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Level energies and initial-state weights for the exact return amplitude."""
    if trajectory.spectrum is not None:
        energies = trajectory.spectrum.eigenvalues
        weights = trajectory.spectrum.level_weights(trajectory.initial_state)
    else:
        system = diagonalize(trajectory.hamiltonian)
        energies = system.eigenvalues
        psi = trajectory.initial_state
        weights = np.array([float(np.linalg.norm(v.conj().T @ psi) ** 2) for v in system.eigenvectors])
    return energies, weights


def detect_cycle(trajectory: Trajectory, fidelity_tol: float = 1e-6) -> CycleDetection:
    """
    First return of the state to its initial ray.

    Local maxima of the sampled fidelity are refined on the exact return
    amplitude: interior maxima by golden section search, a rising last
    sample by bounded search on its final interval. The first refined
    maximum above 1 - fidelity_tol is the detected period.
    """
    if trajectory.samples < 3:
        raise ValueError("cycle detection needs at least three samples")
    if trajectory.speed <= 0:
        logger.debug("Stationary state: every time is a return, no period detected")
        return CycleDetection(detected=False, best_fidelity=1.0, fidelity_tol=fidelity_tol)

    energies, weights = _fidelity_function(trajectory)
    hbar = trajectory.hbar

    def fidelity(t: float) -> float:
        return float(abs(np.dot(weights, np.exp(-1j * energies * t / hbar))))

    grid = trajectory.fidelities()
    times = trajectory.times
    last = trajectory.samples - 1

    def refine(k: int) -> tuple[float, float]:
        try:
            if k == last:
                result = minimize_scalar(
                    lambda t: -fidelity(t),
                    bounds=(times[k - 1], times[k]),
                    method="bounded",
                    options={"xatol": 1e-12},
                )
            else:
                result = minimize_scalar(
                    lambda t: -fidelity(t),
                    bracket=(times[k - 1], times[k], times[k + 1]),
                    method="golden",
                    options={"xtol": 1e-12},
                )
            t_star, value = float(result.x), -float(result.fun)
        except (ValueError, RuntimeError):
            t_star, value = float(times[k]), fidelity(float(times[k]))
        if value < grid[k]:
            t_star, value = float(times[k]), float(grid[k])
        return t_star, value

    candidates = [k for k in range(1, last) if grid[k] > grid[k - 1] and grid[k] >= grid[k + 1]]
    if grid[last] > grid[last - 1]:
        candidates.append(last)

    best = 0.0
    for k in candidates:
        t_star, value = refine(k)
        best = max(best, value)
        if value >= 1.0 - fidelity_tol:
            logger.debug(f"Cycle detected at t = {t_star:.12g} (fidelity {value:.15g})")
            return CycleDetection(
                detected=True,
                period=t_star,
                length=trajectory.speed * t_star,
                fidelity=value,
                best_fidelity=value,
                fidelity_tol=fidelity_tol,
            )

    if best == 0.0:
        best = float(np.max(grid[1:]))
    logger.debug(f"No cycle detected; best fidelity {best:.12g}")
    return CycleDetection(detected=False, best_fidelity=best, fidelity_tol=fidelity_tol)
