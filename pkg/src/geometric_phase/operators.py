"""
Geometric operator, two-level closed forms and time-operator expectations.

The geometric operator is G = (tau/hbar)(H - lambda_j), diagonal in the
eigenbasis with entries 2*pi*p_i on the support. The time operator
T = i s (tau/Gamma) d/ds acts on solution families, so its expectation
values are evaluated along trajectories propagated with H' = H - lambda_j.
"""

import math
from fractions import Fraction
from itertools import combinations

import numpy as np

from .cyclic import analyze_state
from .dynamics import STENCIL_FRACTION, phase_ledger, propagate_exact, stencil_times
from .logging_config import get_logger
from .models.cycle import CyclicAnalysis
from .models.operators import CommutatorExpectations, GeometricOperator, OperatorExpectations, OperatorStatistics
from .models.report import ClockReading, SweepRow
from .models.spectrum import Spectrum
from .models.trajectory import Trajectory
from .spectral import check_state, commensurate_structure
from .utils.angles import TWO_PI, circle_distance, reduce_angle

logger = get_logger(__name__)

ZERO_PHASE_TOL = 1e-14
GAUGE_TOL = 1e-12


def _require_cycle(analysis: CyclicAnalysis) -> float:
    if not analysis.cyclic:
        raise ValueError("state is not cyclic")
    if analysis.stationary or analysis.period is None:
        raise ValueError("no geometric operator for stationary states")
    return analysis.period


def _statistics(matrix: np.ndarray, psi: np.ndarray) -> tuple[float, float]:
    g_psi = matrix @ psi
    mean = float(np.vdot(psi, g_psi).real)
    spread = float(np.linalg.norm(g_psi - mean * psi))
    return mean, spread


def geometric_operator(analysis: CyclicAnalysis, spectrum: Spectrum) -> GeometricOperator:
    """
    Build G_psi both as a projector sum and as the scaled shifted Hamiltonian.

    Levels outside the support take the entry (tau/hbar)(lambda_k - lambda_j);
    ``construction_mismatch`` records the largest disagreement between the two
    constructions on support levels.

    Raises:
        ValueError: for stationary or non-cyclic states
    """
    tau = _require_cycle(analysis)
    hbar = analysis.hbar
    gauge = analysis.gauge_energy

    level_entries = (tau / hbar) * (spectrum.eigenvalues - gauge)
    support_entries = TWO_PI * np.asarray(analysis.p_coefficients, dtype=float)
    mismatch = float(np.max(np.abs(level_entries[list(analysis.support.indices)] - support_entries)))

    n = spectrum.dimension
    matrix = np.zeros((n, n), dtype=complex)
    for k, entry in enumerate(level_entries):
        matrix += entry * spectrum.projector(k)

    _, spread = _statistics(matrix, analysis.support.state)
    logger.debug(f"Geometric operator: entries {level_entries.round(12).tolist()}, delta G = {spread:.12g}")
    return GeometricOperator(
        matrix=matrix,
        level_entries=level_entries,
        support_entries=support_entries,
        gauge_index=analysis.gauge_index,
        gauge_energy=gauge,
        period=tau,
        hbar=hbar,
        delta_G=spread,
        S_psi=spread,
        construction_mismatch=mismatch,
    )


def regauge(operator: GeometricOperator, spectrum: Spectrum, gauge_index: int) -> GeometricOperator:
    """
    The same operator referred to another gauge level lambda_k.

    Every entry moves by -(tau/hbar)(lambda_k - lambda_j); the spread is unchanged.
    """
    new_gauge = spectrum.energy_of(gauge_index)
    shift = operator.period * (new_gauge - operator.gauge_energy) / operator.hbar
    n = operator.matrix.shape[0]
    return operator.model_copy(
        update={
            "matrix": operator.matrix - shift * np.eye(n),
            "level_entries": operator.level_entries - shift,
            "support_entries": operator.support_entries - shift,
            "gauge_index": gauge_index,
            "gauge_energy": new_gauge,
        }
    )


def operator_statistics(operator: GeometricOperator, state: np.ndarray) -> OperatorStatistics:
    """<G>, Delta G and the cycle length S = Delta G."""
    psi = check_state(state, operator.matrix.shape[0])
    mean, spread = _statistics(operator.matrix, psi)
    return OperatorStatistics(expect_G=mean, delta_G=spread, S_psi=spread)


def two_level_gamma(theta: float, lambda0_less: bool = True) -> float:
    """
    Closed-form two-level phase (-/+ pi (1 - cos theta)) mod 2*pi.

    ``theta`` is the polar angle measured from |phi_1>, see :func:`two_level_state`.
    """
    if not -1e-12 <= theta <= math.pi + 1e-12:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    value = math.pi * (1.0 - math.cos(theta))
    return reduce_angle(-value if lambda0_less else value)


def two_level_state(theta: float) -> np.ndarray:
    """sin(theta/2)|phi_0> + cos(theta/2)|phi_1>."""
    return np.array([math.sin(theta / 2.0), math.cos(theta / 2.0)], dtype=complex)


def _unreduced_phase(analysis: CyclicAnalysis) -> tuple[float, float]:
    tau = _require_cycle(analysis)
    gamma = analysis.unreduced_phase
    if abs(gamma) < ZERO_PHASE_TOL:
        raise ValueError("time operator undefined at zero unreduced phase")
    return tau, gamma


def _check_gauge(trajectory: Trajectory, analysis: CyclicAnalysis) -> None:
    if abs(trajectory.gauge - analysis.gauge_energy) > GAUGE_TOL * (1.0 + abs(analysis.gauge_energy)):
        raise ValueError(
            f"trajectory gauge {trajectory.gauge!r} differs from the analysis gauge {analysis.gauge_energy!r}"
        )


def time_operator_expectation(
    trajectory: Trajectory,
    index: int,
    analysis: CyclicAnalysis,
    include_commutators: bool = False,
) -> OperatorExpectations:
    """
    Expectation values of the distance-parametrized operators at one sample.

    The derivative d/ds psi = -i H' psi / (hbar * speed) is analytic; at
    interior samples it is compared with a central difference.
    """
    tau, gamma = _unreduced_phase(analysis)
    _check_gauge(trajectory, analysis)
    if not 0 <= index < trajectory.samples:
        raise IndexError(f"sample index {index} outside trajectory of {trajectory.samples} samples")

    hbar = trajectory.hbar
    speed = trajectory.speed
    length = tau * speed
    h_shift = trajectory.shifted_hamiltonian()

    psi = trajectory.states[index]
    t = float(trajectory.times[index])
    s = float(trajectory.distances[index])

    dpsi_ds = -1j * (h_shift @ psi) / (hbar * speed)
    # <psi| i d/ds |psi>
    generator = float(np.vdot(psi, 1j * dpsi_ds).real)
    dpsi_dt = -1j * (h_shift @ psi) / hbar
    time_generator = float(np.vdot(psi, 1j * dpsi_dt).real)

    deviation = None
    if 0 < index < trajectory.samples - 1:
        ds = float(trajectory.distances[index + 1] - trajectory.distances[index - 1])
        if ds > 0:
            central = (trajectory.states[index + 1] - trajectory.states[index - 1]) / ds
            deviation = float(np.linalg.norm(central - dpsi_ds))

    commutators = None
    if include_commutators and 0 < index < trajectory.samples - 1:
        commutators = commutator_expectations(trajectory, index, analysis)

    return OperatorExpectations(
        index=index,
        t=t,
        s=s,
        expect_G=s * generator,
        expect_T=s * (tau / gamma) * generator,
        expect_T_time=t * (tau / gamma) * time_generator,
        expect_S=s * (length / gamma) * generator,
        expect_d_gamma=(length / gamma) * generator,
        linear_law=s * gamma / length,
        derivative_deviation=deviation,
        commutator_HT=None if commutators is None else commutators.commutator_HT,
        commutator_GT=None if commutators is None else commutators.commutator_GT,
        commutator_HT_matrix=None if commutators is None else commutators.commutator_HT_matrix,
    )


def commutator_expectations(trajectory: Trajectory, index: int, analysis: CyclicAnalysis) -> CommutatorExpectations:
    """
    <[H, T]> and <[G, T]> at an interior sample.

    H acts through its generator iħ d/dt on the solution family and G through
    i tau d/dt, with central differences in t. The matrix representation of H
    commutes with T and is reported alongside.
    """
    tau, gamma = _unreduced_phase(analysis)
    _check_gauge(trajectory, analysis)
    if not 0 < index < trajectory.samples - 1:
        raise ValueError(f"commutator needs an interior sample, got index {index} of {trajectory.samples}")

    hbar = trajectory.hbar
    h_shift = trajectory.shifted_hamiltonian()
    window = [index - 1, index, index + 1]
    times = trajectory.times[window]
    states = trajectory.states[window]
    step = float(times[2] - times[0])
    if step <= 0:
        raise ValueError("commutator stencil needs distinct neighbouring times")

    dpsi = np.array([-1j * (h_shift @ psi) / hbar for psi in states])
    t_psi = np.array([1j * tj * (tau / gamma) * d for tj, d in zip(times, dpsi, strict=True)])
    t_mid = float(times[1])
    psi = states[1]

    def generator_commutator(scale: float) -> complex:
        # [A, T] with A = i*scale*d/dt on both orderings
        outer = 1j * scale * (t_psi[2] - t_psi[0]) / step
        inner_family = 1j * scale * dpsi
        inner = 1j * t_mid * (tau / gamma) * (inner_family[2] - inner_family[0]) / step
        return complex(np.vdot(psi, outer - inner))

    t_matrix = 1j * t_mid * (tau / gamma) * (states[2] - states[0]) / step
    t_of_h = 1j * t_mid * (tau / gamma) * (h_shift @ states[2] - h_shift @ states[0]) / step
    matrix_commutator = complex(np.vdot(psi, h_shift @ t_matrix - t_of_h))

    return CommutatorExpectations(
        index=index,
        t=t_mid,
        commutator_HT=generator_commutator(hbar),
        commutator_GT=generator_commutator(tau),
        commutator_HT_matrix=matrix_commutator,
    )


def energy_representation_check(
    analysis: CyclicAnalysis,
    spectrum: Spectrum,
    state: np.ndarray,
    d_eps: float | None = None,
) -> complex:
    """
    <chi| i hbar d/d epsilon |chi> at the end of one cycle, which should equal tau.

    chi(c) = exp(-i c H' tau / hbar) psi rescales the energy offset
    epsilon = <H> - lambda_j by c; the derivative is a central difference at
    c = 1 +/- d_eps/epsilon. By default the step in c is 1e-4 divided by the
    largest phase |lambda_k - lambda_j| tau / hbar.
    """
    tau = _require_cycle(analysis)
    hbar = analysis.hbar
    epsilon = analysis.energy_offset
    if abs(epsilon) < ZERO_PHASE_TOL:
        raise ValueError("energy representation undefined at zero energy offset")

    psi = check_state(state, spectrum.dimension)
    projections = [spectrum.projector(k) @ psi for k in range(spectrum.level_count)]
    shifted = spectrum.eigenvalues - analysis.gauge_energy
    if d_eps is None:
        largest = float(np.max(np.abs(shifted))) * tau / hbar
        d_eps = STENCIL_FRACTION * abs(epsilon) / max(1.0, largest)
    if d_eps <= 0:
        raise ValueError("d_eps must be positive")

    def chi(c: float) -> np.ndarray:
        phases = np.exp(-1j * c * shifted * tau / hbar)
        return sum((phase * p for phase, p in zip(phases, projections, strict=True)), np.zeros_like(psi))

    delta = d_eps / epsilon
    derivative = (chi(1.0 + delta) - chi(1.0 - delta)) / (2.0 * d_eps)
    return complex(np.vdot(chi(1.0), 1j * hbar * derivative))


def read_clock(
    spectrum: Spectrum,
    state: np.ndarray,
    analysis: CyclicAnalysis,
    t1: float,
    t2: float,
) -> ClockReading:
    """Elapsed time between t1 and t2 read off as the difference of <T>."""
    if not 0 <= t1 < t2:
        raise ValueError(f"clock needs 0 <= t1 < t2, got t1={t1!r}, t2={t2!r}")
    _unreduced_phase(analysis)

    times = np.array([0.0, t1, t2])
    trajectory = propagate_exact(spectrum, state, times, gauge=analysis.gauge_energy)
    first = time_operator_expectation(trajectory, 1, analysis)
    second = time_operator_expectation(trajectory, 2, analysis)
    logger.debug(f"Clock read <T> = {first.expect_T:.12g} at t1, {second.expect_T:.12g} at t2")
    return ClockReading(t1=t1, t2=t2, expect_T1=first.expect_T, expect_T2=second.expect_T)


def stencil_commutators(
    spectrum: Spectrum,
    state: np.ndarray,
    analysis: CyclicAnalysis,
    centres: list[float],
    step: float | None = None,
) -> list[CommutatorExpectations]:
    """Commutator expectations at each centre time, each on its own fine stencil."""
    _unreduced_phase(analysis)
    psi = check_state(state, spectrum.dimension)
    shifted = spectrum.eigenvalues - analysis.gauge_energy
    norm = float(np.max(np.abs(shifted)))
    times, positions = stencil_times(centres, step, norm=norm, hbar=analysis.hbar)
    trajectory = propagate_exact(spectrum, psi, times, gauge=analysis.gauge_energy)
    return [commutator_expectations(trajectory, k, analysis) for k in positions]


def two_level_sweep(steps: int, lambda0_less: bool = True) -> list[SweepRow]:
    """
    Two-level phase on a uniform theta grid over [0, pi] by three routes.

    The closed form, the LCM pipeline on :func:`two_level_state`, and the
    Samuel-Bhandari phase of an exact propagation to t = tau. The oracle
    column is left empty at the stationary endpoints.
    """
    if steps < 2:
        raise ValueError("sweep needs at least two steps")

    eigenvalues = [Fraction(0), Fraction(1)] if lambda0_less else [Fraction(1), Fraction(0)]
    spectrum = commensurate_structure(eigenvalues, scale=1.0)

    rows = []
    for theta in np.linspace(0.0, math.pi, steps):
        theta = float(theta)
        state = two_level_state(theta)
        closed = two_level_gamma(theta, lambda0_less)
        analysis = analyze_state(state, spectrum)
        values = [closed, analysis.geometric_phase]

        oracle = None
        if not analysis.stationary and analysis.period is not None:
            trajectory = propagate_exact(spectrum, state, [0.0, analysis.period], gauge=analysis.gauge_energy)
            oracle = reduce_angle(float(phase_ledger(trajectory, analysis).sb[-1]))
            values.append(oracle)

        discrepancy = max(circle_distance(a, b) for a, b in combinations(values, 2))
        rows.append(
            SweepRow(
                theta=theta,
                closed_form=closed,
                pipeline=analysis.geometric_phase,
                sb_oracle=oracle,
                max_discrepancy=discrepancy,
            )
        )
    return rows
