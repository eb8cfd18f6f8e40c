"""Support extraction, cyclicity, period and geometric phase of one state."""

import math
from collections.abc import Sequence
from fractions import Fraction
from itertools import combinations

import numpy as np

from .logging_config import get_logger
from .models.cycle import CyclicAnalysis, NearRecurrence, SelectionReport, SupportDecomposition
from .models.spectrum import Spectrum
from .rational import (
    DEFAULT_MAX_DENOMINATOR,
    DEFAULT_RAT_TOL,
    lcm_set,
    recognize_rational,
    squarefree_part,
)
from .spectral import check_state, rational_structure
from .utils.angles import TWO_PI, circle_distance, principal_angle, reduce_angle

logger = get_logger(__name__)

DEFAULT_EPS_SUPPORT = 1e-12
BRUTE_FORCE_OMEGA_LIMIT = 10**4


def support(
    state: np.ndarray,
    spectrum: Spectrum,
    eps_support: float = DEFAULT_EPS_SUPPORT,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    rat_tol: float = DEFAULT_RAT_TOL,
) -> SupportDecomposition:
    """
    Levels of ``spectrum`` on which ``state`` has weight above ``eps_support``.

    Commensurability is decided on the retained levels only, so a state
    living on a commensurate subset of an incommensurate spectrum still
    gets rational levels.
    """
    psi = check_state(state, spectrum.dimension)
    if eps_support <= 0:
        raise ValueError("eps_support must be positive")

    coefficients = spectrum.coefficients(psi)
    weights = spectrum.level_weights(psi)
    indices = tuple(int(k) for k in np.flatnonzero(weights > eps_support))
    if not indices:
        raise ValueError(f"no level carries weight above eps_support={eps_support:g}")

    amplitudes = np.array(
        [coefficients[k][0] if coefficients[k].shape[0] == 1 else math.sqrt(weights[k]) for k in indices],
        dtype=complex,
    )
    probabilities = np.array([weights[k] for k in indices])
    energies = np.array([spectrum.eigenvalues[k] for k in indices])

    levels: tuple[Fraction, ...] = ()
    base_unit = 1.0
    offset = 0.0
    commensurate = True
    diagnostic = None
    if spectrum.commensurate:
        levels = tuple(spectrum.levels[k] for k in indices)
        base_unit = spectrum.base_unit
        offset = spectrum.offset
    else:
        structure = rational_structure(energies, max_denominator, rat_tol)
        if isinstance(structure, str):
            commensurate = False
            diagnostic = structure
        else:
            base_unit, offset, levels = structure

    logger.debug(f"Support {indices} with probabilities {probabilities.round(12).tolist()}")
    return SupportDecomposition(
        indices=indices,
        amplitudes=amplitudes,
        probabilities=probabilities,
        energies=energies,
        levels=levels,
        base_unit=base_unit,
        offset=offset,
        commensurate=commensurate,
        eps_support=eps_support,
        dimension=spectrum.dimension,
        state=psi,
        diagnostic=diagnostic,
    )


def _support_moments(supp: SupportDecomposition) -> tuple[float, float]:
    weights = supp.probabilities
    mean = float(np.dot(weights, supp.energies))
    variance = float(np.dot(weights, (supp.energies - mean) ** 2))
    return mean, math.sqrt(max(variance, 0.0))


def period_lcm(levels: Sequence[Fraction]) -> Fraction:
    """L = LCM of the inverse positive spacings between distinct levels."""
    spacings = {abs(ri - rj) for ri, rj in combinations(levels, 2)}
    spacings.discard(Fraction(0))
    if not spacings:
        raise ValueError("period needs at least two distinct levels")
    return lcm_set(1 / d for d in spacings)


def analyze_cycle(
    supp: SupportDecomposition,
    hbar: float = 1.0,
    gauge_index: int | None = None,
) -> CyclicAnalysis:
    """
    Period, total phase, p-coefficients and geometric phase of a support.

    Args:
        supp: Support decomposition of the state
        hbar: Reduced Planck constant
        gauge_index: Spectrum level used as gauge lambda_j; defaults to the
            lowest support level (all p_i >= 0)

    Returns:
        CyclicAnalysis; an incommensurate support of three or more levels
        yields ``cyclic=False`` with the failing ratio in ``diagnostic``.
    """
    if hbar <= 0:
        raise ValueError("hbar must be positive")

    if gauge_index is None:
        position = 0
    elif gauge_index in supp.indices:
        position = supp.indices.index(gauge_index)
    else:
        raise ValueError(f"gauge level {gauge_index} is not in the support {supp.indices}")

    gauge_energy = float(supp.energies[position])
    mean, spread = _support_moments(supp)
    common = {
        "support": supp,
        "hbar": hbar,
        "gauge_index": supp.indices[position],
        "gauge_position": position,
        "gauge_energy": gauge_energy,
        "expectation_energy": mean,
        "energy_uncertainty": spread,
    }

    if supp.size == 1:
        return CyclicAnalysis(cyclic=True, stationary=True, p_coefficients=(0,), **common)

    if not supp.commensurate:
        logger.warning(f"State is not cyclic: {supp.diagnostic}")
        return CyclicAnalysis(cyclic=False, stationary=False, diagnostic=supp.diagnostic, **common)

    lcm = period_lcm(supp.levels)
    tau = TWO_PI * hbar * float(lcm) / supp.base_unit

    gauge_level = supp.levels[position]
    p_exact = [(r - gauge_level) * lcm for r in supp.levels]
    if any(p.denominator != 1 for p in p_exact):
        raise ArithmeticError(f"non-integer p-coefficients {p_exact}")
    p_coefficients = tuple(int(p) for p in p_exact)

    unreduced = TWO_PI * float(np.dot(p_coefficients, supp.probabilities))
    total = -tau * gauge_energy / hbar
    phi = principal_angle(total)
    winding = round((total - phi) / TWO_PI)

    logger.debug(f"L = {lcm}, tau = {tau:.12g}, p = {p_coefficients}, Gamma = {unreduced:.12g}")
    return CyclicAnalysis(
        cyclic=True,
        stationary=False,
        period_lcm=lcm,
        period=tau,
        p_coefficients=p_coefficients,
        total_phase=phi,
        total_phase_winding=winding,
        unreduced_phase=unreduced,
        geometric_phase=reduce_angle(unreduced),
        **common,
    )


def analyze_state(
    state: np.ndarray,
    spectrum: Spectrum,
    eps_support: float = DEFAULT_EPS_SUPPORT,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    rat_tol: float = DEFAULT_RAT_TOL,
) -> CyclicAnalysis:
    """Support extraction followed by :func:`analyze_cycle` in the minimum gauge."""
    supp = support(state, spectrum, eps_support, max_denominator, rat_tol)
    return analyze_cycle(supp, spectrum.hbar)


def omega_closed_form(probabilities: Sequence[Fraction]) -> tuple[int, tuple[int, ...]] | None:
    """
    Smallest omega with omega * a_i/b_i a perfect square alpha_i**2 for all i.

    Writing a_i * b_i = s_i * t_i**2 with s_i square-free, a solution exists
    only when every s_i equals one s; then omega = s * k**2 with
    k = LCM(b_i / gcd(b_i, s * t_i)).
    """
    kernels: list[tuple[int, int]] = []
    for value in probabilities:
        if value <= 0:
            raise ValueError(f"probabilities must be positive, got {value}")
        product = value.numerator * value.denominator
        s = squarefree_part(product)
        kernels.append((s, math.isqrt(product // s)))

    s = kernels[0][0]
    if any(si != s for si, _ in kernels):
        return None

    pairs = [(value.denominator, t) for value, (_, t) in zip(probabilities, kernels, strict=True)]
    k = math.lcm(*(b // math.gcd(b, s * t) for b, t in pairs))
    omega = s * k * k
    alpha = tuple(s * k * t // b for b, t in pairs)
    return omega, alpha


def brute_force_omega(probabilities: Sequence[Fraction], limit: int = BRUTE_FORCE_OMEGA_LIMIT) -> int | None:
    """
    Scan omega up to ``limit`` for the first making every omega * P_i a perfect square.

    omega * a/b is an integer only when b divides omega, so the scan steps
    through multiples of the LCM of the denominators.
    """
    step = math.lcm(*(value.denominator for value in probabilities))
    for omega in range(step, limit + 1, step):
        if all(math.isqrt(n) ** 2 == n for n in (int(omega * value) for value in probabilities)):
            return omega
    return None


def selection_rule(
    supp: SupportDecomposition,
    analysis: CyclicAnalysis,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    rat_tol: float = DEFAULT_RAT_TOL,
) -> SelectionReport:
    """Rationalize the support probabilities and place gamma on the lattice 2*pi*n/omega'."""
    if not analysis.cyclic:
        raise ValueError("selection rule requires a cyclic analysis")

    rationals: list[Fraction] = []
    for probability in supp.probabilities:
        value = recognize_rational(float(probability), max_denominator, rat_tol)
        if value is None or value <= 0:
            logger.debug(f"Probability {probability!r} is not rational")
            return SelectionReport(probabilities_rational=False)
        rationals.append(value)

    omega_prime = math.lcm(*(value.denominator for value in rationals))
    closed = omega_closed_form(rationals)
    omega, alpha = (None, None) if closed is None else closed
    lattice_index = round(analysis.geometric_phase * omega_prime / TWO_PI) % omega_prime

    return SelectionReport(
        probabilities_rational=True,
        probabilities=tuple(rationals),
        omega_prime=omega_prime,
        omega=omega,
        alpha=alpha,
        lattice_index=lattice_index,
    )


def phase_after_cycles(analysis: CyclicAnalysis, n: int) -> float:
    """(n * Gamma) mod 2*pi, reduced through the fractional part of n * sum(p_i |phi_i|^2)."""
    if not analysis.cyclic:
        raise ValueError("phase after cycles requires a cyclic analysis")
    if n < 0:
        raise ValueError("number of cycles must be non-negative")
    if n == 0 or analysis.stationary:
        return 0.0

    turns = n * float(np.dot(analysis.p_coefficients, analysis.support.probabilities))
    fraction = turns - math.floor(turns)
    return reduce_angle(TWO_PI * fraction)


def near_recurrence(
    analysis: CyclicAnalysis,
    target_cycles: int,
    tol: float,
    q_max: int = 1000,
) -> NearRecurrence:
    """Smallest q != p whose phase after q cycles lies within ``tol`` of the phase after p."""
    if target_cycles < 1:
        raise ValueError("target_cycles must be positive")
    if q_max < 1:
        raise ValueError("q_max must be positive")
    if tol < 0:
        raise ValueError("tol must be non-negative")

    target = phase_after_cycles(analysis, target_cycles)
    for q in range(1, q_max + 1):
        if q == target_cycles:
            continue
        distance = circle_distance(phase_after_cycles(analysis, q), target)
        if distance <= tol:
            return NearRecurrence(target_cycles=target_cycles, cycles=q, distance=distance, tol=tol, q_max=q_max)
    return NearRecurrence(target_cycles=target_cycles, tol=tol, q_max=q_max)
