import math

import numpy as np

from ..operators import (
    energy_representation_check,
    operator_statistics,
    stencil_commutators,
    time_operator_expectation,
    two_level_gamma,
)
from ..utils.angles import circle_distance
from .base import BaseCheck, CheckSkipped
from .context import VerificationContext

INTERIOR_SAMPLES = 10


def interior_indices(samples: int, count: int = INTERIOR_SAMPLES) -> list[int]:
    """``count`` evenly spread sample indices, excluding both ends."""
    return sorted({int(k) for k in np.linspace(1, samples - 2, count).round()})


def interior_times(period: float, count: int = INTERIOR_SAMPLES) -> list[float]:
    return [period * (k + 0.5) / count for k in range(count)]


class OperatorConstructionCheck(BaseCheck):
    """Projector sum with 2*pi*p_i against the scaled shifted Hamiltonian"""

    name = "operator_construction"
    reference = "sum 2*pi*p_i P_i = (tau/hbar)(H - lambda_j) on the support"
    tolerance = 1e-10

    def measure(self, ctx: VerificationContext) -> float:
        operator = ctx.operator
        scale = max(1.0, float(np.max(np.abs(operator.support_entries))))
        return operator.construction_mismatch / scale


class OperatorExpectationCheck(BaseCheck):
    name = "operator_expectation"
    reference = "<G> mod 2*pi = gamma"
    tolerance = 1e-8

    def measure(self, ctx: VerificationContext) -> float:
        stats = operator_statistics(ctx.operator, ctx.state)
        return circle_distance(stats.expect_G, ctx.analysis.geometric_phase)


class LengthIdentityCheck(BaseCheck):
    name = "length_identity"
    reference = "S = delta G = tau * delta H / hbar"
    tolerance = 1e-10

    def measure(self, ctx: VerificationContext) -> float:
        analysis = ctx.analysis
        assert analysis.length is not None
        stats = operator_statistics(ctx.operator, ctx.state)
        return abs(stats.S_psi - analysis.length) / max(analysis.length, 1e-300)


class TimeOperatorCheck(BaseCheck):
    """<T> = t and <S> = s along the period trajectory"""

    name = "time_operator"
    reference = "<i s (tau/Gamma) d/ds> = t, <i s d/d gamma> = s"
    tolerance = 1e-8

    def measure(self, ctx: VerificationContext) -> float:
        trajectory = ctx.trajectory
        analysis = ctx.analysis
        assert analysis.period is not None and analysis.length is not None
        t_scale = max(1.0, analysis.period)
        s_scale = max(1.0, analysis.length)
        worst = 0.0
        for k in interior_indices(trajectory.samples):
            values = time_operator_expectation(trajectory, k, analysis)
            worst = max(
                worst,
                abs(values.expect_T - values.t) / t_scale,
                abs(values.expect_T_time - values.t) / t_scale,
                abs(values.expect_S - values.s) / s_scale,
                abs(values.expect_d_gamma - 1.0),
            )
        return worst


class CommutatorHTCheck(BaseCheck):
    name = "commutator_HT"
    reference = "<[H, T]> = i hbar"
    tolerance = 1e-6

    def measure(self, ctx: VerificationContext) -> float:
        assert ctx.analysis.period is not None
        values = stencil_commutators(ctx.spectrum, ctx.state, ctx.analysis, interior_times(ctx.analysis.period))
        return max(abs(v.commutator_HT - 1j * ctx.hbar) / ctx.hbar for v in values)


class CommutatorGTCheck(BaseCheck):
    name = "commutator_GT"
    reference = "<[G, T]> = i tau"
    tolerance = 1e-6

    def measure(self, ctx: VerificationContext) -> float:
        tau = ctx.analysis.period
        assert tau is not None
        values = stencil_commutators(ctx.spectrum, ctx.state, ctx.analysis, interior_times(tau))
        return max(abs(v.commutator_GT - 1j * tau) / tau for v in values)


class MatrixCommutatorCheck(BaseCheck):
    """With H as a fixed matrix the commutator vanishes identically"""

    name = "commutator_matrix_representation"
    reference = "<[H_matrix, T]> = 0"
    tolerance = 1e-6

    def measure(self, ctx: VerificationContext) -> float:
        assert ctx.analysis.period is not None
        values = stencil_commutators(ctx.spectrum, ctx.state, ctx.analysis, interior_times(ctx.analysis.period))
        return max(abs(v.commutator_HT_matrix) for v in values)


class EnergyRepresentationCheck(BaseCheck):
    name = "energy_representation"
    reference = "<i hbar d/d epsilon> = tau"
    tolerance = 1e-5

    def measure(self, ctx: VerificationContext) -> float:
        tau = ctx.analysis.period
        assert tau is not None
        value = energy_representation_check(ctx.analysis, ctx.spectrum, ctx.state)
        return abs(value - tau) / tau


class TwoLevelClosedFormCheck(BaseCheck):
    """Two occupied levels: gamma = -2*pi*|phi_0|^2 mod 2*pi with phi_0 the lower level"""

    name = "two_level_closed_form"
    reference = "gamma = -pi (1 - cos theta) mod 2*pi"
    tolerance = 1e-10

    def measure(self, ctx: VerificationContext) -> float:
        if ctx.support.size != 2:
            raise CheckSkipped("support is not two-level")
        lower = float(ctx.support.probabilities[0] / np.sum(ctx.support.probabilities))
        theta = math.acos(min(1.0, max(-1.0, 1.0 - 2.0 * lower)))
        return circle_distance(two_level_gamma(theta, lambda0_less=True), ctx.analysis.geometric_phase)
