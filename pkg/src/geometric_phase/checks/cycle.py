import numpy as np

from ..cyclic import analyze_cycle, brute_force_omega, phase_after_cycles
from ..dynamics import propagate_exact
from ..utils.angles import TWO_PI, circle_distance
from .base import BaseCheck, CheckSkipped
from .context import VerificationContext

MINIMALITY_DIVISORS = range(2, 13)


class PAlgebraCheck(BaseCheck):
    """Antisymmetry and cocycle identities of the p-coefficients, exact in integers"""

    name = "p_algebra"
    reference = "p_ij = -p_ji, p_ij = p_kj - p_ki"
    tolerance = 0.0

    def measure(self, ctx: VerificationContext) -> float:
        p = ctx.analysis.p_matrix()
        size = len(p)
        violations = 0
        for i in range(size):
            for j in range(size):
                if p[i][j] != -p[j][i]:
                    violations += 1
                for k in range(size):
                    if p[i][j] != p[k][j] - p[k][i]:
                        violations += 1
        if any(not isinstance(value, int) for value in ctx.analysis.p_coefficients):
            violations += 1
        return violations


class GaugeInvarianceCheck(BaseCheck):
    name = "gauge_invariance"
    reference = "gamma mod 2*pi independent of lambda_j"
    tolerance = 1e-10

    def measure(self, ctx: VerificationContext) -> float:
        reference = ctx.analysis.geometric_phase
        spread = 0.0
        for index in ctx.support.indices:
            regauged = analyze_cycle(ctx.support, ctx.hbar, gauge_index=index)
            spread = max(spread, circle_distance(regauged.geometric_phase, reference))
        return spread


class PeriodReturnCheck(BaseCheck):
    name = "period_return"
    reference = "|<psi(0)|psi(tau)>| = 1, tau = 2*pi*hbar*LCM(1/dE)"
    tolerance = 1e-10

    def measure(self, ctx: VerificationContext) -> float:
        assert ctx.analysis.period is not None
        return 1.0 - ctx.fidelity_at(ctx.analysis.period)


class PeriodMinimalityCheck(BaseCheck):
    """No return to the initial ray at tau/k; measured is the smallest 1 - fidelity"""

    name = "period_minimality"
    reference = "|<psi(0)|psi(tau/k)>| < 1 for k = 2..12"
    tolerance = 1e-6

    def measure(self, ctx: VerificationContext) -> float:
        assert ctx.analysis.period is not None
        return min(1.0 - ctx.fidelity_at(ctx.analysis.period / k) for k in MINIMALITY_DIVISORS)

    def passes(self, measured: float) -> bool:
        assert self.tolerance is not None
        return measured > self.tolerance


class PhaseEnergyCheck(BaseCheck):
    name = "phase_energy_identity"
    reference = "Gamma = tau * (<H> - lambda_j) / hbar"
    tolerance = 1e-10

    def measure(self, ctx: VerificationContext) -> float:
        analysis = ctx.analysis
        assert analysis.period is not None
        expected = analysis.period * analysis.energy_offset / analysis.hbar
        return abs(analysis.unreduced_phase - expected) / max(1.0, abs(expected))


class SamuelBhandariCheck(BaseCheck):
    """SB phase (Pancharatnam minus dynamical) at n full periods against n * Gamma"""

    name = "sb_oracle"
    reference = "arg<psi(0)|psi(n tau)> + n tau epsilon / hbar = n Gamma mod 2*pi"
    tolerance = 1e-8

    def measure(self, ctx: VerificationContext) -> float:
        analysis = ctx.analysis
        assert analysis.period is not None
        worst = circle_distance(float(ctx.ledger.sb[-1]), analysis.geometric_phase)

        cycles = np.arange(4)
        times = cycles * analysis.period
        trajectory = propagate_exact(ctx.spectrum, ctx.state, times, gauge=ctx.gauge)
        overlaps = trajectory.states @ ctx.state.conj()
        sb = np.angle(overlaps) + analysis.energy_offset * times / ctx.hbar
        for n in cycles[1:]:
            worst = max(worst, circle_distance(float(sb[n]), phase_after_cycles(analysis, int(n))))
        return worst


class SelectionRuleCheck(BaseCheck):
    """gamma sits on the lattice 2*pi*n/omega'; closed-form omega agrees with brute force"""

    name = "selection_rule"
    reference = "gamma = 2*pi*n/omega', omega |phi_i|^2 = alpha_i^2"
    tolerance = 1e-8

    def measure(self, ctx: VerificationContext) -> float:
        report = ctx.selection
        if not report.probabilities_rational or report.omega_prime is None:
            raise CheckSkipped("probabilities are not rational")

        scaled = ctx.analysis.geometric_phase * report.omega_prime / TWO_PI
        deviation = abs(scaled - round(scaled))

        brute = brute_force_omega(report.probabilities)
        if brute is not None and (report.omega is None or report.omega != brute):
            raise AssertionError(f"closed-form omega {report.omega} differs from brute force {brute}")
        if report.omega is not None and report.omega <= 10**4 and brute is None:
            raise AssertionError(f"closed-form omega {report.omega} not found by brute force")
        return deviation
