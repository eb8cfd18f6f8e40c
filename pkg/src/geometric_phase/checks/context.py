"""Lazily computed quantities shared by the checks of one scenario."""

import math
from functools import cached_property

import numpy as np

from ..cyclic import analyze_cycle, selection_rule, support
from ..dynamics import phase_ledger, propagate_exact
from ..models.cycle import CyclicAnalysis, SelectionReport, SupportDecomposition
from ..models.operators import GeometricOperator
from ..models.scenario import Scenario
from ..models.spectrum import Spectrum
from ..models.trajectory import PhaseLedger, Trajectory
from ..operators import geometric_operator
from ..scenario import scenario_spectrum


class VerificationContext:
    """
    One scenario with its spectrum, analysis and reference trajectories.

    Everything beyond the spectrum is computed on first access, so a check
    that fails while building a quantity only fails itself.
    """

    def __init__(self, scenario: Scenario, hbar: float | None = None, method: str = "jacobi") -> None:
        self.scenario = scenario
        self.options = scenario.options
        self.hbar = scenario.hbar if hbar is None else hbar
        self.spectrum: Spectrum = scenario_spectrum(scenario, hbar=self.hbar, method=method)
        self.state = scenario.state_vector()

    @cached_property
    def support(self) -> SupportDecomposition:
        return support(
            self.state,
            self.spectrum,
            eps_support=self.options.eps_support,
            max_denominator=self.options.max_denominator,
            rat_tol=self.options.rat_tol,
        )

    @cached_property
    def analysis(self) -> CyclicAnalysis:
        return analyze_cycle(self.support, self.hbar)

    @property
    def moving_cycle(self) -> bool:
        """Cyclic with a finite period, i.e. cyclic and not stationary."""
        return self.analysis.cyclic and not self.analysis.stationary

    @cached_property
    def selection(self) -> SelectionReport:
        return selection_rule(self.support, self.analysis, self.options.max_denominator, self.options.rat_tol)

    @cached_property
    def operator(self) -> GeometricOperator:
        return geometric_operator(self.analysis, self.spectrum)

    @property
    def gauge(self) -> float:
        return self.analysis.gauge_energy

    @cached_property
    def shifted_norm(self) -> float:
        """Largest |lambda_k - gauge| over the support."""
        return float(np.max(np.abs(self.support.energies - self.gauge)))

    @cached_property
    def window(self) -> float:
        """One period for cyclic states, otherwise one fastest oscillation 2*pi*hbar/|H'|."""
        if self.moving_cycle and self.analysis.period is not None:
            return self.analysis.period
        if self.shifted_norm > 0:
            return 2.0 * math.pi * self.hbar / self.shifted_norm
        return 2.0 * math.pi * self.hbar

    @cached_property
    def samples(self) -> int:
        """Grid size resolving both the period and the fastest oscillation."""
        oscillations = self.window * self.shifted_norm / (2.0 * math.pi * self.hbar)
        return max(self.options.samples_per_period, int(math.ceil(64 * oscillations))) + 1

    @cached_property
    def trajectory(self) -> Trajectory:
        times = np.linspace(0.0, self.window, self.samples)
        return propagate_exact(self.spectrum, self.state, times, gauge=self.gauge)

    @cached_property
    def ledger(self) -> PhaseLedger:
        return phase_ledger(self.trajectory, self.analysis)

    def fidelity_at(self, t: float) -> float:
        """|<psi(0)|psi(t)>| by exact spectral propagation."""
        trajectory = propagate_exact(self.spectrum, self.state, [0.0, t], gauge=self.gauge)
        return float(trajectory.fidelities()[-1])
