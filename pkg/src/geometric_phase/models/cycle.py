"""Data models for support extraction, cyclic analysis and the selection rule."""

import math
from fractions import Fraction
from typing import Any

import numpy as np
from pydantic import Field, field_serializer

from .common import FrozenModel, array_to_json, fraction_text


class SupportDecomposition(FrozenModel):
    """The levels a state actually occupies (B_psi, Lambda_psi)."""

    indices: tuple[int, ...] = Field(description="Spectrum level indices carrying weight, ascending in energy")
    amplitudes: np.ndarray = Field(description="phi_i; the projection norm for degenerate levels")
    probabilities: np.ndarray = Field(description="|phi_i|^2 per support level")
    energies: np.ndarray = Field(description="lambda_i per support level")
    levels: tuple[Fraction, ...] = Field(default=(), description="Rational levels r_i, empty if incommensurate")
    base_unit: float = 1.0
    offset: float = 0.0
    commensurate: bool
    eps_support: float
    dimension: int
    state: np.ndarray
    diagnostic: str | None = None

    @property
    def size(self) -> int:
        return len(self.indices)

    @field_serializer("amplitudes", "probabilities", "energies", "state")
    def serialize_arrays(self, values: np.ndarray) -> Any:
        return array_to_json(values)

    @field_serializer("levels")
    def serialize_levels(self, levels: tuple[Fraction, ...]) -> list[str | None]:
        return [fraction_text(r) for r in levels]


class CyclicAnalysis(FrozenModel):
    """
    Period, phases and p-coefficients of one state under one Hamiltonian.

    ``unreduced_phase`` keeps the winding (m_j = 0 under the chosen gauge)
    and feeds the operator identities; ``geometric_phase`` is its reduction
    into [0, 2*pi) and feeds reporting and the selection rule.
    """

    support: SupportDecomposition
    hbar: float
    cyclic: bool
    stationary: bool
    period_lcm: Fraction | None = Field(default=None, description="L_psi in units of 1/u")
    period: float | None = Field(default=None, description="tau_psi = 2*pi*hbar*L/u")
    gauge_index: int = Field(description="Spectrum level index of the gauge lambda_j")
    gauge_position: int = Field(description="Position of the gauge level inside the support")
    gauge_energy: float
    p_coefficients: tuple[int, ...] = ()
    total_phase: float | None = Field(default=None, description="phi in (-pi, pi]")
    total_phase_winding: int | None = Field(default=None, description="m with -tau*lambda_j/hbar = phi + 2*pi*m")
    unreduced_phase: float = 0.0
    geometric_phase: float = 0.0
    expectation_energy: float
    energy_uncertainty: float
    diagnostic: str | None = None

    @property
    def energy_offset(self) -> float:
        """epsilon = <H> - lambda_j."""
        return self.expectation_energy - self.gauge_energy

    @property
    def speed(self) -> float:
        """Fubini-Study speed of evolution, Delta H / hbar."""
        return self.energy_uncertainty / self.hbar

    @property
    def length(self) -> float | None:
        """S_psi, the Fubini-Study length of one cycle."""
        if self.period is None:
            return None
        return self.period * self.speed

    @property
    def m_coefficients(self) -> tuple[int, ...]:
        """Per-level integers m_i; the gauge level carries m_j = 0."""
        return self.p_coefficients

    def p_matrix(self) -> list[list[int]]:
        """All p_ij = (r_i - r_j) * L over the support, exact."""
        if self.period_lcm is None:
            return []
        levels = self.support.levels
        return [[int((ri - rj) * self.period_lcm) for rj in levels] for ri in levels]

    @field_serializer("period_lcm")
    def serialize_lcm(self, value: Fraction | None) -> str | None:
        return fraction_text(value)


class SelectionReport(FrozenModel):
    """Rational decomposition of the support probabilities and the phase lattice."""

    probabilities_rational: bool
    probabilities: tuple[Fraction, ...] = ()
    omega_prime: int | None = None
    omega: int | None = None
    alpha: tuple[int, ...] | None = None
    lattice_index: int | None = Field(default=None, description="n with gamma = 2*pi*n/omega'")

    @property
    def lattice_step(self) -> float | None:
        if self.omega_prime is None:
            return None
        return 2 * math.pi / self.omega_prime

    def allowed_phases(self, limit: int = 64) -> list[float]:
        """The first ``limit`` points 2*pi*n/omega' of the phase lattice."""
        if self.omega_prime is None:
            return []
        return [2 * math.pi * n / self.omega_prime for n in range(min(self.omega_prime, limit))]

    @field_serializer("probabilities")
    def serialize_probabilities(self, values: tuple[Fraction, ...]) -> list[str | None]:
        return [fraction_text(v) for v in values]


class NearRecurrence(FrozenModel):
    """Closest-return search over repeated cycles."""

    target_cycles: int
    cycles: int | None = None
    distance: float | None = None
    tol: float
    q_max: int

    @property
    def found(self) -> bool:
        return self.cycles is not None
