"""Data models for propagated trajectories and the numerical oracles built on them."""

from enum import Enum
from typing import Any

import numpy as np
from pydantic import Field, field_serializer

from .common import FrozenModel, array_to_json
from .spectrum import Spectrum


class TrajectoryMethod(str, Enum):
    EXACT = "exact"
    RK4 = "rk4"


class Trajectory(FrozenModel):
    """
    Time/distance sampled states of one evolution.

    Propagation always uses the shifted Hamiltonian H' = H - gauge.
    """

    gauge: float
    hbar: float
    times: np.ndarray
    distances: np.ndarray
    states: np.ndarray = Field(description="Shape (samples, n)")
    speed: float = Field(ge=0, description="Delta H / hbar of the initial state")
    method: TrajectoryMethod
    hamiltonian: np.ndarray = Field(description="Unshifted H in the working basis")
    spectrum: Spectrum | None = None
    dt: float | None = None
    renormalized: bool = False
    norm_drift: float = 0.0
    warnings: list[str] = Field(default_factory=list)

    @property
    def samples(self) -> int:
        return int(self.times.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.states.shape[1])

    @property
    def initial_state(self) -> np.ndarray:
        return self.states[0]

    def shifted_hamiltonian(self) -> np.ndarray:
        n = self.hamiltonian.shape[0]
        return self.hamiltonian - self.gauge * np.eye(n)

    def fidelities(self) -> np.ndarray:
        """|<psi(0)|psi(t)>| for every sample."""
        return np.abs(self.states @ self.states[0].conj())

    @field_serializer("times", "distances", "states", "hamiltonian")
    def serialize_arrays(self, values: np.ndarray) -> Any:
        return array_to_json(values)


class FubiniStudyLength(FrozenModel):
    distances: np.ndarray
    speeds: np.ndarray
    total_length: float
    expected_speed: float
    max_speed_deviation: float
    geodesic_length: float = Field(description="Sum of arccos|<psi_k|psi_k+1>|, independent of H")

    @field_serializer("distances", "speeds")
    def serialize_arrays(self, values: np.ndarray) -> Any:
        return array_to_json(values)


class PhaseLedger(FrozenModel):
    """Per-sample phase bookkeeping along a trajectory."""

    times: np.ndarray
    distances: np.ndarray
    fidelity: np.ndarray
    pancharatnam: np.ndarray = Field(description="arg<psi(0)|psi(t)>, unwrapped")
    dynamical: np.ndarray = Field(description="-epsilon t / hbar")
    sb: np.ndarray = Field(description="pancharatnam - dynamical")
    linear_law: np.ndarray = Field(description="s Gamma / S")
    divergence: np.ndarray = Field(description="Circle distance between sb and linear_law")
    ambiguous_segments: list[tuple[int, int]] = Field(
        default_factory=list, description="Sample ranges where the overlap vanishes or the branch jumps"
    )

    @field_serializer("times", "distances", "fidelity", "pancharatnam", "dynamical", "sb", "linear_law", "divergence")
    def serialize_arrays(self, values: np.ndarray) -> Any:
        return array_to_json(values)


class EomResidual(FrozenModel):
    """Residuals of i S d/ds psi = G psi and i tau d/dt psi = G psi."""

    residual_s: np.ndarray
    residual_t: np.ndarray
    max_residual_s: float
    max_residual_t: float
    max_residual_fd: float | None = Field(default=None, description="Central-difference version, interior samples")

    @field_serializer("residual_s", "residual_t")
    def serialize_arrays(self, values: np.ndarray) -> Any:
        return array_to_json(values)


class CycleDetection(FrozenModel):
    """First return of the state to its initial ray found by scanning."""

    detected: bool
    period: float | None = None
    length: float | None = None
    fidelity: float | None = None
    best_fidelity: float = Field(description="Largest refined fidelity seen away from t = 0")
    fidelity_tol: float
