"""Data models for the geometric operator and time-operator expectations."""

from typing import Any

import numpy as np
from pydantic import Field, field_serializer

from .common import FrozenModel, array_to_json, complex_to_json


class GeometricOperator(FrozenModel):
    """G_psi = (tau/hbar)(H - lambda_j), diagonal in the eigenbasis."""

    matrix: np.ndarray = Field(description="n x n matrix in the working basis")
    level_entries: np.ndarray = Field(description="Diagonal entry per spectrum level")
    support_entries: np.ndarray = Field(description="2*pi*p_i per support level")
    gauge_index: int
    gauge_energy: float
    period: float
    hbar: float
    delta_G: float = Field(ge=0)
    S_psi: float = Field(ge=0)
    construction_mismatch: float = Field(
        ge=0, description="Max |projector-sum entry - scaled-Hamiltonian entry| on the support"
    )

    @field_serializer("matrix", "level_entries", "support_entries")
    def serialize_arrays(self, values: np.ndarray) -> Any:
        return array_to_json(values)


class OperatorStatistics(FrozenModel):
    expect_G: float
    delta_G: float
    S_psi: float


class OperatorExpectations(FrozenModel):
    """Expectation values of the distance-parametrized operators at one sample."""

    index: int
    t: float
    s: float
    expect_G: float = Field(description="<i s d/ds>, the instantaneous geometric phase")
    expect_T: float = Field(description="<i s (tau/Gamma) d/ds>")
    expect_T_time: float = Field(description="<i t d/d gamma(theta t)>")
    expect_S: float = Field(description="<i s d/d gamma>")
    expect_d_gamma: float = Field(description="<i d/d gamma>, equal to one")
    linear_law: float
    derivative_deviation: float | None = Field(
        default=None, description="|analytic d/ds psi - central difference|, interior samples only"
    )
    commutator_HT: complex | None = None
    commutator_GT: complex | None = None
    commutator_HT_matrix: complex | None = None

    @field_serializer("commutator_HT", "commutator_GT", "commutator_HT_matrix")
    def serialize_complex(self, value: complex | None) -> list[float] | None:
        return complex_to_json(value)


class CommutatorExpectations(FrozenModel):
    """<[H,T]> and <[G,T]> in the generator representation, plus the matrix one."""

    index: int
    t: float
    commutator_HT: complex
    commutator_GT: complex
    commutator_HT_matrix: complex

    @field_serializer("commutator_HT", "commutator_GT", "commutator_HT_matrix")
    def serialize_complex(self, value: complex) -> list[float] | None:
        return complex_to_json(value)
