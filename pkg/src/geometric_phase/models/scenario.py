"""Scenario file models: Hamiltonian block, initial state and tunables."""

import math
from fractions import Fraction
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

NORM_TOL = 1e-8


class DiagonalHamiltonian(BaseModel):
    """Eigenvalues given exactly as rational multiples of ``scale``."""

    model_config = ConfigDict(extra="forbid")

    type: Literal["diagonal"] = "diagonal"
    eigenvalues: list[str] = Field(min_length=1, description="Rational literals 'p/q' or 'p'")
    scale: float = Field(default=1.0, gt=0, description="Energy of one rational unit")

    @field_validator("eigenvalues", mode="before")
    @classmethod
    def validate_eigenvalues(cls, values: Any) -> Any:
        from ..rational import parse_rational

        if isinstance(values, list):
            for text in values:
                parse_rational(text)
        return values

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)

    def rational_eigenvalues(self) -> list[Fraction]:
        from ..rational import parse_rational

        return [parse_rational(text) for text in self.eigenvalues]

    def to_array(self) -> np.ndarray:
        return np.diag([float(r) * self.scale for r in self.rational_eigenvalues()]).astype(complex)


class DenseHamiltonian(BaseModel):
    """Full complex matrix, rows of ``[re, im]`` pairs."""

    model_config = ConfigDict(extra="forbid")

    type: Literal["dense"] = "dense"
    matrix: list[list[tuple[float, float]]] = Field(min_length=1)

    @field_validator("matrix", mode="before")
    @classmethod
    def nest_flat_matrix(cls, value: Any) -> Any:
        # A flat row-major list of n*n pairs is accepted as well
        if isinstance(value, list) and value and isinstance(value[0], list) and len(value[0]) == 2:
            if all(isinstance(x, int | float) for x in value[0]):
                n = math.isqrt(len(value))
                if n * n != len(value):
                    raise ValueError(f"flat matrix has {len(value)} entries, not a perfect square")
                return [value[i * n:(i + 1) * n] for i in range(n)]
        return value

    @field_validator("matrix")
    @classmethod
    def check_square(cls, value: list[list[tuple[float, float]]]) -> list[list[tuple[float, float]]]:
        n = len(value)
        for i, row in enumerate(value):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
        return value

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    def to_array(self) -> np.ndarray:
        pairs = np.asarray(self.matrix, dtype=float)
        return pairs[..., 0] + 1j * pairs[..., 1]


HamiltonianBlock = Annotated[DiagonalHamiltonian | DenseHamiltonian, Field(discriminator="type")]


class ScenarioOptions(BaseModel):
    """Numerical tunables; every tolerance can be overridden per scenario."""

    model_config = ConfigDict(extra="forbid")

    eps_support: float = Field(default=1e-12, gt=0)
    max_denominator: int = Field(default=10**6, ge=1)
    rat_tol: float = Field(default=1e-9, gt=0)
    deg_tol: float | None = Field(default=None, gt=0, description="Defaults to 1e-10 * max|lambda|")
    herm_tol: float = Field(default=1e-10, gt=0)
    max_dimension: int = Field(default=64, ge=1)
    samples_per_period: int = Field(default=2048, ge=2)
    fidelity_tol: float = Field(default=1e-6, gt=0)


class Scenario(BaseModel):
    """One Hamiltonian, one initial state."""

    model_config = ConfigDict(extra="forbid")

    name: str | None = None
    hbar: float = Field(default=1.0, gt=0)
    hamiltonian: HamiltonianBlock
    state: list[tuple[float, float]] = Field(min_length=1, description="Complex amplitudes as [re, im]")
    normalize: bool = True
    options: ScenarioOptions = Field(default_factory=ScenarioOptions)

    @model_validator(mode="after")
    def check_consistency(self) -> "Scenario":
        n = self.hamiltonian.dimension
        if len(self.state) != n:
            raise ValueError(f"state has {len(self.state)} amplitudes but the hamiltonian has dimension {n}")
        if n > self.options.max_dimension:
            raise ValueError(f"dimension {n} exceeds max_dimension {self.options.max_dimension}")

        norm = float(np.linalg.norm(self.raw_state()))
        if norm == 0.0:
            raise ValueError("state is the zero vector")
        if not self.normalize and abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm:.12g} differs from 1 and normalize is off")

        if isinstance(self.hamiltonian, DenseHamiltonian):
            h = self.hamiltonian.to_array()
            asymmetry = float(np.max(np.abs(h - h.conj().T)))
            if asymmetry > self.options.herm_tol:
                raise ValueError(f"matrix is not Hermitian: max asymmetry {asymmetry:.3e}")
        return self

    @property
    def dimension(self) -> int:
        return self.hamiltonian.dimension

    def raw_state(self) -> np.ndarray:
        pairs = np.asarray(self.state, dtype=float)
        return pairs[:, 0] + 1j * pairs[:, 1]

    def state_vector(self) -> np.ndarray:
        """Initial state, normalized when ``normalize`` is set."""
        psi = self.raw_state()
        if self.normalize:
            psi = psi / np.linalg.norm(psi)
        return psi
