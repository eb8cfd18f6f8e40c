from fractions import Fraction
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer

from .common import FrozenModel, array_to_json, fraction_text


class RationalizationResult(BaseModel):
    """Best rational approximation of a real number."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    value: Fraction
    residual: float = Field(ge=0, description="|x - p/q|")
    converged: bool

    @field_serializer("value")
    def serialize_value(self, value: Fraction) -> str | None:
        return fraction_text(value)


class Eigensystem(FrozenModel):
    """Eigendecomposition with near-degenerate eigenvalues merged into levels."""

    raw_eigenvalues: np.ndarray = Field(description="All n eigenvalues, ascending")
    eigenvalues: np.ndarray = Field(description="One value per merged level, ascending")
    eigenvectors: tuple[np.ndarray, ...] = Field(description="Per level, shape (n, d_k), orthonormal columns")
    deg_tol: float
    method: str = "jacobi"

    @field_serializer("raw_eigenvalues", "eigenvalues")
    def serialize_values(self, values: np.ndarray) -> Any:
        return array_to_json(values)

    @field_serializer("eigenvectors")
    def serialize_vectors(self, vectors: tuple[np.ndarray, ...]) -> Any:
        return [array_to_json(v) for v in vectors]


class Spectrum(FrozenModel):
    """
    Distinct levels of a Hamiltonian with their eigenspaces.

    For a commensurate spectrum every level energy is
    ``offset + levels[k] * base_unit`` with ``levels`` exact rationals.
    """

    eigenvalues: np.ndarray = Field(description="Level energies, strictly ascending")
    eigenvectors: tuple[np.ndarray, ...] = Field(description="Per level, shape (n, d_k)")
    commensurate: bool
    base_unit: float = Field(default=1.0, gt=0)
    offset: float = 0.0
    levels: tuple[Fraction, ...] = ()
    hbar: float = Field(default=1.0, gt=0)
    deg_tol: float = 0.0
    raw_eigenvalues: np.ndarray | None = None
    diagnostic: str | None = None

    @property
    def dimension(self) -> int:
        return int(self.eigenvectors[0].shape[0])

    @property
    def level_count(self) -> int:
        return len(self.eigenvalues)

    @property
    def degeneracies(self) -> list[int]:
        return [int(v.shape[1]) for v in self.eigenvectors]

    def coefficients(self, state: np.ndarray) -> list[np.ndarray]:
        """Components of ``state`` inside each eigenspace."""
        return [v.conj().T @ state for v in self.eigenvectors]

    def level_weights(self, state: np.ndarray) -> np.ndarray:
        """Total projection weight of ``state`` on each level."""
        return np.array([float(np.vdot(c, c).real) for c in self.coefficients(state)])

    def projector(self, k: int) -> np.ndarray:
        v = self.eigenvectors[k]
        return v @ v.conj().T

    def matrix(self) -> np.ndarray:
        """Rebuild the Hamiltonian as a sum of spectral projectors."""
        n = self.dimension
        h = np.zeros((n, n), dtype=complex)
        for energy, v in zip(self.eigenvalues, self.eigenvectors, strict=True):
            h += energy * (v @ v.conj().T)
        return h

    def energy_of(self, k: int) -> float:
        return float(self.eigenvalues[k])

    @field_serializer("eigenvalues", "raw_eigenvalues")
    def serialize_values(self, values: np.ndarray | None) -> Any:
        return array_to_json(values)

    @field_serializer("eigenvectors")
    def serialize_vectors(self, vectors: tuple[np.ndarray, ...]) -> Any:
        return [array_to_json(v) for v in vectors]

    @field_serializer("levels")
    def serialize_levels(self, levels: tuple[Fraction, ...]) -> list[str | None]:
        return [fraction_text(r) for r in levels]
