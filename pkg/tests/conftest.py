"""Shared test fixtures and configuration for geometric-phase tests."""

import json
import math
from collections.abc import Callable
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
import pytest

from geometric_phase.cyclic import analyze_state
from geometric_phase.models import CyclicAnalysis, Spectrum
from geometric_phase.operators import two_level_state
from geometric_phase.spectral import commensurate_structure


@pytest.fixture
def three_level_spectrum() -> Spectrum:
    """Exact integer spectrum (0, 1, 3) at hbar = 1."""
    return commensurate_structure([Fraction(0), Fraction(1), Fraction(3)], scale=1.0)


@pytest.fixture
def uniform_three_state() -> np.ndarray:
    """(1, 1, 1)/sqrt(3)."""
    return np.ones(3, dtype=complex) / math.sqrt(3.0)


@pytest.fixture
def three_level_analysis(three_level_spectrum: Spectrum, uniform_three_state: np.ndarray) -> CyclicAnalysis:
    return analyze_state(uniform_three_state, three_level_spectrum)


@pytest.fixture
def two_level_spectrum() -> Spectrum:
    """Exact spectrum (0, 1) at hbar = 1."""
    return commensurate_structure([Fraction(0), Fraction(1)], scale=1.0)


@pytest.fixture
def equator_state() -> np.ndarray:
    """Two-level state at theta = pi/2, (1, 1)/sqrt(2)."""
    return two_level_state(math.pi / 2)


@pytest.fixture
def equator_analysis(two_level_spectrum: Spectrum, equator_state: np.ndarray) -> CyclicAnalysis:
    return analyze_state(equator_state, two_level_spectrum)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so randomized suites are deterministic."""
    return np.random.default_rng(20240611)


@pytest.fixture
def three_level_scenario() -> dict[str, Any]:
    """Scenario payload for the uniform state on the (0, 1, 3) spectrum."""
    return {
        "name": "three-level-uniform",
        "hamiltonian": {"type": "diagonal", "eigenvalues": ["0", "1", "3"], "scale": 1.0},
        "state": [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]],
    }


@pytest.fixture
def pauli_x_scenario() -> dict[str, Any]:
    """Dense Pauli-x Hamiltonian with the state (1, 0), an equal superposition of its eigenstates."""
    return {
        "name": "pauli-x",
        "hamiltonian": {
            "type": "dense",
            "matrix": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
        },
        "state": [[1.0, 0.0], [0.0, 0.0]],
    }


@pytest.fixture
def incommensurate_scenario() -> dict[str, Any]:
    """Uniform state on the dense diagonal spectrum (0, 1, sqrt(2))."""
    root2 = math.sqrt(2.0)
    return {
        "name": "incommensurate",
        "hamiltonian": {
            "type": "dense",
            "matrix": [
                [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [0.0, 0.0], [root2, 0.0]],
            ],
        },
        "state": [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]],
    }


@pytest.fixture
def stationary_scenario() -> dict[str, Any]:
    return {
        "name": "eigenstate",
        "hamiltonian": {"type": "diagonal", "eigenvalues": ["0", "1", "3"]},
        "state": [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
    }


@pytest.fixture
def write_scenario(tmp_path: Path) -> Callable[[dict[str, Any], str], Path]:
    """Write a scenario payload to a JSON file under tmp_path."""

    def _write(payload: dict[str, Any], name: str = "scenario.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
        return path

    return _write


def _rational_weights(rng: np.random.Generator, n: int, square_weights: bool) -> list[Fraction]:
    """
    n positive rational weights summing to one.

    With ``square_weights`` the weights are alpha_i**2 / sum(alpha**2), so a
    square-making omega always exists; otherwise a random composition a_i/b.
    """
    if square_weights:
        alphas = [int(a) for a in rng.integers(1, 5, n)]
        total = sum(a * a for a in alphas)
        return [Fraction(a * a, total) for a in alphas]
    b = int(rng.integers(n, 61))
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, b), size=n - 1, replace=False))
    parts = np.diff([0, *cuts, b])
    return [Fraction(int(a), b) for a in parts]


def _random_commensurate_case(
    rng: np.random.Generator,
    max_levels: int = 4,
    denominators: tuple[int, ...] | range = (1, 2, 3),
    min_weight: float = 0.05,
    rational_weights: bool = False,
    square_weights: bool = False,
) -> tuple[Spectrum, np.ndarray]:
    """
    Small exact spectrum with a random state whose level weights stay above ``min_weight``.

    Levels are distinct rationals k/q with q from ``denominators`` and k below 4q,
    keeping periods and operator scales moderate. ``rational_weights`` draws
    level weights as exact fractions instead (``min_weight`` is then ignored).
    """
    n = int(rng.integers(2, max_levels + 1))
    levels: set[Fraction] = set()
    while len(levels) < n:
        q = int(rng.choice(denominators))
        levels.add(Fraction(int(rng.integers(0, 4 * q)), q))
    eigenvalues = sorted(levels)

    if rational_weights or square_weights:
        weights = np.array([float(w) for w in _rational_weights(rng, n, square_weights)])
    else:
        weights = rng.uniform(0.0, 1.0, n)
        weights = min_weight + (1.0 - n * min_weight) * weights / weights.sum()
    phases = rng.uniform(0.0, 2.0 * math.pi, n)
    state = np.sqrt(weights) * np.exp(1j * phases)
    state = state / np.linalg.norm(state)

    # Random unitary working basis so the spectrum is not trivially diagonal
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    basis, _ = np.linalg.qr(z)
    spectrum = commensurate_structure(eigenvalues, eigenvectors=basis, scale=1.0)
    return spectrum, basis @ state


@pytest.fixture
def random_case(rng: np.random.Generator) -> Callable[..., tuple[Spectrum, np.ndarray]]:
    """Factory drawing seeded random commensurate (spectrum, state) pairs."""

    def _draw(**kwargs: Any) -> tuple[Spectrum, np.ndarray]:
        return _random_commensurate_case(rng, **kwargs)

    return _draw
