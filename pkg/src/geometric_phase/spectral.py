"""Diagonalization, degeneracy merging and commensurability of spectra."""

import math
from collections.abc import Sequence
from fractions import Fraction

import numpy as np

from .logging_config import get_logger
from .models.spectrum import Eigensystem, Spectrum
from .rational import DEFAULT_MAX_DENOMINATOR, DEFAULT_RAT_TOL, recognize_rational

logger = get_logger(__name__)

DEFAULT_HERM_TOL = 1e-10
DEFAULT_MAX_DIMENSION = 64
NORM_TOL = 1e-10
JACOBI_MAX_SWEEPS = 100


def check_hermitian(H: np.ndarray, herm_tol: float = DEFAULT_HERM_TOL) -> float:
    """Return the max entry asymmetry |H - H^dagger|, raising if above ``herm_tol``."""
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"hamiltonian must be a square matrix, got shape {H.shape}")
    asymmetry = float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0
    if asymmetry > herm_tol:
        raise ValueError(f"matrix is not Hermitian: max asymmetry {asymmetry:.3e}")
    return asymmetry


def check_state(state: np.ndarray, dimension: int, norm_tol: float = NORM_TOL) -> np.ndarray:
    """Validate a state vector against a dimension and the unit norm."""
    psi = np.asarray(state, dtype=complex).reshape(-1)
    if psi.shape[0] != dimension:
        raise ValueError(f"dimension mismatch: state has {psi.shape[0]} components, expected {dimension}")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > norm_tol:
        raise ValueError(f"state is not normalized (norm {norm:.15g})")
    return psi


def jacobi_eigh(H: np.ndarray, tol: float = 1e-14, max_sweeps: int = JACOBI_MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """
    Cyclic Jacobi eigendecomposition of a complex Hermitian matrix.

    Each rotation first removes the phase of the pivot a_pq with a diagonal
    unitary, then applies the real Jacobi rotation that zeroes it.

    Returns:
        Eigenvalues (ascending) and eigenvectors as columns.
    """
    a = np.array(H, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(a))
    if n < 2 or scale == 0.0:
        order = np.argsort(a.diagonal().real)
        return a.diagonal().real[order], v[:, order]

    previous_off = math.inf
    for sweep in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(a.diagonal())))
        # Quadratic convergence only stalls once roundoff dominates
        if off <= tol * scale or off >= previous_off:
            logger.debug(f"Jacobi converged after {sweep} sweeps (off-diagonal {off:.3e})")
            break
        previous_off = off
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                magnitude = abs(apq)
                if magnitude <= 1e-18 * scale:
                    continue
                phase = apq / magnitude
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * magnitude)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # Block unitary: diag(1, conj(phase)) @ [[c, s], [-s, c]]
                u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ u
    else:
        logger.warning(f"Jacobi did not converge in {max_sweeps} sweeps")

    eigenvalues = a.diagonal().real
    order = np.argsort(eigenvalues)
    return eigenvalues[order], v[:, order]


def _group_levels(values: np.ndarray, vectors: np.ndarray, deg_tol: float) -> tuple[np.ndarray, tuple[np.ndarray, ...]]:
    """Merge ascending eigenvalues closer than ``deg_tol`` into levels."""
    groups: list[list[int]] = []
    for k in range(len(values)):
        if groups and values[k] - values[groups[-1][-1]] <= deg_tol:
            groups[-1].append(k)
        else:
            groups.append([k])

    energies = np.array([float(np.mean(values[g])) for g in groups])
    blocks = []
    for g in groups:
        block = vectors[:, g]
        if len(g) > 1:
            block, _ = np.linalg.qr(block)
        blocks.append(block)
    return energies, tuple(blocks)


def default_deg_tol(values: np.ndarray) -> float:
    largest = float(np.max(np.abs(values))) if len(values) else 0.0
    return 1e-10 * largest if largest > 0 else 1e-10


def diagonalize(
    H: np.ndarray,
    deg_tol: float | None = None,
    herm_tol: float = DEFAULT_HERM_TOL,
    max_dimension: int = DEFAULT_MAX_DIMENSION,
    method: str = "jacobi",
) -> Eigensystem:
    """
    Eigendecomposition of a dense Hermitian matrix with degeneracy merging.

    Args:
        H: Hermitian matrix
        deg_tol: Eigenvalues within this distance form one level (default 1e-10 * max|lambda|)
        herm_tol: Maximum tolerated entry asymmetry
        max_dimension: Largest accepted dimension
        method: ``"jacobi"`` (reference) or ``"lapack"`` (numpy.linalg.eigh)
    """
    H = np.asarray(H, dtype=complex)
    check_hermitian(H, herm_tol)
    n = H.shape[0]
    if n > max_dimension:
        raise ValueError(f"dimension {n} exceeds max_dimension {max_dimension}")

    # Symmetrize away the tolerated asymmetry before solving
    hermitian = 0.5 * (H + H.conj().T)
    if method == "jacobi":
        values, vectors = jacobi_eigh(hermitian)
    elif method == "lapack":
        values, vectors = np.linalg.eigh(hermitian)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")

    tol = default_deg_tol(values) if deg_tol is None else deg_tol
    energies, blocks = _group_levels(values, vectors, tol)
    if len(energies) < n:
        logger.debug(f"Merged {n} eigenvalues into {len(energies)} levels (deg_tol={tol:.3e})")
    return Eigensystem(raw_eigenvalues=values, eigenvalues=energies, eigenvectors=blocks, deg_tol=tol, method=method)


def _rational_spectrum(
    eigenvalues: Sequence[Fraction],
    scale: float,
    eigenvectors: np.ndarray | None,
    hbar: float,
) -> Spectrum:
    """Exact path: rational levels given, no rationalization needed."""
    n = len(eigenvalues)
    basis = np.eye(n, dtype=complex) if eigenvectors is None else np.asarray(eigenvectors, dtype=complex)
    distinct = sorted(set(eigenvalues))
    blocks = tuple(basis[:, [k for k, r in enumerate(eigenvalues) if r == level]] for level in distinct)
    return Spectrum(
        eigenvalues=np.array([float(r) * scale for r in distinct]),
        eigenvectors=blocks,
        commensurate=True,
        base_unit=scale,
        offset=0.0,
        levels=tuple(distinct),
        hbar=hbar,
        deg_tol=0.0,
        raw_eigenvalues=np.array(sorted(float(r) * scale for r in eigenvalues)),
    )


def rational_structure(
    energies: Sequence[float],
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    rat_tol: float = DEFAULT_RAT_TOL,
) -> tuple[float, float, tuple[Fraction, ...]] | str:
    """
    Write distinct ascending energies as offset + r_k * u with integer r_k.

    Returns ``(u, offset, levels)`` or a diagnostic naming the failing ratio.
    """
    values = [float(e) for e in energies]
    if len(values) == 1:
        return 1.0, values[0], (Fraction(0),)

    base = values[1] - values[0]
    if base <= 0:
        return f"levels not strictly increasing at index 1 ({values[0]!r}, {values[1]!r})"

    ratios: list[Fraction] = [Fraction(0), Fraction(1)]
    for k in range(2, len(values)):
        rho = (values[k] - values[0]) / base
        recognized = recognize_rational(rho, max_denominator, rat_tol)
        if recognized is None:
            return (
                f"spacing ratio (E{k}-E0)/(E1-E0) = {rho:.12g} is not rational "
                f"within rat_tol={rat_tol:g}, max_denominator={max_denominator}"
            )
        ratios.append(recognized)

    common = math.lcm(*(r.denominator for r in ratios))
    unit = base / common
    return unit, values[0], tuple(r * common for r in ratios)


def commensurate_structure(
    eigenvalues: Sequence[float] | Sequence[Fraction],
    eigenvectors: np.ndarray | Sequence[np.ndarray] | None = None,
    scale: float | None = None,
    hbar: float = 1.0,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    rat_tol: float = DEFAULT_RAT_TOL,
    deg_tol: float | None = None,
) -> Spectrum:
    """
    Build a Spectrum, deciding whether all spacing ratios are rational.

    Rational eigenvalues with an explicit ``scale`` are taken exactly. Real
    eigenvalues are merged within ``deg_tol``; ``eigenvectors`` may be an
    n x n matrix of columns (one per eigenvalue) or per-level blocks.
    Incommensurate spectra are a valid result with ``commensurate=False``.
    """
    if len(eigenvalues) == 0:
        raise ValueError("spectrum needs at least one eigenvalue")
    if hbar <= 0:
        raise ValueError("hbar must be positive")

    if scale is not None and all(isinstance(e, Fraction | int) for e in eigenvalues):
        if scale <= 0:
            raise ValueError("scale must be positive")
        matrix = None if eigenvectors is None else np.asarray(eigenvectors, dtype=complex)
        return _rational_spectrum([Fraction(e) for e in eigenvalues], scale, matrix, hbar)

    if eigenvectors is not None and not isinstance(eigenvectors, np.ndarray):
        blocks = tuple(np.asarray(b, dtype=complex) for b in eigenvectors)
        energies = np.asarray([float(e) for e in eigenvalues])
        raw = energies
        tol = default_deg_tol(energies) if deg_tol is None else deg_tol
    else:
        raw = np.asarray([float(e) for e in eigenvalues])
        order = np.argsort(raw)
        raw = raw[order]
        n = len(raw)
        columns = np.eye(n, dtype=complex) if eigenvectors is None else np.asarray(eigenvectors, dtype=complex)[:, order]
        tol = default_deg_tol(raw) if deg_tol is None else deg_tol
        energies, blocks = _group_levels(raw, columns, tol)

    structure = rational_structure(energies, max_denominator, rat_tol)
    if isinstance(structure, str):
        logger.debug(f"Incommensurate spectrum: {structure}")
        return Spectrum(
            eigenvalues=energies,
            eigenvectors=blocks,
            commensurate=False,
            hbar=hbar,
            deg_tol=tol,
            raw_eigenvalues=raw,
            diagnostic=structure,
        )

    unit, offset, levels = structure
    snapped = np.array([offset + float(r) * unit for r in levels])
    return Spectrum(
        eigenvalues=snapped,
        eigenvectors=blocks,
        commensurate=True,
        base_unit=unit,
        offset=offset,
        levels=levels,
        hbar=hbar,
        deg_tol=tol,
        raw_eigenvalues=raw,
    )


def build_spectrum(
    H: np.ndarray,
    hbar: float = 1.0,
    deg_tol: float | None = None,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    rat_tol: float = DEFAULT_RAT_TOL,
    herm_tol: float = DEFAULT_HERM_TOL,
    max_dimension: int = DEFAULT_MAX_DIMENSION,
    method: str = "jacobi",
) -> Spectrum:
    """Diagonalize a dense Hamiltonian and classify its spectrum."""
    system = diagonalize(H, deg_tol=deg_tol, herm_tol=herm_tol, max_dimension=max_dimension, method=method)
    spectrum = commensurate_structure(
        system.eigenvalues,
        eigenvectors=system.eigenvectors,
        hbar=hbar,
        max_denominator=max_denominator,
        rat_tol=rat_tol,
        deg_tol=system.deg_tol,
    )
    return spectrum.model_copy(update={"raw_eigenvalues": system.raw_eigenvalues})


def expectation_energy(state: np.ndarray, spectrum: Spectrum) -> float:
    """<psi|H|psi> = sum_k lambda_k |P_k psi|^2."""
    psi = check_state(state, spectrum.dimension)
    weights = spectrum.level_weights(psi)
    return float(np.dot(spectrum.eigenvalues, weights))


def energy_uncertainty(state: np.ndarray, spectrum: Spectrum) -> float:
    """Delta H = (<H^2> - <H>^2)^(1/2), evaluated as a weighted spread around <H>."""
    psi = check_state(state, spectrum.dimension)
    weights = spectrum.level_weights(psi)
    mean = float(np.dot(spectrum.eigenvalues, weights))
    variance = float(np.dot(weights, (spectrum.eigenvalues - mean) ** 2))
    return math.sqrt(max(variance, 0.0))


def speed_of_evolution(state: np.ndarray, spectrum: Spectrum) -> float:
    """Fubini-Study speed Delta H / hbar, constant for time-independent H."""
    return energy_uncertainty(state, spectrum) / spectrum.hbar
