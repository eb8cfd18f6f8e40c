"""Angle reduction helpers shared by the phase bookkeeping."""

import math

import numpy as np

TWO_PI = 2.0 * math.pi
WRAP_SNAP = 1e-12


def reduce_angle(angle: float, snap: float = WRAP_SNAP) -> float:
    """
    Reduce an angle into [0, 2*pi).

    Values within ``snap`` of a multiple of 2*pi are returned as exactly 0,
    on either side of the cut.
    """
    reduced = math.fmod(angle, TWO_PI)
    if reduced < 0:
        reduced += TWO_PI
    if reduced >= TWO_PI - snap or reduced < snap:
        return 0.0
    return reduced


def principal_angle(angle: float) -> float:
    """Principal value in (-pi, pi]."""
    value = math.remainder(angle, TWO_PI)
    if value <= -math.pi:
        value += TWO_PI
    return value


def circle_distance(a: float, b: float) -> float:
    """Distance between two angles measured along the unit circle, in [0, pi]."""
    return abs(math.remainder(a - b, TWO_PI))


def circle_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorized :func:`circle_distance`."""
    diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return np.abs(np.remainder(diff + math.pi, TWO_PI) - math.pi)
