"""Shared pydantic plumbing for models that carry numpy arrays and fractions."""

from fractions import Fraction
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict


class FrozenModel(BaseModel):
    """Immutable model allowed to hold numpy arrays and ``Fraction`` values."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def fraction_text(value: Fraction | None) -> str | None:
    """Exact ``"p/q"`` rendering used in every JSON dump."""
    return None if value is None else str(value)


def array_to_json(array: np.ndarray | None) -> Any:
    """Nested lists; complex entries become ``[re, im]`` pairs."""
    if array is None:
        return None
    if np.iscomplexobj(array):
        return np.stack([array.real, array.imag], axis=-1).tolist()
    return np.asarray(array).tolist()


def complex_to_json(value: complex | None) -> list[float] | None:
    if value is None:
        return None
    return [float(value.real), float(value.imag)]
