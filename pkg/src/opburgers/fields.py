"""Field conventions used throughout the package.

A *scalar field* is any callable returning a real number. Spatial-side fields
take the full coordinate point plus time, splatted: ``f(x1, ..., xm, t)``.
Time-side fields (coefficients, solution weights, clocks) take ``f(t)`` alone.

Fields written in terms of numpy ufuncs broadcast over array arguments; the
fractional-derivative quadrature relies on this for array time arguments and
falls back to elementwise evaluation otherwise.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

ScalarField = Callable[..., float]


def constant(value: float) -> ScalarField:
    """Field that ignores its arguments and returns ``value``."""

    def field(*_args):
        return value

    return field


def eval_time_field(b: ScalarField, t):
    """Evaluate a time field at a scalar or 1-d array ``t``.

    Vectorized evaluation is attempted first; fields that only accept scalars
    are evaluated elementwise.
    """
    arr = np.asarray(t, dtype=float)
    if arr.ndim == 0:
        return float(b(float(arr)))
    try:
        out = np.asarray(b(arr), dtype=float)
        if out.shape == arr.shape:
            return out
    except Exception:
        pass
    return np.array([float(b(float(x))) for x in arr])
