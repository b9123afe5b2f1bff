"""Deterministic low-discrepancy sample points for hypothesis checks.

A seeded Halton sequence gives reproducible reports without grid bias; the
seed offsets the start index so distinct seeds give distinct but repeatable
point sets.
"""

from __future__ import annotations

import numpy as np

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _radical_inverse(i: int, base: int) -> float:
    f, r = 1.0, 0.0
    while i > 0:
        f /= base
        r += f * (i % base)
        i //= base
    return r


def halton(n: int, dim: int, seed: int = 0) -> np.ndarray:
    """First ``n`` points (rows) of a ``dim``-dimensional Halton sequence."""
    if dim > len(_PRIMES):
        raise ValueError(f"halton supports up to {len(_PRIMES)} dimensions")
    start = 97 * (abs(int(seed)) + 1)  # skip the strongly correlated opening run
    out = np.empty((n, dim))
    for d in range(dim):
        base = _PRIMES[d]
        out[:, d] = [_radical_inverse(i, base) for i in range(start, start + n)]
    return out


def sample_box(bounds, n: int, seed: int = 0, margin: float = 0.05) -> np.ndarray:
    """``n`` sample points inside the margin-shrunk box ``bounds``.

    ``bounds`` is a sequence of ``(lo, hi)`` pairs, one per output column.
    """
    pts = halton(n, len(bounds), seed)
    cols = []
    for d, (lo, hi) in enumerate(bounds):
        m = margin * (hi - lo)
        cols.append(lo + m + pts[:, d] * (hi - lo - 2.0 * m))
    return np.column_stack(cols)
