"""Special functions behind the closed-form solutions.

Three families: the Gamma function on the positive half line, the
one-parameter Mittag-Leffler function E_{beta,1} evaluated by its power
series, and generalized Hermite (heat) polynomials

    H_n(f, h) = n! * sum_{r=0}^{floor(n/2)} h^r f^(n-2r) / ((n-2r)! r!)

whose coefficients are computed with exact integer factorials.

Everything here is a pure function of its inputs and safe for concurrent
calls. ``ml_series`` and ``hermite_value`` broadcast elementwise over numpy
arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, FactorialCapError

#: Largest degree with an exact factorial table entry.
FACTORIAL_CAP = 20
_FACTORIALS = tuple(math.factorial(k) for k in range(FACTORIAL_CAP + 1))

#: Relative term threshold and hard term cap for the Mittag-Leffler series.
ML_REL_TOL = 1e-15
ML_MAX_TERMS = 500


@dataclass(frozen=True)
class MLParams:
    """Order and argument for E_{beta,1}.

    ``beta`` lies in (0, 1]; beta = 1 is the classical exponential limit.
    """

    beta: float
    arg: float

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise DomainError(f"Mittag-Leffler order must lie in (0, 1], got {self.beta}")


@dataclass(frozen=True)
class HermiteArgs:
    """Degree and evaluation pair (spatial profile value, time profile value)."""

    n: int
    fval: float
    hval: float

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"polynomial degree must be nonnegative, got {self.n}")


def gamma(x: float) -> float:
    """Gamma function for ``x > 0``, accurate to at least 12 significant digits."""
    if not x > 0:
        raise DomainError(f"gamma requires a positive argument, got {x}")
    return math.gamma(x)


def _gamma_ratio(a: float, b: float) -> float:
    # Gamma(a)/Gamma(b); direct quotient keeps full precision while both
    # arguments stay below the overflow threshold of math.gamma.
    if b <= 170.0:
        return math.gamma(a) / math.gamma(b)
    return math.exp(math.lgamma(a) - math.lgamma(b))


def ml_series(beta: float, z, rel_tol: float = ML_REL_TOL, max_terms: int = ML_MAX_TERMS):
    """Power series for E_{beta,1}(z), elementwise over ``z``.

    Terms are accumulated with compensated (Kahan) summation, which keeps
    alternating series for negative arguments stable at desk scale. Summation
    stops once the running term falls below ``rel_tol`` of the partial sum;
    hitting the term cap while terms are still not decreasing raises
    :class:`ConvergenceError` carrying the partial sum.
    """
    if not 0.0 < beta <= 1.0:
        raise DomainError(f"Mittag-Leffler order must lie in (0, 1], got {beta}")
    zarr = np.asarray(z, dtype=float)
    scalar = zarr.ndim == 0
    zv = np.atleast_1d(zarr).astype(float)

    total = np.ones_like(zv)  # k = 0 term
    comp = np.zeros_like(zv)
    term = np.ones_like(zv)
    last_mag = np.abs(term)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, max_terms + 1):
            term = term * zv * _gamma_ratio(beta * (k - 1) + 1.0, beta * k + 1.0)
            y = term - comp
            tnew = total + y
            comp = (tnew - total) - y
            total = tnew
            mag = np.abs(term)
            if not np.all(np.isfinite(total)):
                partial = float(total[0]) if scalar else total.reshape(zarr.shape)
                raise ConvergenceError(
                    f"Mittag-Leffler series overflowed after {k} terms "
                    f"(|z| up to {float(np.max(np.abs(zv))):.3g})",
                    partial=partial,
                )
            if np.all(mag <= rel_tol * np.maximum(np.abs(total), 1e-300)):
                return float(total[0]) if scalar else total.reshape(zarr.shape)
            last_mag, mag_prev = mag, last_mag
            if k == max_terms and np.any(mag >= mag_prev):
                partial = float(total[0]) if scalar else total.reshape(zarr.shape)
                raise ConvergenceError(
                    f"Mittag-Leffler series hit the {max_terms}-term cap with "
                    f"non-decreasing terms (|z| up to {float(np.max(np.abs(zv))):.3g})",
                    partial=partial,
                )
    return float(total[0]) if scalar else total.reshape(zarr.shape)


def mittag_leffler(p: MLParams) -> float:
    """E_{beta,1}(z) for scalar parameters; see :func:`ml_series`."""
    return float(ml_series(p.beta, p.arg))


def hermite_value(n: int, fval, hval):
    """Generalized Hermite polynomial H_n, elementwise over ``fval``/``hval``.

    Coefficients use exact integer factorials up to degree ``FACTORIAL_CAP``;
    beyond that a :class:`FactorialCapError` applies.
    """
    if n < 0:
        raise DomainError(f"polynomial degree must be nonnegative, got {n}")
    if n > FACTORIAL_CAP:
        raise FactorialCapError(
            f"degree {n} exceeds the exact factorial table (cap {FACTORIAL_CAP})"
        )
    f = np.asarray(fval, dtype=float)
    h = np.asarray(hval, dtype=float)
    scalar = f.ndim == 0 and h.ndim == 0
    total = np.zeros(np.broadcast(f, h).shape)
    for r in range(n // 2 + 1):
        coeff = _FACTORIALS[n] // (_FACTORIALS[n - 2 * r] * _FACTORIALS[r])
        total = total + coeff * h**r * f ** (n - 2 * r)
    return float(total) if scalar else total


def hermite_gen(a: HermiteArgs) -> float:
    """H_n at a single evaluation pair; see :func:`hermite_value`."""
    return float(hermite_value(a.n, a.fval, a.hval))
