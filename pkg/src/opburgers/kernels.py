"""Radial heat density of Brownian motion on the hyperbolic plane, and the
nonlinear solution field derived from its logarithmic derivative.

The density at geodesic radius ``eta`` and time ``t`` is

    phi(eta, t) = e^(-t/4) / (sqrt(pi) (2t)^(3/2))
                  * int_eta^inf  psi e^(-psi^2/(4t)) / sqrt(cosh psi - cosh eta) dpsi.

The substitution ``psi = eta + v^2`` removes the inverse-square-root endpoint
singularity (cosh psi - cosh eta ~ sinh(eta) v^2 near v = 0), after which the
integrand is smooth and Gaussian-tailed. It is integrated by panel-doubling
composite Gauss-Legendre quadrature until the requested relative tolerance is
met, truncated where the Gaussian factor is below double-precision relevance.

The t -> 0 limit (a point mass at eta = 0) is excluded: both arguments must be
strictly positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError
from .fields import ScalarField

_GL_ORDER = 16
_MAX_DOUBLINGS = 10
_gl_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


@dataclass(frozen=True)
class KernelPoint:
    """Evaluation point; both coordinates strictly positive."""

    eta: float
    t: float

    def __post_init__(self):
        if not self.eta > 0:
            raise DomainError(f"radial coordinate must be positive, got {self.eta}")
        if not self.t > 0:
            raise DomainError(f"time must be positive, got {self.t}")


def _gl_rule(npanels: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights of composite Gauss-Legendre on [0, 1] with npanels panels."""
    if npanels not in _gl_cache:
        x, w = np.polynomial.legendre.leggauss(_GL_ORDER)
        edges = np.linspace(0.0, 1.0, npanels + 1)
        half = 0.5 * np.diff(edges)
        mids = 0.5 * (edges[:-1] + edges[1:])
        nodes = (mids[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        _gl_cache[npanels] = (nodes, weights)
    return _gl_cache[npanels]


def _integral(eta: float, t: float, npanels: int) -> float:
    vmax = math.sqrt(8.0 * math.sqrt(2.0 * t) + 5.0)
    x, w = _gl_rule(npanels)
    v = vmax * x
    psi = eta + v * v
    # cosh(psi) - cosh(eta) = 2 sinh(eta + v^2/2) sinh(v^2/2), cancellation-free
    root = np.sqrt(2.0 * np.sinh(eta + 0.5 * v * v) * np.sinh(0.5 * v * v))
    integrand = 2.0 * v * psi * np.exp(-(psi * psi) / (4.0 * t)) / root
    return vmax * float(np.dot(w, integrand))


def hyperbolic_heat_density(p: KernelPoint, rel_tol: float = 1e-10) -> float:
    """Density phi(eta, t); positive for all valid points.

    ``rel_tol`` controls the quadrature stopping test; failing to reach it
    within the panel-doubling budget raises :class:`AccuracyError` carrying
    the last estimate.
    """
    if not 1e-12 < rel_tol < 1e-3:
        raise DomainError(f"rel_tol must lie in (1e-12, 1e-3), got {rel_tol}")
    pref = math.exp(-p.t / 4.0) / (math.sqrt(math.pi) * (2.0 * p.t) ** 1.5)
    npanels = 8
    last = _integral(p.eta, p.t, npanels)
    for _ in range(_MAX_DOUBLINGS):
        npanels *= 2
        cur = _integral(p.eta, p.t, npanels)
        if abs(cur - last) <= rel_tol * max(abs(cur), 1e-300):
            return pref * cur
        last = cur
    raise AccuracyError(
        f"density quadrature did not reach rel_tol={rel_tol} at (eta={p.eta}, t={p.t})",
        estimate=pref * last,
    )


def cached_density(rel_tol: float = 1e-10) -> ScalarField:
    """Memoized density field ``(eta, t) -> phi``.

    The memo table is filled on use; fill it from a single thread, after which
    concurrent reads are safe.
    """
    table: dict[tuple[float, float], float] = {}

    def field(eta, t):
        key = (float(eta), float(t))
        if key not in table:
            table[key] = hyperbolic_heat_density(KernelPoint(*key), rel_tol)
        return table[key]

    return field


def brownian_burgers_solution(p: KernelPoint, t0: float, step: float = 1e-3, rel_tol: float = 1e-10, density: ScalarField | None = None) -> float:
    """Solution value (t - t0) * sinh(eta) * d/deta ln phi at the point.

    The log derivative uses Richardson-combined central differences at the
    given step on (cached) density evaluations. Any positive rescaling of the
    density leaves the result unchanged.
    """
    if p.t == t0:
        raise DomainError("t must differ from the coefficient anchor t0")
    phi = density if density is not None else cached_density(rel_tol)

    def logphi(eta):
        return math.log(phi(eta, p.t))

    d_full = (logphi(p.eta + step) - logphi(p.eta - step)) / (2.0 * step)
    d_half = (logphi(p.eta + 0.5 * step) - logphi(p.eta - 0.5 * step)) / step
    deriv = (4.0 * d_half - d_full) / 3.0
    return (p.t - t0) * math.sinh(p.eta) * deriv


def burgers_field(t0: float, step: float = 1e-3, rel_tol: float = 1e-10, density: ScalarField | None = None) -> ScalarField:
    """Field ``(eta, t) -> u`` wrapping :func:`brownian_burgers_solution`
    around a shared density cache."""
    phi = density if density is not None else cached_density(rel_tol)

    def field(eta, t):
        return brownian_burgers_solution(
            KernelPoint(float(eta), float(t)), t0, step=step, rel_tol=rel_tol, density=phi
        )

    return field
