"""First-order spatial operators a(x) d/dx, multiplicative operators, the time
operator wrapper, and machine checks of the structural hypotheses the solution
methods rest on (Leibniz rule, time commutation, factorization, and the
Riccati identity for the coefficient A).

Numerical application uses Richardson-combined central differences (step and
step/2, fourth order). The inverse of a spatial operator is the line integral
of ``u / a`` from an anchor, by composite Simpson quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    SingularPathError,
    StencilError,
    UnsupportedCheckError,
)
from .fields import ScalarField
from .frac import FracParams, caputo_f

_EVAL_ERRORS = (ArithmeticError, ValueError, OverflowError)


@dataclass(frozen=True)
class SpatialOp:
    """Operator coeff(point) * d/d(axis).

    The coefficient is evaluated at the full coordinate point, so it may
    depend on coordinates other than its own axis.
    """

    coeff: ScalarField
    axis: int
    label: str = ""


@dataclass(frozen=True)
class LinearMult:
    """Multiplication operator; ``multiplier=None`` is the identity."""

    multiplier: ScalarField | None = None

    def value(self, *point) -> float:
        if self.multiplier is None:
            return 1.0
        return float(self.multiplier(*point))


IDENTITY = LinearMult()


@dataclass(frozen=True)
class TimeOp:
    """Either the classical d/dt or the fractional evolution derivative."""

    kind: str
    frac: FracParams | None = None

    def __post_init__(self):
        if self.kind not in ("classical", "fractional"):
            raise DomainError(f"unknown time operator kind {self.kind!r}")
        if self.kind == "fractional" and self.frac is None:
            raise DomainError("fractional time operator needs FracParams")

    @staticmethod
    def classical() -> "TimeOp":
        return TimeOp("classical")

    @staticmethod
    def fractional(params: FracParams) -> "TimeOp":
        return TimeOp("fractional", params)

    @property
    def is_classical(self) -> bool:
        return self.kind == "classical"


def _shift(point, axis, delta):
    q = list(point)
    q[axis] += delta
    return tuple(q)


def apply_spatial(op: SpatialOp, u: ScalarField, point, step: float) -> float:
    """coeff(point) times the Richardson-extrapolated central difference of
    ``u`` along the operator's axis (steps ``step`` and ``step/2``)."""
    if not step > 0:
        raise DomainError(f"differencing step must be positive, got {step}")
    ax = op.axis
    try:
        c = float(op.coeff(*point))
        up1 = float(u(*_shift(point, ax, step)))
        um1 = float(u(*_shift(point, ax, -step)))
        up2 = float(u(*_shift(point, ax, 0.5 * step)))
        um2 = float(u(*_shift(point, ax, -0.5 * step)))
    except _EVAL_ERRORS as exc:
        raise StencilError(f"stencil evaluation failed near {point}: {exc}", point=point)
    d_full = (up1 - um1) / (2.0 * step)
    d_half = (up2 - um2) / step
    out = c * (4.0 * d_half - d_full) / 3.0
    if not np.isfinite(out):
        raise StencilError(f"non-finite stencil value at {point}", point=point)
    return out


def inverse_spatial(op: SpatialOp, u: ScalarField, x0: float, x: float, t: float, nodes: int) -> float:
    """Line integral of ``u(s, t) / coeff(s, t)`` from ``x0`` to ``x``.

    Composite Simpson on an even number of panels (at least ``nodes``); the
    coefficient must not vanish on the path.
    """
    if nodes < 16:
        raise DomainError(f"need at least 16 quadrature nodes, got {nodes}")
    if x == x0:
        return 0.0
    panels = nodes + (nodes % 2)
    xs = np.linspace(x0, x, panels + 1)
    try:
        a = np.array([float(op.coeff(s, t)) for s in xs])
        uv = np.array([float(u(s, t)) for s in xs])
    except _EVAL_ERRORS as exc:
        raise StencilError(f"integrand evaluation failed on [{x0}, {x}]: {exc}")
    if np.min(np.abs(a)) < 1e-13 * max(1.0, float(np.max(np.abs(a)))):
        raise SingularPathError(
            f"operator coefficient vanishes on the integration path [{x0}, {x}]"
        )
    g = uv / a
    h = (x - x0) / panels
    weights = np.ones(panels + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return float(h / 3.0 * np.dot(weights, g))


def _apply_any(op, u: ScalarField, point, step: float) -> float:
    # Checks accept either a SpatialOp or a raw operator callable
    # (u, point, step) -> value, so deliberately broken operators can be probed.
    if isinstance(op, SpatialOp):
        return apply_spatial(op, u, point, step)
    return float(op(u, point, step))


def check_leibniz(op, u: ScalarField, v: ScalarField, samples, step: float = 1e-4) -> float:
    """Max |op(uv) - u op(v) - v op(u)| over the samples.

    First-order operators are derivations, so smooth fields stay at the
    differencing floor; any zeroth-order part is flagged at O(|uv|).
    """
    worst = 0.0
    for p in samples:
        p = tuple(p)

        def uv(*q):
            return u(*q) * v(*q)

        dev = abs(
            _apply_any(op, uv, p, step)
            - u(*p) * _apply_any(op, v, p, step)
            - v(*p) * _apply_any(op, u, p, step)
        )
        worst = max(worst, dev)
    return worst


def check_commutator(ot: TimeOp, op, u: ScalarField, samples, step: float = 1e-4, t_step: float = 1e-4) -> float:
    """Max |d/dt(op u) - op(du/dt)| over the samples; classical time only."""
    if not ot.is_classical:
        raise UnsupportedCheckError("commutator check is defined for classical time only")
    worst = 0.0
    for p in samples:
        p = tuple(p)
        coords, t = p[:-1], p[-1]

        def op_u_at(tt):
            return _apply_any(op, u, coords + (tt,), step)

        def du_dt(*q):
            return (u(*q[:-1], q[-1] + t_step) - u(*q[:-1], q[-1] - t_step)) / (2.0 * t_step)

        lhs = (op_u_at(t + t_step) - op_u_at(t - t_step)) / (2.0 * t_step)
        rhs = _apply_any(op, du_dt, p, step)
        worst = max(worst, abs(lhs - rhs))
    return worst


def check_factorization(m, l: LinearMult, n, u: ScalarField, samples, step: float = 1e-4) -> float:
    """Max |m(u) - l * n(u)| over the samples."""
    worst = 0.0
    for p in samples:
        p = tuple(p)
        dev = abs(_apply_any(m, u, p, step) - l.value(*p) * _apply_any(n, u, p, step))
        worst = max(worst, dev)
    return worst


def check_A_ode(ot: TimeOp, A: ScalarField, t_samples, step: float = 1e-4, nodes: int = 2048) -> float:
    """Max |O_t A + A^2| over the sample times (the Riccati identity the
    transform route requires of the coefficient)."""
    worst = 0.0
    for t in t_samples:
        t = float(t)
        try:
            if ot.is_classical:
                dA = (float(A(t + step)) - float(A(t - step))) / (2.0 * step)
            else:
                dA = caputo_f(ot.frac, A, t, nodes)
            val = float(A(t))
        except _EVAL_ERRORS as exc:
            raise DomainError(f"coefficient is singular near t={t}: {exc}")
        if not np.isfinite(dA) or not np.isfinite(val):
            raise DomainError(f"coefficient is singular near t={t}")
        worst = max(worst, abs(dA + val * val))
    return worst
