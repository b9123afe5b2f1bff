"""Invariant-subspace reduction: generator verification, the coefficient ODE
system shared by every catalog entry, its constraint-based linearization,
closed-form and numerically integrated coefficients, and solution assembly.

With one unknown b per generator per axis, every coefficient obeys

    O_t b = b * [ sum_d' 2 A_d'(t) lam_d' (sum of unit-level b's of d')
                  + sum_d' A_d'(t) ]

so the right-hand sides share a common bracket factor. Forcing that bracket
to equal a constant turns the system linear and is solved by Mittag-Leffler
(or exponential) weights; the equal-split axis coefficients make the bracket
identity exact.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ArityError,
    BlowUpError,
    DomainError,
    PoleWarning,
    UnsupportedCheckError,
    UnsupportedConstraintError,
)
from .fields import ScalarField
from .operators import TimeOp, apply_spatial
from .scenarios import Scenario
from .specialfn import ml_series


@dataclass(frozen=True)
class InvariantReport:
    """Max deviation per (axis, property) for the generator checks."""

    deviations: dict

    @property
    def max_dev(self) -> float:
        return max(self.deviations.values()) if self.deviations else 0.0

    def worst(self, prop: str) -> float:
        vals = [v for k, v in self.deviations.items() if k.endswith(":" + prop)]
        return max(vals) if vals else 0.0


def check_invariant_space(sc: Scenario, samples, step: float = 1e-4) -> InvariantReport:
    """Verify M(unit) = 1, M(kernel) = 0, N(M(w)) = 0 and L(w) = lam * w per
    axis over the samples; returns the max deviation per property."""
    devs: dict[str, float] = {}
    for ops, ax in zip(sc.per_dim, sc.dims):
        if not ops.generators:
            continue
        key = ax.name
        for gen in ops.generators:
            want = 1.0 if gen.tag == "unit" else 0.0
            prop = gen.tag
            for p in samples:
                p = tuple(p)
                m_val = apply_spatial(ops.M, gen.field, p, step)
                devs[f"{key}:{prop}"] = max(devs.get(f"{key}:{prop}", 0.0), abs(m_val - want))
                if sc.form == "b" and gen.tag == "unit":
                    n_val = apply_spatial(ops.N, gen.field, p, step)
                    devs[f"{key}:unit-n"] = max(devs.get(f"{key}:unit-n", 0.0), abs(n_val - 1.0))

                def m_of_gen(*q, _ops=ops, _g=gen):
                    return apply_spatial(_ops.M, _g.field, q, step)

                nm = apply_spatial(ops.N, m_of_gen, p, step)
                devs[f"{key}:annihilation"] = max(devs.get(f"{key}:annihilation", 0.0), abs(nm))

                w = float(gen.field(*p))
                eig = abs(ops.L.value(*p) * w - ops.lam * w)
                devs[f"{key}:eigen"] = max(devs.get(f"{key}:eigen", 0.0), eig)
    return InvariantReport(devs)


@dataclass(frozen=True)
class CoeffSystem:
    """Coefficient system with one unknown per generator per axis."""

    labels: tuple[str, ...]
    dims: tuple[int, ...]  # owning axis index per unknown
    unit: tuple[bool, ...]  # unknown enters the bracket sum
    A: tuple[ScalarField, ...]  # per axis
    lam: tuple[float, ...]  # per axis
    time_op: TimeOp

    def bracket(self, t: float, values) -> float:
        values = np.asarray(values, dtype=float)
        out = 0.0
        for d in range(len(self.A)):
            a = float(self.A[d](t))
            unit_sum = float(
                sum(v for v, dd, isu in zip(values, self.dims, self.unit) if dd == d and isu)
            )
            out += 2.0 * a * self.lam[d] * unit_sum + a
        return out

    def rhs(self, t: float, values) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        return values * self.bracket(t, values)


def build_coeff_system(sc: Scenario) -> CoeffSystem:
    """Assemble the shared-bracket system for a catalog entry."""
    labels, dims, unit = [], [], []
    for d, (ops, ax) in enumerate(zip(sc.per_dim, sc.dims)):
        for gen in ops.generators:
            level = 1 if gen.tag == "unit" else 0
            labels.append(f"b[{ax.name}][{level}]")
            dims.append(d)
            unit.append(gen.tag == "unit")
    if not labels:
        raise DomainError(f"scenario {sc.id!r} carries no generators")
    return CoeffSystem(
        labels=tuple(labels),
        dims=tuple(dims),
        unit=tuple(unit),
        A=tuple(ops.A for ops in sc.per_dim),
        lam=tuple(ops.lam for ops in sc.per_dim),
        time_op=sc.time_op,
    )


@dataclass(frozen=True)
class ConstraintSpec:
    """Equal-split coefficients that pin the bracket to a constant."""

    target: float
    A_fields: tuple[ScalarField, ...]
    certified_dev: float


def solve_constraint(sc: Scenario, target: float, n_check: int = 20) -> ConstraintSpec:
    """Equal-split choice A_d(t) = target / (m (1 + 2 E(target f^beta))).

    Certifies, by sampling, that substituting the Mittag-Leffler unit weights
    back into the bracket reproduces ``target``; needs every axis eigenvalue
    constant and equal to one, otherwise the certification fails.
    """
    lams = [ops.lam for ops in sc.per_dim]
    if any(not math.isfinite(l) for l in lams):
        raise UnsupportedConstraintError(
            f"scenario {sc.id!r} has a non-constant multiplication eigenvalue"
        )
    if sc.time_op.is_classical:
        beta, clock_f = 1.0, (lambda t: t)  # exponential limit
    else:
        beta, clock_f = sc.time_op.frac.beta, sc.time_op.frac.f
    m = sc.m

    def E(t):
        return float(ml_series(beta, target * float(clock_f(t)) ** beta))

    def make_A(_m=m):
        def A(t):
            return target / (_m * (1.0 + 2.0 * E(t)))

        return A

    A_fields = tuple(make_A() for _ in range(m))
    ts = np.linspace(sc.time_axis.lo, sc.time_axis.hi, n_check)
    dev = 0.0
    for t in ts:
        e = E(float(t))
        bracket = sum(2.0 * A_fields[d](float(t)) * lams[d] * e + A_fields[d](float(t)) for d in range(m))
        dev = max(dev, abs(bracket - target))
    if dev > 1e-10:
        raise UnsupportedConstraintError(
            f"equal-split certification failed for {sc.id!r}: deviation {dev:.3e}"
        )
    return ConstraintSpec(target=target, A_fields=A_fields, certified_dev=dev)


def coeff_closed_form(kind: str, *, beta: float | None = None, C: float | None = None,
                      clock: ScalarField | None = None, c: float | None = None,
                      t0: float | None = None, interval=None) -> ScalarField:
    """Closed-form coefficient weights.

    kind "mittag": b(t) = E_{beta,1}(C f(t)^beta), f defaulting to the
    identity clock; kind "riccati": b(t) = c (t - t0) / (1 - 2 c (t - t0)),
    warning if the pole 1 - 2c(t - t0) = 0 falls inside ``interval``.
    """
    if kind == "mittag":
        if beta is None or C is None:
            raise DomainError("mittag weights need beta and C")
        f = clock if clock is not None else (lambda t: t)

        def b(t):
            return ml_series(beta, C * np.asarray(f(t), dtype=float) ** beta)

        return b
    if kind == "riccati":
        if c is None or t0 is None:
            raise DomainError("riccati weights need c and t0")
        if c != 0.0:
            pole = t0 + 0.5 / c
            if interval is not None and interval[0] <= pole <= interval[1]:
                warnings.warn(
                    PoleWarning(f"riccati weight has a pole at t = {pole:.6g} inside {interval}")
                )

        def b(t):
            s = t - t0
            return c * s / (1.0 - 2.0 * c * s)

        return b
    raise DomainError(f"unknown closed form kind {kind!r}")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    values: np.ndarray  # shape (len(times), n_unknowns)
    labels: tuple[str, ...]

    def interp(self, t: float) -> np.ndarray:
        return np.array([np.interp(t, self.times, self.values[:, j]) for j in range(self.values.shape[1])])

    def to_csv(self, target) -> None:
        """Write rows (t, b...) to a path or file-like object."""
        own = isinstance(target, (str, bytes))
        fh = open(target, "w", newline="") if own else target
        try:
            writer = csv.writer(fh)
            writer.writerow(["t"] + list(self.labels))
            for i, t in enumerate(self.times):
                writer.writerow([f"{t:.12g}"] + [f"{v:.12g}" for v in self.values[i]])
        finally:
            if own:
                fh.close()

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


_BLOWUP = 1e12


def integrate_coeff_system(system: CoeffSystem, init, t1: float, t_end: float, steps: int) -> Trajectory:
    """Fourth-order explicit integration of the coefficient system.

    Classical time only (the fractional operator has no step-local form);
    deterministic for fixed inputs. Leaving the representable range raises
    :class:`BlowUpError` with the failure time.
    """
    if not system.time_op.is_classical:
        raise UnsupportedCheckError("only the classical system can be time-stepped")
    if steps < 100:
        raise DomainError(f"need at least 100 steps, got {steps}")
    y = np.asarray(init, dtype=float).copy()
    if y.shape != (len(system.labels),):
        raise ArityError(f"expected {len(system.labels)} initial values, got {y.shape}")
    h = (t_end - t1) / steps
    times = np.empty(steps + 1)
    values = np.empty((steps + 1, len(y)))
    times[0] = t1
    values[0] = y
    t = t1
    for i in range(1, steps + 1):
        k1 = system.rhs(t, y)
        k2 = system.rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = system.rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = system.rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t1 + i * h
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > _BLOWUP:
            raise BlowUpError(f"trajectory blew up near t = {t:.6g}", time=t)
        times[i] = t
        values[i] = y
    return Trajectory(times=times, values=values, labels=system.labels)


def assemble_solution(sc: Scenario, coeffs) -> ScalarField:
    """u(x, t) = sum over generators of b(t) * w(x), one weight per generator
    in catalog order. Linear in the weight vector by construction."""
    flat = [(gen, d) for d, ops in enumerate(sc.per_dim) for gen in ops.generators]
    coeffs = tuple(coeffs)
    if len(coeffs) != len(flat):
        raise ArityError(f"need {len(flat)} coefficient fields, got {len(coeffs)}")

    def u(*point):
        t = point[-1]
        total = 0.0
        for (gen, _d), b in zip(flat, coeffs):
            total = total + b(t) * gen.field(*point)
        return total

    return u
