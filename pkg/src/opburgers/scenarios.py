"""Catalog of equation instances.

Each entry bundles, per spatial axis, a first-order operator pair (N, M), a
multiplication operator L with its constant eigenvalue on the generator span,
a time coefficient A_d, and a {unit, kernel} generator pair; plus the working
domain, the time operator, and closed-form candidate solutions. The equation
evaluated by the residual module is

    O_t u - sum_d A_d(t) X_d(u L_d(u)) = sum_d N_d(M_d(u)) + (sum_d A_d(t)) u

with X = M for form "a" and X = N for form "b".

Catalog ids and headline solutions:

    euclid-classic   flat line, classical time, Riccati-weight solution
    euclid-frac      flat line, fractional time, Mittag-Leffler solution
    hyp-sinh         radial half-plane pair sinh(eta) d/deta twice
    hyp-csch         radial half-plane pair csch(eta) d/deta twice
    hyp-mixed        mixed pair with L = csch^2, Brownian-kernel solution
    hyp-frac         fractional time on the radial half-plane
    hyp-2d           full hyperbolic plane, two axes, fractional time
    schwarzschild    static black-hole background, four axes plus evolution
    cigar            steady-soliton plane metric moving in time

Geometric units G = M = c = 1 throughout the curved entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import kernels
from .errors import DomainError, SingularMetricError
from .fields import ScalarField
from .frac import identity_clock
from .operators import IDENTITY, LinearMult, SpatialOp, TimeOp
from .specialfn import hermite_value, ml_series


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float

    @property
    def extent(self) -> float:
        return self.hi - self.lo

    def interval(self) -> tuple[float, float]:
        return (self.lo, self.hi)


@dataclass(frozen=True)
class Generator:
    """Spatial generator; tag "unit" means M(w) = 1, "kernel" means M(w) = 0."""

    field: ScalarField
    tag: str
    label: str


@dataclass(frozen=True)
class DimOperators:
    """Operator data attached to one spatial axis."""

    N: SpatialOp
    M: SpatialOp
    L: LinearMult
    lam: float  # eigenvalue of L on the generator span
    A: ScalarField  # time coefficient for this axis
    generators: tuple[Generator, ...]


@dataclass(frozen=True)
class Metric:
    """Diagonal metric backing a catalog entry.

    ``composition`` records which operator composition reproduces the metric
    Laplacian: "NM" for sum_d N_d(M_d(.)), "MN" for the companion order.
    ``radial_only`` restricts the comparison to functions of the first axis.
    """

    g_diag: tuple[ScalarField, ...]
    composition: str = "NM"
    radial_only: bool = False
    note: str = ""


@dataclass(frozen=True)
class Scenario:
    id: str
    equation: str
    dims: tuple[Axis, ...]
    time_axis: Axis
    time_op: TimeOp
    per_dim: tuple[DimOperators, ...]
    form: str
    exact_solution: ScalarField
    solution_label: str
    alt_solutions: Mapping[str, ScalarField] = field(default_factory=dict)
    linear_companion: ScalarField | None = None
    hermite_profile: ScalarField | None = None
    metric: Metric | None = None
    params: Mapping[str, float] = field(default_factory=dict)
    transform_route: bool = False
    variant: "Scenario | None" = None
    note: str = ""

    def __post_init__(self):
        if self.form not in ("a", "b"):
            raise DomainError(f"form must be 'a' or 'b', got {self.form!r}")
        if len(self.per_dim) != len(self.dims):
            raise DomainError("one operator bundle required per axis")

    @property
    def m(self) -> int:
        return len(self.dims)

    def point_bounds(self) -> list[tuple[float, float]]:
        """Axis intervals followed by the working time interval."""
        return [ax.interval() for ax in self.dims] + [self.time_axis.interval()]

    def solutions(self) -> dict[str, ScalarField]:
        out = {self.solution_label: self.exact_solution}
        out.update(self.alt_solutions)
        return out

    def describe(self) -> dict:
        return {
            "id": self.id,
            "equation": self.equation,
            "form": self.form,
            "time_op": self.time_op.kind,
            "dims": [{"name": a.name, "lo": a.lo, "hi": a.hi} for a in self.dims],
            "time": {"name": self.time_axis.name, "lo": self.time_axis.lo, "hi": self.time_axis.hi},
            "params": dict(self.params),
            "solution": self.solution_label,
            "generators": [
                [g.label for g in ops.generators] for ops in self.per_dim
            ],
        }


# --------------------------------------------------------------------------
# shared field builders


def riccati_weight(c: float, t0: float) -> ScalarField:
    """b(t) = c (t - t0) / (1 - 2 c (t - t0))."""

    def b(t):
        s = t - t0
        return c * s / (1.0 - 2.0 * c * s)

    return b


def _memo_key(t):
    if isinstance(t, np.ndarray):
        return (t.shape, t.tobytes())
    return float(t)


def ml_weight(beta: float, C: float) -> ScalarField:
    """b(t) = E_{beta,1}(C t^beta) for the identity clock.

    Values are memoized per time argument (stencil evaluations revisit the
    same t many times); fill happens on use from whichever thread evaluates
    first, after which reads are safe.
    """
    cache: dict = {}

    def b(t):
        key = _memo_key(t)
        if key not in cache:
            cache[key] = ml_series(beta, C * np.asarray(t, dtype=float) ** beta)
        return cache[key]

    return b


def hermite_ratio_solution(profile: ScalarField, n: int, t0: float) -> ScalarField:
    """Solution (t - t0) * n * H_{n-1}(f, t) / H_n(f, t) with f = profile.

    The ratio is the exact log-derivative image of the degree-n heat
    polynomial companion under the scenario's operator pair.
    """

    def u(*point):
        t = point[-1]
        f = profile(*point)
        return (t - t0) * n * hermite_value(n - 1, f, t) / hermite_value(n, f, t)

    return u


def hermite_companion(profile: ScalarField, n: int) -> ScalarField:
    """Companion field H_n(profile(x), t)."""

    def psi(*point):
        t = point[-1]
        return hermite_value(n, profile(*point), t)

    return psi


def _split_coefficient(beta: float, target: float, m: int) -> ScalarField:
    """Equal-split axis coefficient A_d(t) = target / (m (1 + 2 E))."""
    E = ml_weight(beta, target)

    def A(t):
        return target / (m * (1.0 + 2.0 * E(t)))

    return A


def _lntanh_half(x):
    return np.log(np.tanh(0.5 * x))


# --------------------------------------------------------------------------
# catalog entries


def _euclid_classic() -> Scenario:
    c, t0 = 0.1, -1.0
    b = riccati_weight(c, t0)
    A = lambda t: 1.0 / (t - t0)
    N = SpatialOp(coeff=lambda x, t: 1.0, axis=0, label="d/dx")
    gens = (
        Generator(lambda x, t: x, "unit", "x"),
        Generator(lambda x, t: 1.0, "kernel", "1"),
    )
    profile = lambda x, t: x

    def companion(x, t):
        # inverse-transform image anchored at x0 = 0 (spatial shape only;
        # the companion equation additionally needs the time gauge of
        # transform.companion_field)
        return np.exp(A(t) * b(t) * (0.5 * x * x + x))

    return Scenario(
        id="euclid-classic",
        equation="(1.1)",
        dims=(Axis("x", -1.0, 1.0),),
        time_axis=Axis("t", 0.1, 2.0),
        time_op=TimeOp.classical(),
        per_dim=(DimOperators(N=N, M=N, L=IDENTITY, lam=1.0, A=A, generators=gens),),
        form="a",
        exact_solution=lambda x, t: b(t) * (x + 1.0),
        solution_label="riccati-linear",
        alt_solutions={
            "hermite-2": hermite_ratio_solution(profile, 2, t0),
            "hermite-3": hermite_ratio_solution(profile, 3, t0),
        },
        linear_companion=companion,
        hermite_profile=profile,
        params={"c": c, "t0": t0},
        transform_route=True,
    )


def _euclid_frac() -> Scenario:
    beta, C = 0.6, 0.8
    clock = identity_clock(beta)
    E = ml_weight(beta, C)
    A = _split_coefficient(beta, C, 1)
    N = SpatialOp(coeff=lambda x, t: 1.0, axis=0, label="d/dx")
    gens = (
        Generator(lambda x, t: x, "unit", "x"),
        Generator(lambda x, t: 1.0, "kernel", "1"),
    )
    return Scenario(
        id="euclid-frac",
        equation="(3.12)",
        dims=(Axis("x", -1.0, 1.0),),
        time_axis=Axis("t", 0.1, 1.0),
        time_op=TimeOp.fractional(clock),
        per_dim=(DimOperators(N=N, M=N, L=IDENTITY, lam=1.0, A=A, generators=gens),),
        form="a",
        exact_solution=lambda x, t: E(t) * (x + 1.0),
        solution_label="mittag-linear",
        params={"beta": beta, "C": C},
    )


def _hyp_sinh() -> Scenario:
    c, t0 = 0.1, -1.0
    b = riccati_weight(c, t0)
    A = lambda t: 1.0 / (t - t0)
    N = SpatialOp(coeff=lambda e, t: np.sinh(e), axis=0, label="sinh(eta) d/deta")
    gens = (
        Generator(lambda e, t: _lntanh_half(e), "unit", "ln tanh(eta/2)"),
        Generator(lambda e, t: 1.0, "kernel", "1"),
    )
    profile = lambda e, t: _lntanh_half(e)

    def companion(e, t):
        return np.exp(A(t) * b(t) * 0.5 * (_lntanh_half(e) + 1.0) ** 2)

    return Scenario(
        id="hyp-sinh",
        equation="(2.18)",
        dims=(Axis("eta", 0.2, 3.0),),
        time_axis=Axis("t", 0.1, 2.0),
        time_op=TimeOp.classical(),
        per_dim=(DimOperators(N=N, M=N, L=IDENTITY, lam=1.0, A=A, generators=gens),),
        form="a",
        exact_solution=lambda e, t: b(t) * (_lntanh_half(e) + 1.0),
        solution_label="riccati-linear",
        alt_solutions={
            "hermite-2": hermite_ratio_solution(profile, 2, t0),
            "hermite-3": hermite_ratio_solution(profile, 3, t0),
        },
        linear_companion=companion,
        hermite_profile=profile,
        params={"c": c, "t0": t0},
        transform_route=True,
    )


def _hyp_csch() -> Scenario:
    c, t0 = 0.1, -1.0
    A = lambda t: 1.0 / (t - t0)
    N = SpatialOp(coeff=lambda e, t: 1.0 / np.sinh(e), axis=0, label="csch(eta) d/deta")
    gens = (
        Generator(lambda e, t: np.cosh(e), "unit", "cosh(eta)"),
        Generator(lambda e, t: 1.0, "kernel", "1"),
    )
    profile = lambda e, t: np.cosh(e)
    return Scenario(
        id="hyp-csch",
        equation="(2.21)",
        dims=(Axis("eta", 0.2, 3.0),),
        time_axis=Axis("t", 0.1, 2.0),
        time_op=TimeOp.classical(),
        per_dim=(DimOperators(N=N, M=N, L=IDENTITY, lam=1.0, A=A, generators=gens),),
        form="a",
        exact_solution=hermite_ratio_solution(profile, 2, t0),
        solution_label="hermite-2",
        alt_solutions={"hermite-3": hermite_ratio_solution(profile, 3, t0)},
        linear_companion=hermite_companion(profile, 2),
        hermite_profile=profile,
        params={"c": c, "t0": t0},
        transform_route=True,
    )


def _hyp_mixed() -> Scenario:
    t0 = -1.0
    A = lambda t: 1.0 / (t - t0)
    N = SpatialOp(coeff=lambda e, t: np.sinh(e), axis=0, label="sinh(eta) d/deta")
    M = SpatialOp(coeff=lambda e, t: 1.0 / np.sinh(e), axis=0, label="csch(eta) d/deta")
    L = LinearMult(lambda e, t: 1.0 / np.sinh(e) ** 2)
    density = kernels.cached_density(rel_tol=1e-10)
    exact = kernels.burgers_field(t0=t0, step=1e-3, rel_tol=1e-10, density=density)
    metric = Metric(
        g_diag=(lambda e, a, t: 1.0, lambda e, a, t: np.sinh(e) ** 2),
        composition="MN",
        radial_only=True,
        note="half-plane polar metric; companion order matches the radial Laplacian",
    )
    return Scenario(
        id="hyp-mixed",
        equation="(2.23)",
        dims=(Axis("eta", 0.5, 2.5),),
        time_axis=Axis("t", 0.5, 2.0),
        time_op=TimeOp.classical(),
        per_dim=(DimOperators(N=N, M=M, L=L, lam=float("nan"), A=A, generators=()),),
        form="b",
        exact_solution=lambda e, t: exact(e, t),
        solution_label="brownian-kernel",
        linear_companion=lambda e, t: density(e, t),
        metric=metric,
        params={"t0": t0},
        transform_route=True,
        note="multiplication by csch^2 has no constant eigenvalue, so this entry carries no generators",
    )


def _hyp_frac() -> Scenario:
    beta, C = 0.6, 0.8
    clock = identity_clock(beta)
    E = ml_weight(beta, C)
    A = _split_coefficient(beta, C, 1)
    N_sinh = SpatialOp(coeff=lambda e, t: np.sinh(e), axis=0, label="sinh(eta) d/deta")
    N_csch = SpatialOp(coeff=lambda e, t: 1.0 / np.sinh(e), axis=0, label="csch(eta) d/deta")
    gens = (
        Generator(lambda e, t: _lntanh_half(e), "unit", "ln tanh(eta/2)"),
        Generator(lambda e, t: 1.0, "kernel", "1"),
    )
    exact = lambda e, t: E(t) * (_lntanh_half(e) + 1.0)
    dims = (Axis("eta", 0.2, 3.0),)
    time_axis = Axis("t", 0.1, 1.0)
    variant = Scenario(
        id="hyp-frac-laplacian",
        equation="(3.16)",
        dims=dims,
        time_axis=time_axis,
        time_op=TimeOp.fractional(clock),
        per_dim=(DimOperators(N=N_csch, M=N_sinh, L=IDENTITY, lam=1.0, A=A, generators=gens),),
        form="a",
        exact_solution=exact,
        solution_label="mittag-linear",
        metric=Metric(
            g_diag=(lambda e, a, t: 1.0, lambda e, a, t: np.sinh(e) ** 2),
            composition="NM",
            radial_only=True,
        ),
        params={"beta": beta, "C": C},
        note="same solution with the full radial Laplacian as diffusion",
    )
    return Scenario(
        id="hyp-frac",
        equation="(3.14)",
        dims=dims,
        time_axis=time_axis,
        time_op=TimeOp.fractional(clock),
        per_dim=(DimOperators(N=N_sinh, M=N_sinh, L=IDENTITY, lam=1.0, A=A, generators=gens),),
        form="a",
        exact_solution=exact,
        solution_label="mittag-linear",
        params={"beta": beta, "C": C},
        variant=variant,
    )


def _hyp_2d() -> Scenario:
    beta, target = 0.6, 0.8
    clock = identity_clock(beta)
    E = ml_weight(beta, target)
    A = _split_coefficient(beta, target, 2)
    d_eta = DimOperators(
        N=SpatialOp(coeff=lambda e, a, t: 1.0 / np.sinh(e), axis=0, label="csch(eta) d/deta"),
        M=SpatialOp(coeff=lambda e, a, t: np.sinh(e), axis=0, label="sinh(eta) d/deta"),
        L=IDENTITY,
        lam=1.0,
        A=A,
        generators=(
            Generator(lambda e, a, t: _lntanh_half(e), "unit", "ln tanh(eta/2)"),
            Generator(lambda e, a, t: 1.0, "kernel", "1"),
        ),
    )
    d_alpha = DimOperators(
        N=SpatialOp(coeff=lambda e, a, t: 1.0 / np.sinh(e) ** 2, axis=1, label="csch^2(eta) d/dalpha"),
        M=SpatialOp(coeff=lambda e, a, t: 1.0, axis=1, label="d/dalpha"),
        L=IDENTITY,
        lam=1.0,
        A=A,
        generators=(
            Generator(lambda e, a, t: a, "unit", "alpha"),
            Generator(lambda e, a, t: 1.0, "kernel", "1"),
        ),
    )
    metric = Metric(g_diag=(lambda e, a, t: 1.0, lambda e, a, t: np.sinh(e) ** 2))
    return Scenario(
        id="hyp-2d",
        equation="(4.13)",
        dims=(Axis("eta", 0.2, 3.0), Axis("alpha", -1.0, 1.0)),
        time_axis=Axis("t", 0.1, 1.0),
        time_op=TimeOp.fractional(clock),
        per_dim=(d_eta, d_alpha),
        form="a",
        exact_solution=lambda e, a, t: E(t) * (_lntanh_half(e) + a + 2.0),
        solution_label="mittag-linear",
        metric=metric,
        params={"beta": beta, "A": target},
    )


def _schwarzschild() -> Scenario:
    beta, target = 0.6, 0.8
    clock = identity_clock(beta)
    E = ml_weight(beta, target)
    A = _split_coefficient(beta, target, 4)
    # geometric units: 2GM = 2, c = 1; the radial box stays inside (0, 2)
    w_r = lambda tc, r, th, ph, tau: 0.5 * np.log(r / (2.0 - r))
    w_th = lambda tc, r, th, ph, tau: np.log(np.tan(0.5 * th))
    d_t = DimOperators(
        N=SpatialOp(coeff=lambda tc, r, th, ph, tau: r / (r - 2.0), axis=0, label="r/(r-2) d/dt"),
        M=SpatialOp(coeff=lambda tc, r, th, ph, tau: 1.0, axis=0, label="d/dt"),
        L=IDENTITY,
        lam=1.0,
        A=A,
        generators=(
            Generator(lambda tc, r, th, ph, tau: tc, "unit", "t"),
            Generator(lambda tc, r, th, ph, tau: 1.0, "kernel", "1"),
        ),
    )
    d_r = DimOperators(
        N=SpatialOp(coeff=lambda tc, r, th, ph, tau: 1.0 / r**2, axis=1, label="r^-2 d/dr"),
        M=SpatialOp(coeff=lambda tc, r, th, ph, tau: (2.0 - r) * r, axis=1, label="(2-r) r d/dr"),
        L=IDENTITY,
        lam=1.0,
        A=A,
        generators=(
            Generator(w_r, "unit", "(1/2) ln(r/(2-r))"),
            Generator(lambda tc, r, th, ph, tau: 1.0, "kernel", "1"),
        ),
    )
    d_th = DimOperators(
        N=SpatialOp(
            coeff=lambda tc, r, th, ph, tau: -1.0 / (r**2 * np.sin(th)),
            axis=2,
            label="-(r^2 sin(theta))^-1 d/dtheta",
        ),
        M=SpatialOp(coeff=lambda tc, r, th, ph, tau: np.sin(th), axis=2, label="sin(theta) d/dtheta"),
        L=IDENTITY,
        lam=1.0,
        A=A,
        generators=(
            Generator(w_th, "unit", "ln tan(theta/2)"),
            Generator(lambda tc, r, th, ph, tau: 1.0, "kernel", "1"),
        ),
    )
    d_ph = DimOperators(
        N=SpatialOp(
            coeff=lambda tc, r, th, ph, tau: -1.0 / (r * np.sin(th)) ** 2,
            axis=3,
            label="-(r sin(theta))^-2 d/dphi",
        ),
        M=SpatialOp(coeff=lambda tc, r, th, ph, tau: 1.0, axis=3, label="d/dphi"),
        L=IDENTITY,
        lam=1.0,
        A=A,
        generators=(
            Generator(lambda tc, r, th, ph, tau: ph, "unit", "phi"),
            Generator(lambda tc, r, th, ph, tau: 1.0, "kernel", "1"),
        ),
    )
    metric = Metric(
        g_diag=(
            lambda tc, r, th, ph, tau: 1.0 - 2.0 / r,
            lambda tc, r, th, ph, tau: -1.0 / (1.0 - 2.0 / r),
            lambda tc, r, th, ph, tau: -(r**2),
            lambda tc, r, th, ph, tau: -((r * np.sin(th)) ** 2),
        ),
        note="static spherically symmetric line element; sqrt|g| = r^2 sin(theta)",
    )

    def exact(tc, r, th, ph, tau):
        return E(tau) * (tc + w_r(tc, r, th, ph, tau) + w_th(tc, r, th, ph, tau) + ph + 4.0)

    return Scenario(
        id="schwarzschild",
        equation="(4.25)",
        dims=(
            Axis("t", -1.0, 1.0),
            Axis("r", 0.2, 1.8),
            Axis("theta", 0.3, 2.8),
            Axis("phi", 0.0, 6.28),
        ),
        time_axis=Axis("tau", 0.1, 1.0),
        time_op=TimeOp.fractional(clock),
        per_dim=(d_t, d_r, d_th, d_ph),
        form="a",
        exact_solution=exact,
        solution_label="mittag-linear",
        metric=metric,
        params={"beta": beta, "A": target, "G": 1.0, "M": 1.0, "c": 1.0},
        note="the metric time t is treated as a spatial coordinate; tau drives the evolution",
    )


def _cigar() -> Scenario:
    beta, target = 0.6, 0.8
    clock = identity_clock(beta)
    E = ml_weight(beta, target)
    A = _split_coefficient(beta, target, 2)
    conformal = lambda x, y, t: np.exp(4.0 * t) + x**2 + y**2
    d_x = DimOperators(
        N=SpatialOp(coeff=conformal, axis=0, label="(e^{4t}+x^2+y^2) d/dx"),
        M=SpatialOp(coeff=lambda x, y, t: 1.0, axis=0, label="d/dx"),
        L=IDENTITY,
        lam=1.0,
        A=A,
        generators=(
            Generator(lambda x, y, t: x, "unit", "x"),
            Generator(lambda x, y, t: 1.0, "kernel", "1"),
        ),
    )
    d_y = DimOperators(
        N=SpatialOp(coeff=conformal, axis=1, label="(e^{4t}+x^2+y^2) d/dy"),
        M=SpatialOp(coeff=lambda x, y, t: 1.0, axis=1, label="d/dy"),
        L=IDENTITY,
        lam=1.0,
        A=A,
        generators=(
            Generator(lambda x, y, t: y, "unit", "y"),
            Generator(lambda x, y, t: 1.0, "kernel", "1"),
        ),
    )
    metric = Metric(
        g_diag=(
            lambda x, y, t: 1.0 / conformal(x, y, t),
            lambda x, y, t: 1.0 / conformal(x, y, t),
        ),
        note="steady-soliton plane metric; the conformal factor moves with t",
    )
    return Scenario(
        id="cigar",
        equation="(4.32)",
        dims=(Axis("x", -1.0, 1.0), Axis("y", -1.0, 1.0)),
        time_axis=Axis("t", 0.1, 1.0),
        time_op=TimeOp.fractional(clock),
        per_dim=(d_x, d_y),
        form="a",
        exact_solution=lambda x, y, t: E(t) * (x + y + 2.0),
        solution_label="mittag-linear",
        metric=metric,
        params={"beta": beta, "A": target},
        note="the evolution variable doubles as the metric parameter; the solution keeps the diffusion term at zero",
    )


_BUILDERS = (
    _euclid_classic,
    _euclid_frac,
    _hyp_sinh,
    _hyp_csch,
    _hyp_mixed,
    _hyp_frac,
    _hyp_2d,
    _schwarzschild,
    _cigar,
)

_catalog_cache: tuple[Scenario, ...] | None = None


def catalog() -> tuple[Scenario, ...]:
    """The immutable catalog, built once per process."""
    global _catalog_cache
    if _catalog_cache is None:
        _catalog_cache = tuple(build() for build in _BUILDERS)
    return _catalog_cache


def get(scenario_id: str) -> Scenario:
    for sc in catalog():
        if sc.id == scenario_id:
            return sc
    raise DomainError(f"unknown scenario id {scenario_id!r}")


# --------------------------------------------------------------------------
# metric-side oracle


def beltrami_from_metric(g_diag, point, u: ScalarField, step: float) -> float:
    """Laplace-Beltrami value at ``point`` for a diagonal metric:

        (1/sqrt|g|) sum_d d_d( sqrt|g| g^{dd} d_d u )

    with nested central differences. This is the independent cross-check for
    the factored operator pairs of the catalog.
    """
    ncoords = len(g_diag)

    def sqrt_det(q):
        det = 1.0
        for g in g_diag:
            det *= float(g(*q))
        if not abs(det) > 1e-300:
            raise SingularMetricError(f"metric degenerate at {q}", point=q)
        return math.sqrt(abs(det))

    def central(fn, q, axis, h):
        qp = list(q)
        qm = list(q)
        qp[axis] += h
        qm[axis] -= h
        return (fn(tuple(qp)) - fn(tuple(qm))) / (2.0 * h)

    root0 = sqrt_det(tuple(point))
    total = 0.0
    for d in range(ncoords):

        def flux(q, d=d):
            inner = central(lambda qq: float(u(*qq)), q, d, step)
            return sqrt_det(q) * (1.0 / float(g_diag[d](*q))) * inner

        total += central(flux, tuple(point), d, step) / root0
    return total
