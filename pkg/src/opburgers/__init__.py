"""Operator Burgers equations on flat and curved backgrounds.

A library plus CLI that constructs, evaluates and numerically verifies exact
solutions of a family of nonlinear evolution equations whose derivatives are
replaced by first-order operators a(x) d/dx and a possibly fractional time
operator, across a catalog of nine concrete instances (flat line, hyperbolic
half-plane and plane, a static black-hole background, a steady-soliton plane
metric).
"""

from .errors import OperatorBurgersError
from .frac import FracParams, caputo_f, eigen_check, identity_clock, log_clock
from .invariant import (
    assemble_solution,
    build_coeff_system,
    check_invariant_space,
    coeff_closed_form,
    integrate_coeff_system,
    solve_constraint,
)
from .kernels import KernelPoint, brownian_burgers_solution, hyperbolic_heat_density
from .operators import (
    IDENTITY,
    LinearMult,
    SpatialOp,
    TimeOp,
    apply_spatial,
    check_A_ode,
    check_commutator,
    check_factorization,
    check_leibniz,
    inverse_spatial,
)
from .residual import GridSpec, ResidualReport, convergence_sweep, default_grid, evaluate
from .scenarios import Axis, Generator, Metric, Scenario, beltrami_from_metric, catalog, get
from .specialfn import HermiteArgs, MLParams, gamma, hermite_gen, mittag_leffler
from .transform import TransformContext, backward, companion_field, context_for, forward, roundtrip_check

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "FracParams",
    "Generator",
    "GridSpec",
    "HermiteArgs",
    "IDENTITY",
    "KernelPoint",
    "LinearMult",
    "MLParams",
    "Metric",
    "OperatorBurgersError",
    "ResidualReport",
    "Scenario",
    "SpatialOp",
    "TimeOp",
    "TransformContext",
    "apply_spatial",
    "assemble_solution",
    "backward",
    "beltrami_from_metric",
    "brownian_burgers_solution",
    "build_coeff_system",
    "caputo_f",
    "catalog",
    "check_A_ode",
    "check_commutator",
    "check_factorization",
    "check_invariant_space",
    "check_leibniz",
    "coeff_closed_form",
    "companion_field",
    "context_for",
    "convergence_sweep",
    "default_grid",
    "eigen_check",
    "evaluate",
    "forward",
    "gamma",
    "get",
    "hermite_gen",
    "hyperbolic_heat_density",
    "identity_clock",
    "integrate_coeff_system",
    "inverse_spatial",
    "log_clock",
    "mittag_leffler",
    "roundtrip_check",
    "solve_constraint",
    "__version__",
]
