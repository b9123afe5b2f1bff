import math

import numpy as np
import pytest

from opburgers.errors import DomainError, ParameterError
from opburgers.frac import FracParams, caputo_f, eigen_check, identity_clock, log_clock
from opburgers.specialfn import gamma, ml_series


def test_order_validation():
    with pytest.raises(DomainError):
        identity_clock(1.0)
    with pytest.raises(DomainError):
        identity_clock(0.0)


def test_constants_are_annihilated():
    p = identity_clock(0.6)
    assert abs(caputo_f(p, lambda t: 3.0, 1.3, 256)) < 1e-13


@pytest.mark.parametrize("beta", [0.4, 0.6, 0.8])
@pytest.mark.parametrize("make_clock", [identity_clock, log_clock])
def test_power_function_value(beta, make_clock):
    # derivative of f(t)^beta at order beta is the constant Gamma(1+beta)
    # (confirmed against an adaptive-quadrature oracle of the singular
    # integral before the build)
    p = make_clock(beta)
    b = lambda t: np.asarray(p.f(t), dtype=float) ** beta
    got = caputo_f(p, b, 1.0, 4096)
    exact = gamma(1.0 + beta)
    assert abs(got - exact) < 5e-4


@pytest.mark.parametrize("beta", [0.5, 0.7])
def test_power_function_grid_convergence(beta):
    # doubling the node count contracts the error by at least 2^(2-beta) * 0.8
    p = identity_clock(beta)
    b = lambda t: np.asarray(t, dtype=float) ** beta
    exact = gamma(1.0 + beta)
    errs = [abs(caputo_f(p, b, 1.0, n) - exact) for n in (256, 512, 1024)]
    need = 2.0 ** (2.0 - beta) * 0.8
    assert errs[0] / errs[1] >= need
    assert errs[1] / errs[2] >= need


def test_eigenfunction_value():
    p = identity_clock(0.6)
    got = caputo_f(p, lambda t: ml_series(0.6, np.asarray(t, dtype=float) ** 0.6), 1.0, 4096)
    ref = float(ml_series(0.6, 1.0))
    assert abs(got - ref) / (1.0 + abs(ref)) < 1e-4


def test_eigen_check_zero_weight_vanishes():
    p = identity_clock(0.5)
    assert eigen_check(p, 0.0, [0.5, 1.0], 64) < 1e-13


def test_classical_limit_exponential():
    # beta -> 1 limit handled as d/dt: exp is its eigenfunction
    for t in (0.5, 1.0, 1.5):
        h = 1e-5
        dev = abs((math.exp(t + h) - math.exp(t - h)) / (2 * h) - math.exp(t)) / math.exp(t)
        assert dev < 1e-8


def test_near_classical_order_tracks_derivative():
    p = identity_clock(0.99)
    b = lambda t: np.asarray(t, dtype=float) ** 2
    for t in (0.5, 1.0, 2.0):
        got = caputo_f(p, b, t, 4096)
        assert abs(got - 2.0 * t) / (2.0 * t) < 0.1


def test_linearity():
    p = identity_clock(0.6)
    b1 = lambda t: np.sin(np.asarray(t, dtype=float))
    b2 = lambda t: np.asarray(t, dtype=float) ** 2 + 1.0
    t, nodes = 1.2, 512
    lhs = caputo_f(p, lambda tau: 0.7 * b1(tau) + 1.9 * b2(tau), t, nodes)
    rhs = 0.7 * caputo_f(p, b1, t, nodes) + 1.9 * caputo_f(p, b2, t, nodes)
    assert abs(lhs - rhs) < 1e-10


def test_domain_errors():
    p = identity_clock(0.5)
    with pytest.raises(DomainError):
        caputo_f(p, lambda t: t, -1.0, 64)
    with pytest.raises(DomainError):
        caputo_f(p, lambda t: t, 1.0, 4)


def test_nonmonotone_clock_rejected():
    # increasing then decreasing clock: the derivative check catches it
    p = FracParams(
        0.5,
        f=lambda t: np.asarray(t, dtype=float) * (1.0 - np.asarray(t, dtype=float)),
        fprime=lambda t: 1.0 - 2.0 * np.asarray(t, dtype=float),
    )
    with pytest.raises(ParameterError):
        caputo_f(p, lambda t: t, 0.9, 64)


def test_bisection_inversion_matches_closed_form():
    # clock t + t^2/2 keeps f' = 1 + t positive down to t = 0
    f = lambda t: np.asarray(t, dtype=float) + 0.5 * np.asarray(t, dtype=float) ** 2
    fp = lambda t: 1.0 + np.asarray(t, dtype=float)
    finv = lambda s: -1.0 + np.sqrt(1.0 + 2.0 * np.asarray(s, dtype=float))
    with_inv = FracParams(0.6, f=f, fprime=fp, finv=finv)
    without = FracParams(0.6, f=f, fprime=fp)
    b = lambda t: np.cos(np.asarray(t, dtype=float))
    a = caputo_f(with_inv, b, 1.0, 512)
    c = caputo_f(without, b, 1.0, 512)
    assert abs(a - c) < 1e-9


def test_log_clock_eigen_property():
    p = log_clock(0.5)
    assert eigen_check(p, 0.8, [0.5, 1.5], 2048) < 1e-4
