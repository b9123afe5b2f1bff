import math

import numpy as np
import pytest

import opburgers as ob
from opburgers.errors import (
    ArityError,
    BlowUpError,
    DomainError,
    PoleWarning,
    UnsupportedCheckError,
    UnsupportedConstraintError,
)
from opburgers.invariant import (
    CoeffSystem,
    assemble_solution,
    build_coeff_system,
    coeff_closed_form,
    integrate_coeff_system,
    solve_constraint,
)
from opburgers.operators import TimeOp
from opburgers.specialfn import ml_series


def test_build_system_euclid_classic(cat):
    sys_ = build_coeff_system(cat["euclid-classic"])
    assert sys_.labels == ("b[x][1]", "b[x][0]")
    # rhs per unknown is A(t) b_l (1 + 2 b_1)
    t, b1, b0 = 0.5, 0.3, -0.2
    A = 1.0 / (t + 1.0)
    rhs = sys_.rhs(t, [b1, b0])
    assert abs(rhs[0] - A * b1 * (1 + 2 * b1)) < 1e-14
    assert abs(rhs[1] - A * b0 * (1 + 2 * b1)) < 1e-14


def test_shared_bracket_structure(cat):
    sys_ = build_coeff_system(cat["hyp-2d"])
    assert len(sys_.labels) == 4
    rng = np.random.default_rng(0)
    values = rng.normal(size=4) + 2.0
    rhs = sys_.rhs(0.5, values)
    ratios = rhs / values
    assert np.max(np.abs(ratios - ratios[0])) < 1e-12


def test_build_system_needs_generators(cat):
    with pytest.raises(DomainError):
        build_coeff_system(cat["hyp-mixed"])


@pytest.mark.parametrize("sid,m", [("euclid-frac", 1), ("hyp-2d", 2), ("cigar", 2), ("schwarzschild", 4)])
def test_solve_constraint_equal_split(sid, m, cat):
    sc = cat[sid]
    target = float(sc.params.get("C", sc.params.get("A")))
    spec = solve_constraint(sc, target)
    assert spec.certified_dev < 1e-10
    assert len(spec.A_fields) == m
    beta = sc.params["beta"]
    t = 0.5
    e = float(ml_series(beta, target * t**beta))
    assert abs(spec.A_fields[0](t) - target / (m * (1 + 2 * e))) < 1e-14


def test_solve_constraint_rejects_varying_eigenvalue(cat):
    with pytest.raises(UnsupportedConstraintError):
        solve_constraint(cat["hyp-mixed"], 0.8)


def test_mittag_weight_classical_limit():
    b = coeff_closed_form("mittag", beta=1.0, C=1.0)
    for t in (0.0, 0.5, 1.3):
        assert abs(float(b(t)) - math.exp(t)) < 1e-12


def test_riccati_weight_value():
    b = coeff_closed_form("riccati", c=0.1, t0=-1.0)
    assert abs(b(1.0) - 1.0 / 3.0) < 1e-15


def test_riccati_weight_satisfies_reduced_equation():
    # d/dt b = (b + 2 b^2) / (t - t0) along the working interval
    b = coeff_closed_form("riccati", c=0.1, t0=-1.0)
    h = 1e-5
    for t in np.linspace(0.0, 2.0, 21):
        db = (b(t + h) - b(t - h)) / (2 * h)
        rhs = (b(t) + 2.0 * b(t) ** 2) / (t + 1.0)
        assert abs(db - rhs) < 1e-9


def test_riccati_pole_warning():
    with pytest.warns(PoleWarning):
        coeff_closed_form("riccati", c=0.5, t0=0.0, interval=(0.0, 2.0))


def test_closed_form_validation():
    with pytest.raises(DomainError):
        coeff_closed_form("unknown")
    with pytest.raises(DomainError):
        coeff_closed_form("mittag", beta=0.5)


def _const_system(C):
    return CoeffSystem(
        labels=("b",),
        dims=(0,),
        unit=(False,),
        A=(lambda t: C,),
        lam=(1.0,),
        time_op=TimeOp.classical(),
    )


def test_integrate_constant_rate_is_exponential():
    traj = integrate_coeff_system(_const_system(0.7), [1.0], 0.0, 2.0, 400)
    assert abs(traj.values[-1, 0] - math.exp(0.7 * 2.0)) < 1e-8


def test_integrate_zero_rhs_is_constant():
    traj = integrate_coeff_system(_const_system(0.0), [1.3], 0.0, 1.0, 100)
    assert np.max(np.abs(traj.values - 1.3)) == 0.0


def test_integrate_matches_riccati_closed_form(cat):
    sys_ = build_coeff_system(cat["euclid-classic"])
    b = coeff_closed_form("riccati", c=0.1, t0=-1.0)
    traj = integrate_coeff_system(sys_, [b(0.0), b(0.0)], 0.0, 2.0, 2000)
    err = max(abs(traj.values[i, 0] - b(traj.times[i])) for i in range(len(traj.times)))
    assert err < 1e-8


def test_integrate_validation(cat):
    sys_ = build_coeff_system(cat["euclid-classic"])
    with pytest.raises(DomainError):
        integrate_coeff_system(sys_, [0.1, 0.1], 0.0, 1.0, 50)
    with pytest.raises(ArityError):
        integrate_coeff_system(sys_, [0.1], 0.0, 1.0, 200)
    frac_sys = build_coeff_system(cat["euclid-frac"])
    with pytest.raises(UnsupportedCheckError):
        integrate_coeff_system(frac_sys, [1.0, 1.0], 0.0, 1.0, 200)


def test_integrate_blowup_reports_time(cat):
    # a steeper weight puts the pole at t = 1/(2c) + t0 = 0.25 inside the run
    sys_ = build_coeff_system(cat["euclid-classic"])
    with pytest.raises(BlowUpError) as err:
        integrate_coeff_system(sys_, [2.0, 2.0], 0.0, 2.0, 4000)
    assert err.value.time is not None


def test_assemble_matches_catalog_fractional_solutions(cat):
    for sid in ("euclid-frac", "hyp-frac", "hyp-2d", "schwarzschild", "cigar"):
        sc = cat[sid]
        target = float(sc.params.get("C", sc.params.get("A")))
        weight = coeff_closed_form("mittag", beta=sc.params["beta"], C=target)
        n_gens = sum(len(ops.generators) for ops in sc.per_dim)
        u = assemble_solution(sc, [weight] * n_gens)
        for p in np.linspace(0.0, 1.0, 4):
            point = tuple(ax.lo + p * ax.extent * 0.9 + 0.05 * ax.extent for ax in sc.dims) + (
                0.3 + 0.5 * p,
            )
            assert abs(u(*point) - sc.exact_solution(*point)) < 1e-12


def test_assemble_arity_and_linearity(cat):
    sc = cat["euclid-classic"]
    with pytest.raises(ArityError):
        assemble_solution(sc, [lambda t: 1.0])
    b1 = lambda t: 1.0 + t
    b2 = lambda t: np.sin(t)
    u1 = assemble_solution(sc, [b1, b2])
    u2 = assemble_solution(sc, [b2, b1])
    mix = assemble_solution(sc, [lambda t: b1(t) + 2 * b2(t), lambda t: b2(t) + 2 * b1(t)])
    for x, t in ((0.3, 0.5), (-0.7, 1.4)):
        assert abs(mix(x, t) - (u1(x, t) + 2 * u2(x, t))) < 1e-12


def test_trajectory_csv():
    traj = integrate_coeff_system(_const_system(0.5), [1.0], 0.0, 1.0, 100)
    text = traj.to_csv_text()
    lines = text.strip().splitlines()
    assert lines[0] == "t,b"
    assert len(lines) == 102
