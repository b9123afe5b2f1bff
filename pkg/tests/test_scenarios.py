import json

import numpy as np
import pytest

import opburgers as ob
from opburgers.errors import DomainError, SingularMetricError
from opburgers.invariant import check_invariant_space
from opburgers.operators import apply_spatial
from opburgers.sampling import sample_box
from opburgers.scenarios import beltrami_from_metric

EXPECTED_IDS = [
    "euclid-classic",
    "euclid-frac",
    "hyp-sinh",
    "hyp-csch",
    "hyp-mixed",
    "hyp-frac",
    "hyp-2d",
    "schwarzschild",
    "cigar",
]


def test_catalog_ids(cat):
    assert list(cat) == EXPECTED_IDS


def test_get_unknown_id():
    with pytest.raises(DomainError):
        ob.get("no-such-entry")


def test_describe_serializes(cat):
    for sc in cat.values():
        text = json.dumps(sc.describe())
        assert sc.id in text


def test_equation_tags(cat):
    assert cat["schwarzschild"].equation == "(4.25)"
    assert cat["euclid-classic"].equation == "(1.1)"


@pytest.mark.parametrize("sid", EXPECTED_IDS)
def test_generator_invariants(sid, cat, samples_for):
    sc = cat[sid]
    if not any(ops.generators for ops in sc.per_dim):
        pytest.skip("entry carries no generators")
    step = min(1e-4 * ax.extent for ax in sc.dims)
    rep = check_invariant_space(sc, samples_for(sc, n=100), step=step)
    assert rep.worst("unit") < 1e-6
    assert rep.worst("kernel") < 1e-6
    assert rep.worst("annihilation") < 1e-5
    assert rep.worst("eigen") < 1e-8


def test_variant_entry(cat):
    var = cat["hyp-frac"].variant
    assert var is not None and var.id == "hyp-frac-laplacian"
    samples = [tuple(p) for p in sample_box(var.point_bounds(), 30, seed=5)]
    rep = check_invariant_space(var, samples, step=1e-4 * var.dims[0].extent)
    assert rep.max_dev < 1e-5


def test_beltrami_flat_laplacian():
    flat = (lambda x, y, t: 1.0, lambda x, y, t: 1.0)
    got = beltrami_from_metric(flat, (0.3, -0.4, 0.0), lambda x, y, t: x * x + y * y, 1e-3)
    assert abs(got - 4.0) < 1e-6


def test_beltrami_radial_kernel_function():
    hyp = (lambda e, a, t: 1.0, lambda e, a, t: np.sinh(e) ** 2)
    got = beltrami_from_metric(hyp, (1.0, 0.2, 0.5), lambda e, a, t: np.log(np.tanh(0.5 * e)), 1e-3)
    assert abs(got) < 1e-5


def test_beltrami_schwarzschild_radial_generator(cat):
    sc = cat["schwarzschild"]
    w_r = sc.per_dim[1].generators[0].field
    got = beltrami_from_metric(sc.metric.g_diag, (0.1, 0.9, 1.2, 3.0, 0.5), w_r, 1e-3)
    assert abs(got) < 1e-4


def test_beltrami_degenerate_metric():
    sing = (lambda x, y, t: x, lambda x, y, t: 1.0)
    with pytest.raises(SingularMetricError):
        beltrami_from_metric(sing, (0.0, 0.2, 0.0), lambda x, y, t: x * y, 1e-4)


def test_schwarzschild_sqrt_det_closed_form(cat):
    sc = cat["schwarzschild"]
    for p in sample_box(sc.point_bounds(), 25, seed=11):
        det = 1.0
        for g in sc.metric.g_diag:
            det *= float(g(*p))
        r, th = p[1], p[2]
        assert abs(np.sqrt(abs(det)) - r * r * np.sin(th)) < 1e-10


def _sum_NM(sc, u, point, step):
    total = 0.0
    for ops in sc.per_dim:

        def inner(*q, _o=ops):
            return apply_spatial(_o.M, u, q, step)

        total += apply_spatial(ops.N, inner, point, step)
    return total


_SMOOTH_FIELDS = [
    lambda *p: float(np.sin(0.7 * p[0]) + np.cos(0.5 * p[-2] if len(p) > 2 else 0.5 * p[0])),
    lambda *p: float(np.exp(0.2 * sum(p[:-1]) / len(p))),
    lambda *p: float(sum((i + 1) * c * c for i, c in enumerate(p[:-1]))),
]


@pytest.mark.parametrize("sid", ["hyp-2d", "schwarzschild", "cigar"])
def test_factored_operators_match_metric_laplacian(sid, cat, samples_for):
    sc = cat[sid]
    for u in _SMOOTH_FIELDS:
        for p in samples_for(sc, n=8, seed=13):
            lb = beltrami_from_metric(sc.metric.g_diag, p, u, 1e-3)
            nm = _sum_NM(sc, u, p, 1e-3)
            assert abs(nm - lb) < 1e-4


def test_radial_metric_comparisons(cat):
    # mixed pair: the companion composition M(N(.)) is the radial Laplacian;
    # the Laplacian-form variant carries it as N(M(.)) directly
    mixed = cat["hyp-mixed"]
    var = cat["hyp-frac"].variant
    radial = lambda e, t: float(np.exp(0.3 * e) + 0.1 * e * e)
    lifted = lambda e, a, t: radial(e, t)
    for e in (0.8, 1.4, 2.1):
        point, lifted_point = (e, 0.7), (e, 0.0, 0.7)
        lb = beltrami_from_metric(mixed.metric.g_diag, lifted_point, lifted, 1e-3)
        ops = mixed.per_dim[0]

        def n_of_u(*q, _o=ops):
            return apply_spatial(_o.N, radial, q, 1e-3)

        mn = apply_spatial(ops.M, n_of_u, point, 1e-3)
        assert abs(mn - lb) < 1e-4

        lb2 = beltrami_from_metric(var.metric.g_diag, lifted_point, lifted, 1e-3)
        nm = _sum_NM(var, radial, point, 1e-3)
        assert abs(nm - lb2) < 1e-4


def test_exact_solution_spot_values(cat):
    sc = cat["hyp-2d"]
    e, a, t = 1.0, 0.5, 0.7
    expect = float(ob.mittag_leffler(ob.MLParams(0.6, 0.8 * t**0.6))) * (
        np.log(np.tanh(0.5 * e)) + a + 2.0
    )
    assert abs(sc.exact_solution(e, a, t) - expect) < 1e-12

    sch = cat["schwarzschild"]
    tc, r, th, ph, tau = 0.2, 0.9, 1.1, 2.0, 0.5
    expect = float(ob.mittag_leffler(ob.MLParams(0.6, 0.8 * tau**0.6))) * (
        tc + 0.5 * np.log(r / (2.0 - r)) + np.log(np.tan(0.5 * th)) + ph + 4.0
    )
    assert abs(sch.exact_solution(tc, r, th, ph, tau) - expect) < 1e-12
