import numpy as np
import pytest

from opburgers.errors import DomainError, ExclusionBudgetError
from opburgers.residual import (
    GridSpec,
    convergence_sweep,
    default_grid,
    evaluate,
    fit_order,
    perturbed,
)


def test_grid_validation():
    with pytest.raises(DomainError):
        GridSpec(space_counts=(3,), time_count=8)
    with pytest.raises(DomainError):
        GridSpec(space_counts=(8,), time_count=8, margin=0.5)


def test_zero_field_solves_flat_entry(cat):
    rep = evaluate(cat["euclid-classic"], lambda x, t: 0.0, GridSpec((9,), 7))
    assert rep.max_abs < 1e-12
    assert rep.excluded == 0


def test_perturbed_control_dominates(cat):
    sc = cat["euclid-classic"]
    grid = default_grid(sc)
    clean = evaluate(sc, sc.exact_solution, grid)
    dirty = evaluate(sc, perturbed(sc.exact_solution, 0.1), grid)
    assert dirty.max_abs > 10.0 * clean.max_abs


def test_form_equivalence_when_pair_coincides(cat):
    # N = M and L = identity make the two nonlinear placements identical
    sc = cat["euclid-classic"]
    grid = GridSpec((9,), 7)
    ra = evaluate(sc, sc.exact_solution, grid, form="a")
    rb = evaluate(sc, sc.exact_solution, grid, form="b")
    assert abs(ra.max_abs - rb.max_abs) < 1e-12
    assert abs(ra.l2 - rb.l2) < 1e-12


def test_term_accounting_is_exact(cat):
    sc = cat["hyp-sinh"]
    rep = evaluate(sc, sc.exact_solution, GridSpec((9,), 7), collect=True)
    cols = {name: i for i, name in enumerate(rep.columns)}
    for row in rep.samples:
        recomputed = (
            row[cols["time_term"]]
            - row[cols["nonlinear_term"]]
            - row[cols["diffusion_term"]]
            - row[cols["source_term"]]
        )
        assert abs(recomputed - row[cols["residual"]]) < 1e-14


def test_report_shape(cat):
    sc = cat["euclid-classic"]
    rep = evaluate(sc, sc.exact_solution, GridSpec((9,), 7))
    assert rep.l2 <= rep.max_abs
    assert set(rep.per_term) == {"time", "diffusion", "source", "nonlinear:x"}
    assert rep.normalization >= 1.0
    assert rep.to_dict()["grid"]["space_counts"] == [9]


def test_exclusion_budget_enforced(cat):
    sc = cat["euclid-classic"]

    def partial_field(x, t):
        if x < 0.0:
            raise ValueError("outside the evaluable region")
        return 0.0

    with pytest.raises(ExclusionBudgetError):
        evaluate(sc, partial_field, GridSpec((9,), 7))


def test_fit_order_recovers_slope():
    hs = [0.1, 0.05, 0.025, 0.0125]
    es = [2.0 * h**1.7 for h in hs]
    assert abs(fit_order(hs, es) - 1.7) < 1e-12


def test_sweep_levels_validation(cat):
    with pytest.raises(DomainError):
        convergence_sweep(cat["euclid-classic"], lambda x, t: 0.0, GridSpec((9,), 7), levels=1)


def test_sweep_non_solution_plateaus(cat):
    sc = cat["euclid-classic"]
    bogus = lambda x, t: np.sin(x) * np.exp(0.2 * t)
    sw = convergence_sweep(sc, bogus, GridSpec((9,), 7), levels=3)
    assert abs(sw.order) < 0.5


def test_default_grids_cover_catalog(cat):
    for sc in cat.values():
        grid = default_grid(sc)
        assert len(grid.space_counts) == len(sc.dims)
        if not sc.time_op.is_classical:
            assert grid.space_steps is not None
