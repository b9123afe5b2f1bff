import pytest

import opburgers as ob
from opburgers.sampling import sample_box


@pytest.fixture(scope="session")
def cat():
    return {sc.id: sc for sc in ob.catalog()}


@pytest.fixture(scope="session")
def samples_for():
    """Seeded interior sample points (coords + time) for a scenario."""

    def make(sc, n=50, seed=7):
        return [tuple(p) for p in sample_box(sc.point_bounds(), n, seed=seed)]

    return make
