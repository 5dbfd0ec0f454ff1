import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ctl.example import square_algebra, square_catalog
from ctl.exactfield import FMatrix, rank
from ctl.modules import Representation, direct_sum

settings.register_profile(
    "ctl", derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow], print_blob=True
)
settings.load_profile("ctl")


@pytest.fixture(scope="session")
def cat2():
    return square_catalog(square_algebra(2))


@pytest.fixture(scope="session")
def cat3():
    return square_catalog(square_algebra(3))


@pytest.fixture(scope="session", params=[2, 3], ids=["F2", "F3"])
def cat(request, cat2, cat3):
    return cat2 if request.param == 2 else cat3


def random_invertible(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        g = rng.integers(0, p, size=(n, n))
        if n == 0 or rank(FMatrix(g, p)) == n:
            return g


def scramble(m: Representation, rng: np.random.Generator) -> Representation:
    """An isomorphic copy of ``m`` under a random change of basis at every vertex."""
    p = m.p
    gs = [random_invertible(d, p, rng) for d in m.dims]
    ginv = [FMatrix(g, p).inverse().array if g.size else g for g in gs]
    maps = []
    for arrow, a in zip(m.alg.quiver.arrows, m.maps):
        t, s = arrow.target, arrow.source
        maps.append((gs[t] @ a.array @ ginv[s]) % p if a.array.size else a.array)
    return Representation(m.alg, m.dims, maps, name=m.name)


def catalog_sum(catalog, names, rng=None) -> Representation:
    s = direct_sum([catalog[n] for n in names], catalog.alg)
    return scramble(s, rng) if rng is not None else s
