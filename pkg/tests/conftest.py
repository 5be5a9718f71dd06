import json
import os

import pytest

import annulus_weyl as aw
from annulus_weyl import counting as ct

FIXDIR = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(scope="session")
def geom():
    return aw.AnnulusGeometry.create(1.0, 2.0, (1, 3))


@pytest.fixture(scope="session")
def cfg():
    return aw.RegimeConfig()


@pytest.fixture(scope="session")
def consts():
    with open(os.path.join(FIXDIR, "derived_constants.json")) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def cache200(geom, cfg):
    """Zero tables up to mu = 200, shared by the counting and acceptance tests."""
    import time
    cache = ct.SpectrumCache(geom, cfg)
    t0 = time.perf_counter()
    cache.build(200.0)
    cache.build_wall_s = time.perf_counter() - t0
    return cache


def fixture_path(name: str) -> str:
    return os.path.join(FIXDIR, name)
