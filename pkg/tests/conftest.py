"""Shared fixtures: catalog surfaces, the sphere equator section and seeded generators."""

import numpy as np
import pytest

from geoflow.exceptions import reset_manager
from geoflow.scenarios import catalog, reference_geodesic
from geoflow.section import build_section


@pytest.fixture(autouse=True)
def fresh_exception_manager():
    reset_manager()
    yield
    reset_manager()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def sphere():
    return catalog("sphere")


@pytest.fixture(scope="session")
def ellipsoid():
    return catalog("ellipsoid")


@pytest.fixture(scope="session")
def zoll():
    return catalog("zoll")


@pytest.fixture(scope="session")
def torus():
    return catalog("flat_torus")


@pytest.fixture(scope="session")
def plane_flat():
    return catalog("plane_flat")


@pytest.fixture(scope="session")
def plane_exp():
    return catalog("plane_exp")


@pytest.fixture(scope="session")
def sphere_section(sphere):
    return build_section(sphere, reference_geodesic(sphere, tol=1e-10), tol=1e-10)


@pytest.fixture(scope="session")
def torus_section(torus):
    return build_section(torus, reference_geodesic(torus, tol=1e-10), tol=1e-10)
