import numpy as np
import pytest

from hyptiles.coxeter import build_group
from hyptiles.specfile import load_spec


@pytest.fixture
def rng():
    return np.random.default_rng(20230315)


@pytest.fixture(scope="session")
def tri344():
    return build_group(load_spec("tri-3-4-4"))


@pytest.fixture(scope="session")
def tri23inf():
    return build_group(load_spec("tri-2-3-inf"))


@pytest.fixture(scope="session")
def universal():
    return build_group(load_spec("universal-3-ultra1"))


@pytest.fixture
def tri344_fresh():
    # unshared instance for tests that poison the enumeration caches
    return build_group(load_spec("tri-3-4-4"))
