import numpy as np
import pytest

from tsim.fock import enumerate_basis
from tsim.model import LatticeSpec, ModelParams
from tsim.propagate import ManyBodyState


@pytest.fixture
def desk_lattice():
    return LatticeSpec.chain(6)


@pytest.fixture
def desk_params():
    return ModelParams.defaults(6)


@pytest.fixture
def desk_bases():
    return enumerate_basis(6, 2), enumerate_basis(6, 2)


def random_state(dims, seed) -> ManyBodyState:
    rng = np.random.default_rng(seed)
    d = dims[0] * dims[1]
    amps = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return ManyBodyState.normalized(amps, dims)
