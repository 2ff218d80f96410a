import numpy as np
import pytest

from linetransient import REFERENCE_PARAMS, SimConfig, build_state_space, simulate
from linetransient._backend import compiled_module
from linetransient import _purepy

BACKENDS = ["python", "compiled"]


@pytest.fixture(params=BACKENDS)
def kernels(request):
    if request.param == "python":
        return _purepy
    mod = compiled_module()
    if mod is None:
        pytest.skip("compiled extension not built")
    return mod


@pytest.fixture(scope="session")
def params():
    return REFERENCE_PARAMS


@pytest.fixture(scope="session")
def model(params):
    return build_state_space(params)


@pytest.fixture(scope="session")
def peak_series(model, params):
    return simulate(model, params, SimConfig.peak())


@pytest.fixture(scope="session")
def zero_series(model, params):
    return simulate(model, params, SimConfig.zero_crossing())


@pytest.fixture
def rng():
    return np.random.default_rng(20181)
