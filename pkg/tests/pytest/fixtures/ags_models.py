import numpy as np
import pytest

from molgrating.ags import FiniteModel, random_model


### FINITE MODELS ###
@pytest.fixture
def small_model():
    return random_model(seed=7, dim=6)


@pytest.fixture
def scalar_model():
    return random_model(seed=3, dim=1)


@pytest.fixture
def no_external_model():
    return random_model(seed=11, dim=5, zero_w=True)


@pytest.fixture
def no_binding_model():
    return random_model(seed=13, dim=5, zero_v=True)


@pytest.fixture
def near_singular_model():
    # z sits 1e-15 above an eigenvalue of H0 = H
    h0 = np.diag([0.0, 1.0]).astype(complex)
    zeros = np.zeros((2, 2), dtype=complex)
    return FiniteModel(h0=h0, v=zeros, w1=zeros, w2=zeros, z=complex(0.0, 1e-15))
