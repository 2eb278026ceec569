import pytest

from fixtures.ags_models import *  # noqa: F401,F403
from fixtures.geometries import *  # noqa: F401,F403
from fixtures.models import *  # noqa: F401,F403

# NOTE: the fixtures below select one of several models or gratings by id so that a single test can be
#       parametrized over them with indirect=True; pytest builds each underlying fixture once per test.


@pytest.fixture
def dimer_model(request, calibrated_he2, binding_he2, near_point_he2, tabulated_he2):
    model_id = request.param
    model_id_to_model = {
        "calibrated": calibrated_he2,
        "binding": binding_he2,
        "near-point": near_point_he2,
        "tabulated": tabulated_he2,
    }
    return model_id_to_model[model_id]


@pytest.fixture
def geometry(request, symmetric_grating, narrow_grating, rectangular_grating):
    geometry_id = request.param
    geometry_id_to_geometry = {
        "symmetric": symmetric_grating,
        "narrow": narrow_grating,
        "rectangular": rectangular_grating,
    }
    return geometry_id_to_geometry[geometry_id]


@pytest.fixture
def finite_model(request, small_model, scalar_model, no_external_model, no_binding_model):
    model_id = request.param
    model_id_to_model = {
        "small": small_model,
        "scalar": scalar_model,
        "no-external": no_external_model,
        "no-binding": no_binding_model,
    }
    return model_id_to_model[model_id]
