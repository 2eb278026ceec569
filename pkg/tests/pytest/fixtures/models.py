import pytest

from molgrating.constants import HE2_BINDING_ENERGY, HE2_MEAN_ABS_X2
from molgrating.models import TabulatedModel, calibrate_to_x2, exponential_from_binding


### DIMER MODELS ###
@pytest.fixture
def calibrated_he2():
    return calibrate_to_x2(HE2_MEAN_ABS_X2)


@pytest.fixture
def binding_he2():
    return exponential_from_binding(HE2_BINDING_ENERGY)


@pytest.fixture
def near_point_he2():
    # <|x2|> = 0.01 nm: a dimer contracted almost to a point
    return calibrate_to_x2(0.01)


@pytest.fixture
def tabulated_he2(calibrated_he2):
    return TabulatedModel.from_model(calibrated_he2)


@pytest.fixture
def density_file(tmp_path, calibrated_he2):
    from molgrating.models import save_tabulated

    path = tmp_path / "he2_density.txt"
    save_tabulated(calibrated_he2, str(path))
    return path
