import pytest

from molgrating.constants import CONSTANTS, HE2_MASS
from molgrating.dataclasses import BeamState, GratingGeometry, SurfaceSpec


### GRATINGS ###
@pytest.fixture
def symmetric_grating():
    return GratingGeometry(period=50.0, slit_width=25.0, bar_count=100, depth=100.0, wedge_angle=8.0)


@pytest.fixture
def narrow_grating():
    # symmetric, with 15 nm bars and slits
    return GratingGeometry(period=30.0, slit_width=15.0, bar_count=100, depth=100.0, wedge_angle=8.0)


@pytest.fixture
def rectangular_grating(symmetric_grating):
    return symmetric_grating.with_changes(wedge_angle=0.0)


### BEAMS ###
@pytest.fixture
def he2_beam():
    return BeamState(total_mass=HE2_MASS, velocity=1000.0)


@pytest.fixture
def he_atom_beam():
    return BeamState(total_mass=CONSTANTS.helium4_mass, velocity=1000.0)


### SURFACE ###
@pytest.fixture
def surface_spec(symmetric_grating):
    return SurfaceSpec(c3=0.1, geometry=symmetric_grating, velocity=1000.0, cutoff_distance=0.5)


@pytest.fixture
def rectangular_surface_spec(rectangular_grating):
    return SurfaceSpec(c3=0.1, geometry=rectangular_grating, velocity=1000.0, cutoff_distance=0.5)
