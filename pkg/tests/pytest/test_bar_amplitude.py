import math

import numpy as np
import pytest

from molgrating.amplitudes import (
    amplitude_prefactor,
    breakup_suppression,
    dimer_bar_amplitude,
    dimer_bar_amplitudes,
    point_bar_amplitude,
    point_limit_deviation,
)
from molgrating.dataclasses import BarSpec
from molgrating.errors import DomainError
from molgrating.models import exponential_model
from molgrating.utils.quadrature_helpers import checked_quad


@pytest.fixture
def bar(symmetric_grating):
    return symmetric_grating.bar


class TestPointBarAmplitude:
    def test_forward_value(self, bar, he2_beam):
        assert point_bar_amplitude(0.0, bar, he2_beam, normalized=True) == -12.5j
        expected = -1j * 2 * he2_beam.velocity / (2 * math.pi) ** 2 * 12.5
        assert point_bar_amplitude(0.0, bar, he2_beam) == pytest.approx(expected, rel=1e-15)

    def test_prefactor(self, he2_beam):
        assert amplitude_prefactor(he2_beam) == pytest.approx(2000 / (2 * math.pi) ** 2, rel=1e-15)
        assert amplitude_prefactor(he2_beam, normalized=True) == 1.0

    def test_closed_form(self, bar, he2_beam):
        for k2 in (0.01, 0.3, 1.7):
            expected = -1j * math.sin(k2 * bar.width / 2) / k2
            assert point_bar_amplitude(k2, bar, he2_beam, normalized=True) == pytest.approx(expected, rel=1e-13)

    def test_zeros(self, bar, he2_beam):
        for n in (1, 2, 3):
            k2 = 2 * math.pi * n / bar.width
            assert abs(point_bar_amplitude(k2, bar, he2_beam, normalized=True)) < 1e-13

    def test_vectorized(self, bar, he2_beam):
        grid = np.linspace(-1.0, 1.0, 11)
        values = point_bar_amplitude(grid, bar, he2_beam, normalized=True)
        assert isinstance(values, np.ndarray)
        for k2, value in zip(grid, values):
            assert value == point_bar_amplitude(float(k2), bar, he2_beam, normalized=True)

    def test_invalid_bar(self):
        with pytest.raises(DomainError):
            BarSpec(width=0.0)


class TestDimerBarAmplitude:
    def test_even(self, bar, he2_beam, calibrated_he2):
        for k2 in (0.1, 0.6):
            plus = dimer_bar_amplitude(k2, bar, he2_beam, calibrated_he2, normalized=True)
            minus = dimer_bar_amplitude(-k2, bar, he2_beam, calibrated_he2, normalized=True)
            assert plus == minus

    def test_forward_value(self, bar, he2_beam, calibrated_he2):
        # t(0) = -i a + i (a M(a) - X(a)) with M, X the zeroth and first moments of g on [0, a]
        a = bar.width
        first_moment, _ = checked_quad(
            lambda x: x * calibrated_he2.transverse_density(x), 0.0, a, what="first moment", points=[1.0, 5.0]
        )
        expected = -1j * (a - a * calibrated_he2.transverse_mass(a) + first_moment)
        dimer = dimer_bar_amplitude(0.0, bar, he2_beam, calibrated_he2, normalized=True)
        assert dimer == pytest.approx(expected, rel=1e-7)
        # about the forward amplitude of a bar widened by <|x2|>
        assert abs(dimer) == pytest.approx(12.5 + 1 / (8 * calibrated_he2.kappa), rel=1e-2)

    def test_forward_value_near_point(self, bar, he2_beam, near_point_he2):
        dimer = dimer_bar_amplitude(0.0, bar, he2_beam, near_point_he2, normalized=True)
        assert dimer == pytest.approx(-12.5j, rel=1e-3)

    def test_unnormalized_carries_prefactor(self, bar, he2_beam, calibrated_he2):
        normalized = dimer_bar_amplitude(0.2, bar, he2_beam, calibrated_he2, normalized=True)
        full = dimer_bar_amplitude(0.2, bar, he2_beam, calibrated_he2)
        assert full == pytest.approx(amplitude_prefactor(he2_beam) * normalized, rel=1e-12)

    def test_grid_matches_pointwise(self, bar, he2_beam, calibrated_he2):
        grid = np.array([-0.4, -0.1, 0.0, 0.1, 0.4])
        values = dimer_bar_amplitudes(grid, bar, he2_beam, calibrated_he2, normalized=True)
        assert values[0] == values[-1]
        assert values[1] == values[3]
        assert values[2] == dimer_bar_amplitude(0.0, bar, he2_beam, calibrated_he2, normalized=True)

    @pytest.mark.parametrize(
        argnames=("dimer_model",),
        argvalues=[
            pytest.param("calibrated", id="calibrated"),
            pytest.param("binding", id="binding"),
        ],
        indirect=True,
    )
    def test_dimer_weaker_than_point_away_from_forward(self, bar, he2_beam, dimer_model):
        k2 = 2 * math.pi / 50.0
        dimer = dimer_bar_amplitude(k2, bar, he2_beam, dimer_model, normalized=True)
        point = point_bar_amplitude(k2, bar, he2_beam, normalized=True)
        assert abs(dimer) < abs(point)

    def test_point_limit(self, bar, he2_beam, near_point_he2):
        grid = np.linspace(0.0, 1.0, 101)
        assert point_limit_deviation(grid, bar, he2_beam, near_point_he2) < 1e-3

    def test_point_limit_is_approached_as_kappa_grows(self, bar, he2_beam):
        grid = np.linspace(0.0, 1.0, 21)
        deviations = [
            point_limit_deviation(grid, bar, he2_beam, exponential_model(kappa)) for kappa in (0.5, 1.0, 5.0, 50.0)
        ]
        assert all(later < earlier for earlier, later in zip(deviations, deviations[1:]))
        assert deviations[-1] < 1e-3

    def test_finite_size_is_visible(self, bar, he2_beam, calibrated_he2):
        grid = np.linspace(0.0, 1.0, 21)
        assert point_limit_deviation(grid, bar, he2_beam, calibrated_he2) > 1e-2

    @pytest.mark.slow
    def test_tabulated_matches_exponential(self, bar, he2_beam, calibrated_he2, tabulated_he2):
        k2 = 0.37
        exponential = dimer_bar_amplitude(k2, bar, he2_beam, calibrated_he2, normalized=True)
        tabulated = dimer_bar_amplitude(k2, bar, he2_beam, tabulated_he2, normalized=True)
        assert abs(tabulated - exponential) < 1e-5 * abs(exponential)


class TestBreakupSuppression:
    def test_odd_orders_are_suppressed_more_with_order(self, bar, he2_beam, calibrated_he2):
        retained = [
            1 - breakup_suppression(2 * math.pi * n / 50.0, bar, he2_beam, calibrated_he2) for n in (1, 3, 5)
        ]
        assert all(value < 1 for value in retained)
        assert retained[0] > retained[1] > retained[2]

    def test_undefined_at_point_zero(self, bar, he2_beam, calibrated_he2):
        with pytest.raises(DomainError, match="point amplitude vanishes"):
            breakup_suppression(2 * math.pi / bar.width, bar, he2_beam, calibrated_he2)

    def test_near_point_dimer_is_not_suppressed(self, bar, he2_beam, near_point_he2):
        assert abs(breakup_suppression(2 * math.pi / 50.0, bar, he2_beam, near_point_he2)) < 1e-3
