import math

import numpy as np
import pytest

from molgrating.dataclasses import BeamState, SurfaceSpec
from molgrating.errors import DomainError
from molgrating.grating import grating_function, pattern, relative_peak_heights
from molgrating.surface import (
    atomic_pattern_with_surface,
    c3_sweep,
    deviation_from_geometric,
    eikonal_phase,
    is_blocked,
    open_half_width,
    open_interval,
    order_ratio_with_surface,
    slit_transmission_amplitude,
    transmission,
    wall_distances,
)
from molgrating.units import hbar_velocity
from molgrating.utils.quadrature_helpers import checked_quad


class TestEikonalPhase:
    def test_rectangular_slit_centre(self, rectangular_surface_spec):
        # each wall contributes (C3 / hbar v) t / b^3 with b = s / 2
        expected = 2 * 0.1 / hbar_velocity(1000.0) * 100.0 / 12.5**3
        assert eikonal_phase(0.0, rectangular_surface_spec) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(0.0156, rel=1e-2)

    @pytest.mark.parametrize("x", [0.0, 3.0, -7.5, 11.0])
    def test_wedged_slit_matches_path_integral(self, surface_spec, x):
        def potential(z: float) -> float:
            left, right = wall_distances(x, z, surface_spec)
            return surface_spec.c3 / float(left) ** 3 + surface_spec.c3 / float(right) ** 3

        path, _ = checked_quad(
            potential, 0.0, surface_spec.geometry.depth, what="path integral", epsabs=0.0, epsrel=1e-12
        )
        expected = path / hbar_velocity(surface_spec.velocity)
        assert eikonal_phase(x, surface_spec) == pytest.approx(expected, rel=1e-9)

    def test_linear_in_c3(self, surface_spec):
        x = np.array([0.0, 5.0, -10.0])
        double = surface_spec.with_changes(c3=0.2)
        np.testing.assert_allclose(eikonal_phase(x, double), 2 * eikonal_phase(x, surface_spec), rtol=1e-12)

    def test_linear_in_inverse_velocity(self, surface_spec):
        x = np.array([0.0, 5.0, -10.0])
        faster = surface_spec.with_changes(velocity=2000.0)
        np.testing.assert_allclose(eikonal_phase(x, faster), 0.5 * eikonal_phase(x, surface_spec), rtol=1e-12)

    def test_even_in_x(self, surface_spec):
        assert eikonal_phase(4.0, surface_spec) == pytest.approx(eikonal_phase(-4.0, surface_spec), rel=1e-14)

    def test_wedge_weakens_phase(self, surface_spec, rectangular_surface_spec):
        assert eikonal_phase(0.0, surface_spec) < eikonal_phase(0.0, rectangular_surface_spec)

    def test_outside_slit(self, surface_spec):
        with pytest.raises(DomainError):
            eikonal_phase(12.5, surface_spec)

    def test_needs_velocity(self, symmetric_grating):
        spec = SurfaceSpec(c3=0.1, geometry=symmetric_grating)
        with pytest.raises(DomainError, match="velocity"):
            eikonal_phase(0.0, spec)


class TestSlitTransmission:
    def test_cutoff(self, surface_spec):
        assert open_half_width(surface_spec) == pytest.approx(12.5 - 0.5 / math.cos(math.radians(8.0)), rel=1e-14)
        lower, upper = open_interval(surface_spec)
        assert lower == -upper
        assert is_blocked(12.2, surface_spec)
        assert not is_blocked(11.9, surface_spec)
        assert transmission(12.2, surface_spec) == 0j
        assert abs(transmission(3.0, surface_spec)) == pytest.approx(1.0, rel=1e-14)

    def test_blocked_region_grows_with_cutoff(self, surface_spec):
        half_widths = [
            open_half_width(surface_spec.with_changes(cutoff_distance=cutoff)) for cutoff in (0.1, 0.5, 1.0, 2.0)
        ]
        assert all(later < earlier for earlier, later in zip(half_widths, half_widths[1:]))
        assert half_widths == pytest.approx([12.399, 11.995, 11.490, 10.480], abs=1e-3)

    def test_no_cutoff_without_interaction(self, surface_spec):
        geometric = surface_spec.with_changes(c3=0.0)
        assert open_half_width(geometric) == 12.5
        assert not is_blocked(12.4, geometric)

    def test_geometric_limit(self, surface_spec):
        geometric = surface_spec.with_changes(c3=0.0)
        for k2 in (0.0, 0.1, 2 * math.pi / 50.0, 0.9):
            expected = 25.0 * np.sinc(k2 * 25.0 / (2 * math.pi))
            assert slit_transmission_amplitude(k2, geometric) == expected

    def test_geometric_pattern_is_exact(self, symmetric_grating, he_atom_beam, surface_spec):
        k2_grid = np.linspace(0.0, 0.6, 13)
        geometric = atomic_pattern_with_surface(
            symmetric_grating, he_atom_beam, surface_spec.with_changes(c3=0.0), k2_grid
        )
        aperture = 25.0 * np.sinc(k2_grid * 25.0 / (2 * math.pi))
        expected = np.abs(aperture * grating_function(k2_grid, 50.0, 100)) ** 2
        np.testing.assert_allclose(geometric.intensity, expected, rtol=1e-12, atol=1e-12 * expected.max())
        assert geometric.order_intensity(2) < 1e-12 * geometric.order_intensity(1)

    def test_interaction_moves_first_minimum_outward(self, surface_spec):
        k2_grid = np.linspace(0.2, 0.34, 141)

        def first_minimum(spec):
            intensity = [abs(slit_transmission_amplitude(k2, spec)) ** 2 for k2 in k2_grid]
            return k2_grid[int(np.argmin(intensity))]

        geometric = first_minimum(surface_spec.with_changes(c3=0.0))
        attracted = first_minimum(surface_spec)
        assert geometric == pytest.approx(2 * math.pi / 25.0, abs=1e-3)
        assert attracted > geometric + 0.005

    @pytest.mark.parametrize("slit_width", [15.0, 20.0, 35.0])
    def test_geometric_slit_matches_bar_orders(self, symmetric_grating, he_atom_beam, surface_spec, slit_width):
        # aperture and obstacle pictures agree away from the forward direction
        geometry = symmetric_grating.with_changes(slit_width=slit_width)
        spec = surface_spec.with_changes(c3=0.0, geometry=geometry)
        k2_grid = np.linspace(0.0, 0.7, 8)
        slits = relative_peak_heights(atomic_pattern_with_surface(geometry, he_atom_beam, spec, k2_grid))
        bars = relative_peak_heights(pattern(geometry, he_atom_beam, None, k2_grid, normalized=True))
        assert [n for n, _ in slits] == [n for n, _ in bars] == list(range(6))
        for (n, slit_ratio), (_, bar_ratio) in list(zip(slits, bars))[1:]:
            assert slit_ratio == pytest.approx(bar_ratio, rel=1e-10, abs=1e-14), f"order {n}"

    def test_even_in_k2(self, surface_spec):
        for k2 in (0.05, 0.3):
            assert slit_transmission_amplitude(-k2, surface_spec) == slit_transmission_amplitude(k2, surface_spec)

    def test_fully_blocked_slit(self, surface_spec):
        narrow = surface_spec.geometry.with_changes(period=1.5, slit_width=0.8)
        spec = surface_spec.with_changes(geometry=narrow)
        with pytest.warns(UserWarning, match="fully blocked"):
            assert slit_transmission_amplitude(0.1, spec) == 0j

    def test_parallel_matches_serial(self, symmetric_grating, he_atom_beam, surface_spec):
        k2_grid = np.array([0.0, 0.13, 0.26])
        serial = atomic_pattern_with_surface(symmetric_grating, he_atom_beam, surface_spec, k2_grid)
        parallel = atomic_pattern_with_surface(symmetric_grating, he_atom_beam, surface_spec, k2_grid, max_workers=3)
        assert np.array_equal(serial.intensity, parallel.intensity)

    def test_velocity_taken_from_beam(self, symmetric_grating, he_atom_beam):
        spec = SurfaceSpec(c3=0.1, geometry=symmetric_grating)
        explicit = spec.with_changes(velocity=he_atom_beam.velocity)
        k2_grid = np.array([0.0, 0.13])
        implicit_pattern = atomic_pattern_with_surface(symmetric_grating, he_atom_beam, spec, k2_grid)
        explicit_pattern = atomic_pattern_with_surface(symmetric_grating, he_atom_beam, explicit, k2_grid)
        assert np.array_equal(implicit_pattern.intensity, explicit_pattern.intensity)


class TestOrderRatios:
    def test_wedge_changes_second_order(self, surface_spec, rectangular_surface_spec):
        wedged = order_ratio_with_surface(surface_spec, 2)
        rectangular = order_ratio_with_surface(rectangular_surface_spec, 2)
        assert abs(wedged - rectangular) > 0.01 * rectangular

    def test_c3_sweep(self, surface_spec):
        sweep = c3_sweep(surface_spec, [0.0, 0.05, 0.1])
        assert [c3 for c3, _ in sweep] == [0.0, 0.05, 0.1]
        # the geometric symmetric slit has no second order; any interaction brings it back
        assert sweep[0][1] < 1e-12
        assert all(ratio > 1e-6 for _, ratio in sweep[1:])

    def test_c3_sweep_matches_single_ratios(self, surface_spec):
        values = [0.0, 0.1, 0.2, 0.4]
        sweep = c3_sweep(surface_spec, values)
        assert [c3 for c3, _ in sweep] == values
        for c3, ratio in sweep:
            assert ratio == order_ratio_with_surface(surface_spec.with_changes(c3=c3), 2)
        assert sweep[0][1] < 1e-12
        assert all(math.isfinite(ratio) and ratio > 1e-6 for _, ratio in sweep[1:])

    def test_deviation_from_geometric(self, symmetric_grating, he_atom_beam, surface_spec):
        k2_grid = np.linspace(0.0, 0.4, 5)
        geometric = surface_spec.with_changes(c3=0.0)
        assert deviation_from_geometric(symmetric_grating, he_atom_beam, geometric, k2_grid) == 0.0
        assert deviation_from_geometric(symmetric_grating, he_atom_beam, surface_spec, k2_grid) > 1e-3

    def test_slower_beams_deviate_more(self, symmetric_grating, he_atom_beam, surface_spec):
        k2_grid = np.linspace(0.0, 0.4, 5)
        fast = deviation_from_geometric(symmetric_grating, he_atom_beam, surface_spec, k2_grid)
        slow = deviation_from_geometric(
            symmetric_grating, he_atom_beam, surface_spec.with_changes(velocity=500.0), k2_grid
        )
        assert slow > fast


class TestSurfaceSpec:
    @pytest.mark.parametrize(
        argnames=("changes",),
        argvalues=[
            pytest.param({"c3": -0.1}, id="negative-c3"),
            pytest.param({"cutoff_distance": 0.0}, id="zero-cutoff"),
            pytest.param({"velocity": -5.0}, id="negative-velocity"),
        ],
    )
    def test_invalid(self, surface_spec, changes):
        with pytest.raises(DomainError):
            surface_spec.with_changes(**changes)

    def test_for_beam_keeps_explicit_velocity(self, surface_spec):
        assert surface_spec.for_beam(BeamState(total_mass=4.0, velocity=5.0)).velocity == 1000.0
