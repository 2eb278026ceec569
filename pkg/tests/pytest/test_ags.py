import numpy as np
import pytest

from molgrating.ags import (
    IDENTITY_LABELS,
    FiniteModel,
    breakup_operator,
    inverse_resolvent,
    random_model,
    relative_residual,
    resolvents,
    scalar_t_matrix,
    scaling_slope,
    seed_dimension,
    t_matrix,
    truncation_gap,
    u_vv_from_definition,
    u_wv_from_definition,
    verify_identities,
    verify_many,
)
from molgrating.errors import DomainError, NumericalError


class TestIdentities:
    def test_random_models(self):
        results = verify_many(list(range(100)))
        assert sorted({dim for _, dim, _ in results}) == list(range(4, 17))
        for seed, dim, report in results:
            assert set(IDENTITY_LABELS) <= set(report.residuals)
            assert report.all_passed, f"seed={seed} dim={dim} failed {report.failures}: {report.residuals}"

    @pytest.mark.parametrize(
        argnames=("finite_model",),
        argvalues=[
            pytest.param("small", id="small"),
            pytest.param("scalar", id="scalar"),
            pytest.param("no-external", id="no-external"),
            pytest.param("no-binding", id="no-binding"),
        ],
        indirect=True,
    )
    def test_special_models(self, finite_model):
        report = verify_identities(finite_model)
        assert report.all_passed, report.residuals

    def test_scalar_t_matrix_is_checked(self, scalar_model):
        report = verify_identities(scalar_model)
        assert "scalar_t_matrix" in report.residuals
        assert report.residuals["scalar_t_matrix"] < 1e-12

    def test_conjugate_model(self, small_model):
        assert verify_identities(small_model.conjugate()).all_passed

    @pytest.mark.parametrize("factor", [0.25, 3.0])
    def test_scaling_leaves_residuals_unchanged(self, small_model, factor):
        report = verify_identities(small_model)
        scaled = verify_identities(small_model.scaled(factor))
        assert scaled.all_passed
        assert scaled.residuals == pytest.approx(report.residuals, abs=1e-12)
        assert scaled.truncation_gap == pytest.approx(report.truncation_gap, rel=1e-10)

    def test_tolerance_follows_conditioning(self, small_model):
        report = verify_identities(small_model, tol=1e-10)
        assert report.tolerance == 1e-10 * max(1.0, report.condition_product / 1e4)
        assert report.condition_product >= 1.0

    def test_zero_tolerance_fails(self, small_model):
        report = verify_identities(small_model, tol=0.0)
        assert not report.all_passed
        assert report.failures == list(report.residuals)

    def test_report_json(self, small_model):
        payload = verify_identities(small_model).to_json()
        assert set(payload) == {"residuals", "tolerance", "condition_product", "truncation_gap"}


class TestOperators:
    def test_no_external_potential(self, no_external_model):
        u_vv = u_vv_from_definition(no_external_model)
        assert np.max(np.abs(u_vv)) == 0.0
        g0_inv = inverse_resolvent(no_external_model.z, no_external_model.h0)
        np.testing.assert_allclose(u_wv_from_definition(no_external_model), g0_inv, rtol=1e-10, atol=1e-10)

    def test_no_binding_potential(self, no_binding_model):
        # V = 0: U_VV reduces to T_W
        t_w = t_matrix(no_binding_model.h0, no_binding_model.w, no_binding_model.z)
        np.testing.assert_allclose(u_vv_from_definition(no_binding_model), t_w, rtol=1e-10, atol=1e-12)
        gap, _ = truncation_gap(no_binding_model)
        assert gap < 1e-10

    def test_breakup_operator(self, small_model):
        g0, g, gv, _ = resolvents(small_model)
        u_0v = breakup_operator(small_model)
        z = small_model.z
        np.testing.assert_allclose(
            u_0v,
            inverse_resolvent(z, small_model.h0) @ g @ inverse_resolvent(z, small_model.h0 + small_model.v),
            rtol=1e-12,
        )
        np.testing.assert_allclose(g0 @ inverse_resolvent(z, small_model.h0), np.eye(small_model.dim), atol=1e-12)

    def test_t_matrix_conjugation(self, small_model):
        z = small_model.z
        t_z = t_matrix(small_model.h0, small_model.w, z)
        t_conj = t_matrix(small_model.h0, small_model.w, z.conjugate())
        np.testing.assert_allclose(t_conj, t_z.conj().T, rtol=1e-10, atol=1e-12)

    @pytest.mark.parametrize("seed", range(20))
    def test_u_vv_hermitian_analyticity(self, seed):
        # U_VV(conj(z)) = U_VV(z)^dagger
        model = random_model(seed, dim=seed_dimension(seed))
        below = u_vv_from_definition(model.conjugate())
        above = u_vv_from_definition(model)
        assert relative_residual(below, above.conj().T) < 1e-12

    def test_u_vv_scales_with_energy(self, small_model):
        scaled = u_vv_from_definition(small_model.scaled(2.0))
        np.testing.assert_allclose(scaled, 2.0 * u_vv_from_definition(small_model), rtol=1e-12, atol=1e-12)

    def test_scalar_t_matrix(self):
        h, x, z = 0.3, -0.7, complex(0.1, 0.5)
        expected = t_matrix(np.array([[h]], dtype=complex), np.array([[x]], dtype=complex), z)[0, 0]
        assert scalar_t_matrix(h, x, z) == pytest.approx(expected, rel=1e-12)

    def test_ill_conditioned_resolvent(self, near_singular_model):
        with pytest.raises(NumericalError, match="ill-conditioned") as excinfo:
            resolvents(near_singular_model)
        assert excinfo.value.diagnostics["condition"] > 1e14


class TestTruncation:
    def test_gap_is_undefined_without_external_potential(self, no_external_model):
        with pytest.warns(UserWarning, match="vanishes"):
            gap, first = truncation_gap(no_external_model)
        assert np.isnan(gap)
        assert np.isnan(first)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_scaling(self, seed):
        slope0, slope1 = scaling_slope(random_model(seed, dim=seed_dimension(seed)))
        assert slope0 == pytest.approx(1.0, abs=0.1)
        assert slope1 == pytest.approx(2.0, abs=0.2)

    def test_gap_shrinks_with_binding(self, small_model):
        strong, _ = truncation_gap(small_model)
        weak, _ = truncation_gap(small_model.with_binding_scaled(1e-3))
        assert weak < strong


class TestFiniteModel:
    def test_random_model_is_reproducible(self):
        first, second = random_model(5, dim=4), random_model(5, dim=4)
        assert np.array_equal(first.h0, second.h0)
        assert first.z == second.z

    def test_spectral_parameter_range(self):
        for seed in range(20):
            z = random_model(seed).z
            assert -1.0 <= z.real <= 1.0
            assert 0.1 <= z.imag <= 2.0

    def test_seed_dimensions(self):
        assert [seed_dimension(s) for s in (0, 12, 13)] == [4, 16, 4]

    def test_not_hermitian(self, small_model):
        with pytest.raises(DomainError, match="Hermitian"):
            FiniteModel(
                h0=small_model.h0 + 1j * np.eye(6), v=small_model.v, w1=small_model.w1, w2=small_model.w2, z=1j
            )

    def test_real_spectral_parameter(self, small_model):
        with pytest.raises(DomainError, match="off the real axis"):
            FiniteModel(h0=small_model.h0, v=small_model.v, w1=small_model.w1, w2=small_model.w2, z=0.5)

    def test_shape_mismatch(self, small_model):
        with pytest.raises(DomainError, match="shape"):
            FiniteModel(h0=small_model.h0, v=np.eye(3), w1=small_model.w1, w2=small_model.w2, z=1j)

    def test_w_is_sum(self, small_model):
        assert np.array_equal(small_model.w, small_model.w1 + small_model.w2)
        assert small_model.dim == 6
