"""
Tests for wave speeds, the scaled eigensystem and the entropy stable fluxes.
"""
import numpy as np
import pytest

from mhd_esfv.models.state import Direction
from mhd_esfv.physics.dissipation import (
    eigen_system,
    es_llf_flux,
    es_roe_flux,
    llf_dissipation,
    roe_dissipation,
    wave_speeds,
)
from mhd_esfv.physics.flux import ec_flux, janhunen_interface_source
from mhd_esfv.physics.state import (
    entropy_jacobian,
    entropy_quantities_prim,
    entropy_vars_prim,
)
from tests.oracles import BRIO_WU_LEFT, augmented_jacobian


def _merriam_error(prim, gamma, direction):
    system = eigen_system(prim, gamma, direction)
    factored = np.einsum(
        "...ik,...k,...jk->...ij", system.rhat, system.scaling, system.rhat
    )
    jac = entropy_jacobian(prim, gamma)
    norm = np.max(np.abs(jac), axis=(-2, -1))
    return np.max(np.abs(factored - jac), axis=(-2, -1)) / norm


class TestWaveSpeeds:
    def test_field_free_gas(self):
        speeds = wave_speeds(np.array([1.0, 0, 0, 0, 1.0, 0, 0, 0]), 2.0)
        assert speeds.a == pytest.approx(np.sqrt(2.0))
        assert speeds.c_a == 0.0
        assert speeds.c_f == pytest.approx(np.sqrt(2.0))
        assert speeds.c_s == 0.0

    def test_aligned_field(self):
        speeds = wave_speeds(np.array([1.0, 0, 0, 0, 1.0, 2.0, 0, 0]), 2.0)
        assert speeds.c_f == pytest.approx(2.0)
        assert speeds.c_s == pytest.approx(np.sqrt(2.0))
        assert speeds.c_a == pytest.approx(2.0)
        assert speeds.b_perp == 0.0

    def test_brio_wu_left(self):
        speeds = wave_speeds(BRIO_WU_LEFT, 2.0)
        assert speeds.c_f == pytest.approx(1.79228, abs=1e-5)
        assert speeds.c_s == pytest.approx(0.59180, abs=1e-5)
        assert speeds.c_a == pytest.approx(0.75)

    @pytest.mark.parametrize("direction", list(Direction))
    def test_ordering_and_product(self, prim_batch, direction):
        speeds = wave_speeds(prim_batch, 5.0 / 3.0, direction)
        slack = 1e-12 * speeds.c_f
        assert np.all(speeds.c_s >= 0.0)
        assert np.all(speeds.c_s <= speeds.c_a + slack)
        assert np.all(speeds.c_a <= speeds.c_f + slack)
        assert np.all(speeds.a <= speeds.c_f + slack)
        np.testing.assert_allclose(
            speeds.c_f * speeds.c_s, speeds.a * speeds.c_a, rtol=1e-12, atol=1e-14
        )

    def test_direction_selects_normal_component(self):
        prim = np.array([1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 3.0, 0.0])
        assert wave_speeds(prim, 1.4, Direction.X).c_a == 0.0
        assert wave_speeds(prim, 1.4, Direction.Y).c_a == pytest.approx(3.0)
        assert wave_speeds(prim, 1.4, Direction.Y).b_perp == 0.0


class TestEigenSystem:
    @pytest.mark.parametrize("direction", list(Direction))
    def test_factorizes_entropy_jacobian(self, prim_batch, direction):
        gamma = 5.0 / 3.0
        speeds = wave_speeds(prim_batch, gamma, direction)
        prim = prim_batch[speeds.b_perp > 1e-3]
        assert np.all(_merriam_error(prim, gamma, direction) <= 1e-10)

    @pytest.mark.parametrize(
        "prim",
        [
            np.array([1.0, 0.3, -0.2, 0.1, 1.0, 1.0, 0.0, 0.0]),
            np.array([2.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0]),
            np.array([1.0, 0.5, 0.5, 0.5, 1.0, -0.4, 0.0, 0.0]),
        ],
        ids=["aligned", "field-free", "aligned-negative"],
    )
    def test_factorizes_with_vanishing_tangential_field(self, prim):
        assert _merriam_error(prim, 2.0, Direction.X) <= 1e-12

    def test_eigenvalue_order(self, prim_batch):
        system = eigen_system(prim_batch, 1.4, Direction.Y)
        speeds = wave_speeds(prim_batch, 1.4, Direction.Y)
        v = prim_batch[:, 2]
        expected = np.stack(
            [
                v - speeds.c_f,
                v - speeds.c_a,
                v - speeds.c_s,
                v,
                v,
                v + speeds.c_s,
                v + speeds.c_a,
                v + speeds.c_f,
            ],
            axis=-1,
        )
        np.testing.assert_allclose(system.eigenvalues, expected, rtol=1e-15, atol=1e-15)

    @pytest.mark.parametrize("direction", list(Direction))
    def test_columns_are_eigenvectors(self, rng, direction):
        gamma = 5.0 / 3.0
        for _ in range(60):
            prim = np.concatenate(
                [
                    rng.uniform(0.5, 2.0, 1),
                    rng.uniform(-1.0, 1.0, 3),
                    rng.uniform(0.5, 2.0, 1),
                    rng.uniform(0.2, 1.5, 3) * rng.choice([-1.0, 1.0], 3),
                ]
            )
            jac = augmented_jacobian(prim, gamma, direction)
            system = eigen_system(prim, gamma, direction)
            residual = jac @ system.rhat - system.rhat * system.eigenvalues
            scale = np.max(np.abs(jac)) * np.max(np.abs(system.rhat))
            assert np.max(np.abs(residual)) <= 1e-5 * scale

    def test_eigenvalues_match_numerical_spectrum(self, rng):
        gamma = 2.0
        for _ in range(20):
            prim = np.concatenate(
                [
                    rng.uniform(0.5, 2.0, 1),
                    rng.uniform(-1.0, 1.0, 3),
                    rng.uniform(0.5, 2.0, 1),
                    rng.uniform(0.2, 1.5, 3),
                ]
            )
            numerical = np.sort(np.linalg.eigvals(augmented_jacobian(prim, gamma, 0)).real)
            expected = np.sort(eigen_system(prim, gamma).eigenvalues)
            assert np.max(np.abs(numerical - expected)) <= 1e-5 * np.max(np.abs(expected))

    def test_field_free_splitting(self):
        system = eigen_system(np.array([1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]), 5.0 / 3.0)
        assert system.alpha_f == pytest.approx(1.0, abs=1e-12)
        assert system.alpha_s <= 1e-7
        np.testing.assert_allclose(system.beta_t, [np.sqrt(0.5), np.sqrt(0.5)])
        assert np.all(np.isfinite(system.rhat))

    def test_triple_point_is_finite(self):
        prim = np.array([1.0, 0.0, 0.0, 0.0, 1.0, np.sqrt(2.0), 0.0, 0.0])
        system = eigen_system(prim, 2.0)
        assert system.alpha_f**2 + system.alpha_s**2 == pytest.approx(1.0)
        assert np.all(np.isfinite(system.rhat))

    def test_scaling_is_positive(self, prim_batch):
        system = eigen_system(prim_batch, 1.4, Direction.Z)
        assert np.all(system.scaling > 0.0)
        assert system.rhat.shape == (1000, 8, 8)


class TestEntropyStableFluxes:
    @pytest.mark.parametrize("flux_fn", [es_roe_flux, es_llf_flux])
    def test_equal_states_add_no_dissipation(self, prim_batch, flux_fn):
        np.testing.assert_array_equal(
            flux_fn(prim_batch, prim_batch, 1.4), ec_flux(prim_batch, prim_batch, 1.4)
        )

    @pytest.mark.parametrize("dissipation", [roe_dissipation, llf_dissipation])
    @pytest.mark.parametrize("direction", list(Direction))
    def test_dissipation_is_non_negative(self, interface_pairs, dissipation, direction):
        left, right = interface_pairs
        gamma = 5.0 / 3.0
        dv = entropy_vars_prim(right, gamma) - entropy_vars_prim(left, gamma)
        terms = dv * dissipation(left, right, gamma, direction)
        quadratic = np.sum(terms, axis=-1)
        assert np.all(quadratic >= -1e-10 * np.sum(np.abs(terms), axis=-1))

    @pytest.mark.parametrize("flux_fn", [es_roe_flux, es_llf_flux])
    @pytest.mark.parametrize("direction", list(Direction))
    def test_entropy_production_non_positive(self, interface_pairs, rng, flux_fn, direction):
        left, right = interface_pairs
        gamma = 5.0 / 3.0
        n = left.shape[0]
        dx_left = rng.uniform(0.5, 2.0, n)
        dx_right = rng.uniform(0.5, 2.0, n)
        flux = flux_fn(left, right, gamma, direction)
        source = janhunen_interface_source(left, right, dx_left, dx_right, gamma, direction).values
        v_left = entropy_vars_prim(left, gamma)
        v_right = entropy_vars_prim(right, gamma)
        flux_terms = (v_right - v_left) * flux
        source_terms = 0.5 * (dx_left[:, None] * v_left + dx_right[:, None] * v_right) * source
        phi_jump = entropy_quantities_prim(right, gamma).potential(
            direction
        ) - entropy_quantities_prim(left, gamma).potential(direction)
        production = np.sum(flux_terms, axis=-1) + np.sum(source_terms, axis=-1) - phi_jump
        scale = (
            np.sum(np.abs(flux_terms), axis=-1)
            + np.sum(np.abs(source_terms), axis=-1)
            + np.abs(phi_jump)
        )
        assert np.all(production <= 1e-11 * scale)
        assert np.mean(production) < 0.0

    def test_llf_uses_fastest_signal_speed(self, interface_pairs):
        left, right = interface_pairs
        gamma = 1.4
        mean = 0.5 * (left + right)
        lam = np.abs(mean[:, 1]) + wave_speeds(mean, gamma).c_f
        dv = entropy_vars_prim(right, gamma) - entropy_vars_prim(left, gamma)
        expected = lam[:, None] * np.einsum("...ij,...j->...i", entropy_jacobian(mean, gamma), dv)
        bound = 1e-11 * (1.0 + np.max(np.abs(expected), axis=-1, keepdims=True))
        assert np.all(np.abs(llf_dissipation(left, right, gamma) - expected) <= bound)

    def test_scalar_inputs(self):
        right = np.array([0.125, 0.0, 0.0, 0.0, 0.1, 0.75, -1.0, 0.0])
        flux = es_roe_flux(BRIO_WU_LEFT, right, 2.0)
        assert flux.shape == (8,)
        assert np.all(np.isfinite(flux))
