"""
Tests for the entropy conservative fluxes and the interface source term.
"""
import numpy as np
import pytest

from mhd_esfv.models.state import Direction, FluxKind, PrimState
from mhd_esfv.physics.dissipation import es_llf_flux, es_roe_flux
from mhd_esfv.physics.flux import (
    ec_flux,
    ekec_flux,
    janhunen_interface_source,
    janhunen_interface_source_beta,
)
from mhd_esfv.physics.state import entropy_quantities_prim, entropy_vars_prim, physical_flux
from tests.oracles import random_prim

FLUXES = {
    FluxKind.EC: ec_flux,
    FluxKind.EKEC: ekec_flux,
    FluxKind.ES_ROE: es_roe_flux,
    FluxKind.ES_LLF: es_llf_flux,
}


def _log_mean(a, b):
    return (a - b) / (np.log(a) - np.log(b))


def entropy_residual(flux_fn, source_fn, left, right, dx_left, dx_right, gamma, direction):
    """[[v]].f + <dx v>.s - [[phi_d]] and a magnitude to compare it against."""
    flux = flux_fn(left, right, gamma, direction)
    source = source_fn(left, right, dx_left, dx_right, gamma, direction).values
    v_left = entropy_vars_prim(left, gamma)
    v_right = entropy_vars_prim(right, gamma)
    phi_left = entropy_quantities_prim(left, gamma).potential(direction)
    phi_right = entropy_quantities_prim(right, gamma).potential(direction)
    flux_terms = (v_right - v_left) * flux
    source_terms = 0.5 * (dx_left[:, None] * v_left + dx_right[:, None] * v_right) * source
    residual = (
        np.sum(flux_terms, axis=-1) + np.sum(source_terms, axis=-1) - (phi_right - phi_left)
    )
    scale = (
        np.sum(np.abs(flux_terms), axis=-1)
        + np.sum(np.abs(source_terms), axis=-1)
        + np.abs(phi_left)
        + np.abs(phi_right)
    )
    return residual, scale


class TestConsistency:
    @pytest.mark.parametrize("kind", list(FluxKind))
    @pytest.mark.parametrize("direction", list(Direction))
    def test_equal_states_give_physical_flux(self, prim_batch, kind, direction):
        gamma = 5.0 / 3.0
        numerical = FLUXES[kind](prim_batch, prim_batch, gamma, direction)
        exact = physical_flux(prim_batch, gamma, direction)
        bound = 1e-12 * (1.0 + np.max(np.abs(exact), axis=-1, keepdims=True))
        assert np.all(np.abs(numerical - exact) <= bound)

    @pytest.mark.parametrize("flux_fn", [ec_flux, ekec_flux])
    def test_symmetric(self, interface_pairs, flux_fn):
        left, right = interface_pairs
        for direction in Direction:
            forward = flux_fn(left, right, 1.4, direction)
            backward = flux_fn(right, left, 1.4, direction)
            bound = 1e-13 * (1.0 + np.max(np.abs(forward), axis=-1, keepdims=True))
            assert np.all(np.abs(forward - backward) <= bound)

    @pytest.mark.parametrize("flux_fn", [ec_flux, ekec_flux])
    def test_normal_induction_row_is_zero(self, interface_pairs, flux_fn):
        left, right = interface_pairs
        for direction in Direction:
            flux = flux_fn(left, right, 2.0, direction)
            assert np.all(flux[:, 5 + direction] == 0.0)

    def test_record_inputs(self):
        left = PrimState(1.0, 0.0, 0.0, 0.0, 1.0, 0.75, 1.0, 0.0)
        right = PrimState(0.125, 0.0, 0.0, 0.0, 0.1, 0.75, -1.0, 0.0)
        assert ec_flux(left, right, 2.0).shape == (8,)


class TestEulerReduction:
    def _pairs(self, interface_pairs):
        left, right = (p.copy() for p in interface_pairs)
        left[:, 5:] = 0.0
        right[:, 5:] = 0.0
        return left, right

    def test_ec_matches_ismail_roe(self, interface_pairs):
        gamma = 1.4
        left, right = self._pairs(interface_pairs)
        flux = ec_flux(left, right, gamma)

        def z(prim):
            z1 = np.sqrt(prim[:, 0] / prim[:, 4])
            return z1, z1[:, None] * prim[:, 1:4], np.sqrt(prim[:, 0] * prim[:, 4])

        z1l, zvl, z5l = z(left)
        z1r, zvr, z5r = z(right)
        z1_avg = 0.5 * (z1l + z1r)
        z5_avg = 0.5 * (z5l + z5r)
        rho = z1_avg * _log_mean(z5l, z5r)
        vel = 0.5 * (zvl + zvr) / z1_avg[:, None]
        p1 = z5_avg / z1_avg
        p2 = (gamma + 1.0) / (2.0 * gamma) * _log_mean(z5l, z5r) / _log_mean(z1l, z1r) + (
            gamma - 1.0
        ) / (2.0 * gamma) * p1
        enthalpy = gamma * p2 / (rho * (gamma - 1.0)) + 0.5 * np.sum(vel**2, axis=-1)
        mass = rho * vel[:, 0]
        expected = np.stack(
            [mass, mass * vel[:, 0] + p1, mass * vel[:, 1], mass * vel[:, 2], mass * enthalpy],
            axis=-1,
        )
        np.testing.assert_allclose(flux[:, :5], expected, rtol=1e-9, atol=1e-10)
        assert np.all(flux[:, 5:] == 0.0)

    def test_ekec_matches_kinetic_energy_preserving_euler_flux(self, interface_pairs):
        gamma = 5.0 / 3.0
        left, right = self._pairs(interface_pairs)
        flux = ekec_flux(left, right, gamma)

        beta_l = left[:, 0] / (2.0 * left[:, 4])
        beta_r = right[:, 0] / (2.0 * right[:, 4])
        rho_ln = _log_mean(left[:, 0], right[:, 0])
        vel = 0.5 * (left[:, 1:4] + right[:, 1:4])
        p_tilde = 0.5 * (left[:, 0] + right[:, 0]) / (beta_l + beta_r)
        mass = rho_ln * vel[:, 0]
        momentum = np.stack(
            [mass * vel[:, 0] + p_tilde, mass * vel[:, 1], mass * vel[:, 2]], axis=-1
        )
        vel_sq_avg = 0.5 * (np.sum(left[:, 1:4] ** 2, -1) + np.sum(right[:, 1:4] ** 2, -1))
        energy = (
            mass * (1.0 / (2.0 * (gamma - 1.0) * _log_mean(beta_l, beta_r)) - 0.5 * vel_sq_avg)
            + np.sum(vel * momentum, axis=-1)
        )
        np.testing.assert_allclose(flux[:, 0], mass, rtol=1e-9)
        np.testing.assert_allclose(flux[:, 1:4], momentum, rtol=1e-9, atol=1e-10)
        np.testing.assert_allclose(flux[:, 4], energy, rtol=1e-9, atol=1e-10)
        assert np.all(flux[:, 5:] == 0.0)


class TestEntropyConservation:
    @pytest.mark.parametrize(
        "flux_fn,source_fn",
        [(ec_flux, janhunen_interface_source), (ekec_flux, janhunen_interface_source_beta)],
        ids=["ec", "ekec"],
    )
    @pytest.mark.parametrize("direction", list(Direction))
    @pytest.mark.parametrize("gamma", [5.0 / 3.0, 2.0])
    def test_discrete_entropy_identity(
        self, interface_pairs, rng, flux_fn, source_fn, direction, gamma
    ):
        left, right = interface_pairs
        n = left.shape[0]
        dx_left = rng.choice([0.5, 1.0, 2.0], n)
        dx_right = rng.choice([0.5, 1.0, 2.0], n)
        residual, scale = entropy_residual(
            flux_fn, source_fn, left, right, dx_left, dx_right, gamma, direction
        )
        assert np.all(np.abs(residual) <= 1e-11 * scale)

    def test_identity_without_normal_field_jump(self, interface_pairs):
        left, right = (p.copy() for p in interface_pairs)
        right[:, 5] = left[:, 5]
        ones = np.ones(left.shape[0])
        residual, scale = entropy_residual(
            ec_flux, janhunen_interface_source, left, right, ones, ones, 1.4, Direction.X
        )
        assert np.all(np.abs(residual) <= 1e-11 * scale)


class TestInterfaceSource:
    def test_zero_without_normal_field_jump(self, interface_pairs):
        left, right = (p.copy() for p in interface_pairs)
        for direction in Direction:
            right[:, 5 + direction] = left[:, 5 + direction]
            source = janhunen_interface_source(left, right, 1.0, 1.0, 1.4, direction)
            assert np.all(source.values == 0.0)
            assert source.degenerate_count == 0

    @pytest.mark.parametrize("direction", list(Direction))
    def test_uniform_flow_example(self, direction):
        left = np.array([1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0])
        right = left.copy()
        right[5 + direction] += 0.1
        source = janhunen_interface_source(left, right, 1.0, 1.0, 5.0 / 3.0, direction)
        expected = np.zeros(8)
        expected[5] = -0.1
        np.testing.assert_allclose(source.values, expected, atol=1e-15)
        assert source.direction is Direction(direction)
        assert source.jump_b == pytest.approx(0.1)

    def test_rows_one_to_five_are_zero(self, interface_pairs):
        left, right = interface_pairs
        source = janhunen_interface_source(left, right, 1.0, 2.0, 1.4, Direction.Y)
        assert np.all(source.values[:, :5] == 0.0)
        np.testing.assert_array_equal(source.s7, source.values[:, 6])

    def test_beta_form_equals_parameter_form(self, interface_pairs, rng):
        left, right = interface_pairs
        n = left.shape[0]
        dx_left = rng.uniform(0.5, 2.0, n)
        dx_right = rng.uniform(0.5, 2.0, n)
        for direction in Direction:
            plain = janhunen_interface_source(left, right, dx_left, dx_right, 2.0, direction)
            beta = janhunen_interface_source_beta(left, right, dx_left, dx_right, 2.0, direction)
            bound = 1e-13 * (np.max(np.abs(plain.values), axis=-1, keepdims=True) + 1e-300)
            assert np.all(np.abs(plain.values - beta.values) <= bound)

    def test_sign_change_takes_bounded_row(self):
        left = np.array([1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 2.0, 0.5])
        right = np.array([1.0, 0.0, 1.0, 0.0, 1.0, 1.5, -1.0, 0.5])
        source = janhunen_interface_source(left, right, 1.0, 2.0, 1.4, Direction.X)
        expected = np.zeros(8)
        expected[5] = -0.125
        expected[6] = -1.0 / 3.0
        np.testing.assert_allclose(source.values, expected, atol=1e-15)
        assert bool(source.degenerate[1])
        assert source.degenerate_count == 1
        assert not bool(source.unbalanced)

    def test_sign_change_keeps_entropy_identity(self):
        left = np.array([[1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 2.0, 0.5]])
        right = np.array([[1.0, 0.0, 1.0, 0.0, 1.0, 1.5, -1.0, 0.5]])
        residual, scale = entropy_residual(
            ec_flux, janhunen_interface_source, left, right,
            np.array([1.0]), np.array([2.0]), 1.4, Direction.X,
        )
        assert abs(residual[0]) <= 1e-12 * scale[0]

    def test_near_cancelling_denominator_stays_bounded(self):
        left = np.array([1.0, 0.3, 1.0, -0.2, 1.0, 1.0, 1.0, 0.5])
        right = left.copy()
        right[5] = 1.2
        right[6] = -(1.0 - 1e-9)
        source = janhunen_interface_source(left, right, 1.0, 1.0, 1.4, Direction.X)
        assert np.all(np.abs(source.values) <= 1.0)
        assert source.s7 == pytest.approx(-0.2 * 1.0, rel=1e-12)
        assert source.degenerate_count == 1

    def test_all_rows_changing_sign_is_unbalanced(self):
        left = np.array([1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5])
        right = np.array([2.0, 1.0, 1.0, 1.0, 1.0, -0.5, -1.0, -0.5])
        source = janhunen_interface_source(left, right, 1.0, 1.0, 5.0 / 3.0, Direction.X)
        np.testing.assert_allclose(source.values[5:], [1.5, 1.5, 1.5], rtol=1e-14)
        assert source.degenerate_count == 3
        assert source.unbalanced_count == 1

    @pytest.mark.parametrize(
        "source_fn", [janhunen_interface_source, janhunen_interface_source_beta], ids=["z", "beta"]
    )
    def test_mixed_sign_pairs_stay_finite_and_balanced(self, rng, source_fn):
        n = 10000
        left = random_prim(rng, n)
        right = random_prim(rng, n)
        dx_left = rng.choice([0.5, 1.0, 2.0], n)
        dx_right = rng.choice([0.5, 1.0, 2.0], n)
        flux_fn = ec_flux if source_fn is janhunen_interface_source else ekec_flux
        source = source_fn(left, right, dx_left, dx_right, 5.0 / 3.0, Direction.Y)
        assert np.all(np.isfinite(source.values))
        assert source.degenerate_count > 0
        residual, scale = entropy_residual(
            flux_fn, source_fn, left, right, dx_left, dx_right, 5.0 / 3.0, Direction.Y
        )
        balanced = ~source.unbalanced
        assert np.any(balanced)
        assert np.all(np.abs(residual[balanced]) <= 1e-11 * scale[balanced])

    def test_zero_numerator_is_not_flagged(self):
        left = np.array([1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0])
        right = np.array([1.0, 0.0, 0.0, 0.0, 1.0, 1.5, -1.0, 0.0])
        source = janhunen_interface_source(left, right, 1.0, 1.0, 1.4, Direction.X)
        assert np.all(source.values == 0.0)
        assert source.degenerate_count == 0
