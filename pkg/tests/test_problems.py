"""
Tests for the problem registry, initial conditions and the manufactured solution.
"""
import math

import numpy as np
import pytest

from mhd_esfv.core.exceptions import DomainMismatch
from mhd_esfv.models.state import BoundaryKind, PrimState
from mhd_esfv.physics.state import cons_to_prim, physical_flux
from mhd_esfv.services.problems import (
    PROBLEMS,
    ROTOR_U0,
    ProblemId,
    get_problem,
    init_riemann,
    init_rotor,
    init_shock_tube_25d,
    initial_field,
    manufactured_cons,
    manufactured_source,
    manufactured_state,
)
from mhd_esfv.solver.grid import make_uniform_grid, make_uniform_grid_2d


def _grid_for(spec, n=16):
    if spec.dimension == 2:
        return make_uniform_grid_2d(n, n, spec.xmin, spec.xmax, spec.ymin, spec.ymax, spec.bc)
    return make_uniform_grid(n, spec.xmin, spec.xmax, spec.bc)


class TestRegistry:
    def test_lookup_by_string(self):
        assert get_problem("brio_wu") is PROBLEMS[ProblemId.BRIO_WU]
        with pytest.raises(ValueError):
            get_problem("orszag_tang")

    @pytest.mark.parametrize(
        "problem,gamma,xmin,xmax,t_final",
        [
            ("manufactured", 5.0 / 3.0, -1.0, 1.0, 2.0),
            ("brio_wu", 2.0, 0.0, 1.0, 0.12),
            ("ryu_jones", 5.0 / 3.0, -1.0, 1.0, 0.4),
            ("torrilhon", 5.0 / 3.0, -1.0, 1.5, 0.4),
            ("shocktube25d", 5.0 / 3.0, 0.0, 1.0, 0.2),
            ("rotor1", 1.4, 0.0, 1.0, 0.15),
        ],
    )
    def test_parameters(self, problem, gamma, xmin, xmax, t_final):
        spec = get_problem(problem)
        assert spec.gamma == gamma
        assert (spec.xmin, spec.xmax) == (xmin, xmax)
        assert spec.t_final == t_final

    def test_riemann_flags(self):
        assert {p for p in ProblemId if p.is_riemann} == {
            ProblemId.BRIO_WU,
            ProblemId.RYU_JONES,
            ProblemId.TORRILHON,
        }
        assert get_problem("brio_wu").bc is BoundaryKind.OUTFLOW
        assert get_problem("manufactured").bc is BoundaryKind.PERIODIC

    @pytest.mark.parametrize("problem", list(ProblemId))
    def test_initial_fields_are_valid(self, problem):
        spec = get_problem(problem)
        field = initial_field(spec, _grid_for(spec))
        prim = cons_to_prim(field, spec.gamma)
        assert np.all(prim[..., 0] > 0.0)
        assert np.all(prim[..., 4] > 0.0)


class TestManufacturedSolution:
    def test_state_at_quarter(self):
        state = manufactured_state(0.25, 0.0)
        assert isinstance(state, PrimState)
        assert state.rho == pytest.approx(3.0)
        assert state.p == pytest.approx(9.0)
        assert (state.u, state.v, state.w) == (1.0, 1.0, 1.0)
        assert (state.B1, state.B2, state.B3) == pytest.approx((1.0, 3.0, 3.0))

    def test_array_shape(self):
        assert manufactured_state(np.linspace(-1, 1, 5), 0.3).shape == (5, 8)

    def test_source_example(self):
        source = manufactured_source(0.0, 0.0)
        assert source[1] == pytest.approx(16.0 * math.pi)
        assert source[0] == 0.0
        assert np.all(source[5:] == 0.0)

    def test_travels_with_unit_speed(self):
        x = np.linspace(-1.0, 1.0, 11)
        np.testing.assert_allclose(
            manufactured_state(x, 0.3), manufactured_state(x - 0.3, 0.0), atol=1e-14
        )

    @pytest.mark.parametrize("gamma", [5.0 / 3.0, 2.0])
    def test_source_balances_the_equations(self, gamma):
        x = np.linspace(-1.0, 1.0, 41)
        t = 0.37
        h = 1e-3

        def flux(xx, tt):
            return physical_flux(manufactured_state(xx, tt), gamma)

        dq_dt = (
            -manufactured_cons(x, t + 2 * h, gamma)
            + 8.0 * manufactured_cons(x, t + h, gamma)
            - 8.0 * manufactured_cons(x, t - h, gamma)
            + manufactured_cons(x, t - 2 * h, gamma)
        ) / (12.0 * h)
        df_dx = (
            -flux(x + 2 * h, t) + 8.0 * flux(x + h, t) - 8.0 * flux(x - h, t) + flux(x - 2 * h, t)
        ) / (12.0 * h)
        residual = dq_dt + df_dx - manufactured_source(x, t)
        assert np.max(np.abs(residual)) <= 1e-5


class TestRiemannData:
    def test_brio_wu_states(self):
        spec = get_problem("brio_wu")
        grid = make_uniform_grid(10, 0.0, 1.0, spec.bc)
        prim = cons_to_prim(init_riemann(spec, grid), spec.gamma)
        np.testing.assert_allclose(prim[:5], np.tile(spec.left, (5, 1)), rtol=1e-14)
        np.testing.assert_allclose(prim[5:], np.tile(spec.right, (5, 1)), rtol=1e-14)

    def test_center_on_split_goes_right(self):
        spec = get_problem("brio_wu")
        grid = make_uniform_grid(5, 0.0, 1.0, spec.bc)
        assert grid.centers[2] == 0.5
        prim = cons_to_prim(init_riemann(spec, grid), spec.gamma)
        assert prim[1, 0] == pytest.approx(1.0)
        assert prim[2, 0] == pytest.approx(0.125)

    def test_torrilhon_right_field(self):
        spec = get_problem("torrilhon")
        assert spec.right[6] == pytest.approx(math.cos(1.5))
        assert spec.right[7] == pytest.approx(math.sin(1.5))

    def test_wrong_domain_raises(self):
        spec = get_problem("torrilhon")
        with pytest.raises(DomainMismatch):
            init_riemann(spec, make_uniform_grid(10, -1.0, 1.0))

    def test_non_riemann_problem_raises(self):
        with pytest.raises(DomainMismatch):
            init_riemann(get_problem("manufactured"), make_uniform_grid(10, -1.0, 1.0))


class TestTwoDimensionalData:
    def test_shock_tube_split(self):
        spec = get_problem("shocktube25d")
        grid = make_uniform_grid_2d(20, 20)
        prim = cons_to_prim(init_shock_tube_25d(grid), spec.gamma)
        x, y = grid.mesh()
        left = x + y < 0.5
        np.testing.assert_allclose(prim[left], np.tile(spec.left, (left.sum(), 1)), rtol=1e-13)
        np.testing.assert_allclose(prim[~left], np.tile(spec.right, ((~left).sum(), 1)), rtol=1e-13)

    def test_rotor_profile(self):
        grid = make_uniform_grid_2d(101, 101)
        prim = cons_to_prim(init_rotor(grid), 1.4)
        assert prim[50, 50, 0] == pytest.approx(10.0)
        assert np.all(prim[..., 0] >= 1.0 - 1e-14)
        assert np.all(prim[..., 0] <= 10.0 + 1e-12)
        speed = np.hypot(prim[..., 1], prim[..., 2])
        assert np.all(speed <= ROTOR_U0 + 1e-12)
        assert prim[0, 0, 0] == pytest.approx(1.0)
        assert speed[0, 0] == 0.0
        np.testing.assert_allclose(prim[..., 5], 5.0 / math.sqrt(4.0 * math.pi))
        np.testing.assert_allclose(prim[..., 4], 1.0)

    def test_rotor_needs_unit_square(self):
        with pytest.raises(DomainMismatch):
            init_rotor(make_uniform_grid_2d(8, 8, xmax=2.0))
