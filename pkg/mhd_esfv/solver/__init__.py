# Grids, semi-discrete operators and time integrators
from .grid import (
    Grid1D,
    Grid2D,
    make_irregular_grid,
    make_stretched_grid,
    make_uniform_grid,
    make_uniform_grid_2d,
)
from .integrate import (
    SemiDiscreteOperator,
    advance,
    lserk45_step,
    rk2_step,
    semidiscrete_rhs_1d,
    semidiscrete_rhs_2d,
    stable_dt,
)

__all__ = [
    "Grid1D",
    "Grid2D",
    "SemiDiscreteOperator",
    "advance",
    "lserk45_step",
    "make_irregular_grid",
    "make_stretched_grid",
    "make_uniform_grid",
    "make_uniform_grid_2d",
    "rk2_step",
    "semidiscrete_rhs_1d",
    "semidiscrete_rhs_2d",
    "stable_dt",
]
