"""
Test problem definitions, initial conditions and the manufactured solution.
"""
import logging
import math
from enum import Enum
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from mhd_esfv.core.exceptions import DomainMismatch
from mhd_esfv.models.state import BoundaryKind, PrimState
from mhd_esfv.physics.state import prim_to_cons
from mhd_esfv.solver.grid import Grid1D, Grid2D

logger = logging.getLogger(__name__)

_FOUR_PI_ROOT = math.sqrt(4.0 * math.pi)


class ProblemId(str, Enum):
    MANUFACTURED = "manufactured"
    BRIO_WU = "brio_wu"
    RYU_JONES = "ryu_jones"
    TORRILHON = "torrilhon"
    SHOCK_TUBE_25D = "shocktube25d"
    ROTOR1 = "rotor1"

    @property
    def is_riemann(self) -> bool:
        return self in (ProblemId.BRIO_WU, ProblemId.RYU_JONES, ProblemId.TORRILHON)


class ProblemSpec(BaseModel):
    """Physical parameters and domain of one test problem."""

    model_config = ConfigDict(frozen=True)

    id: ProblemId
    gamma: float = Field(..., gt=1.0)
    xmin: float
    xmax: float
    ymin: Optional[float] = None
    ymax: Optional[float] = None
    t_final: float = Field(..., gt=0.0)
    bc: BoundaryKind
    split: Optional[float] = Field(None, description="Discontinuity location of 1D Riemann data")
    left: Optional[tuple[float, ...]] = Field(None, description="Primitive state left of the split")
    right: Optional[tuple[float, ...]] = Field(None, description="Primitive state right of the split")

    @property
    def dimension(self) -> int:
        return 1 if self.ymin is None else 2


PROBLEMS: dict[ProblemId, ProblemSpec] = {
    ProblemId.MANUFACTURED: ProblemSpec(
        id=ProblemId.MANUFACTURED,
        gamma=5.0 / 3.0,
        xmin=-1.0,
        xmax=1.0,
        t_final=2.0,
        bc=BoundaryKind.PERIODIC,
    ),
    ProblemId.BRIO_WU: ProblemSpec(
        id=ProblemId.BRIO_WU,
        gamma=2.0,
        xmin=0.0,
        xmax=1.0,
        t_final=0.12,
        bc=BoundaryKind.OUTFLOW,
        split=0.5,
        left=(1.0, 0.0, 0.0, 0.0, 1.0, 0.75, 1.0, 0.0),
        right=(0.125, 0.0, 0.0, 0.0, 0.1, 0.75, -1.0, 0.0),
    ),
    ProblemId.RYU_JONES: ProblemSpec(
        id=ProblemId.RYU_JONES,
        gamma=5.0 / 3.0,
        xmin=-1.0,
        xmax=1.0,
        t_final=0.4,
        bc=BoundaryKind.OUTFLOW,
        split=0.0,
        left=(1.0, 0.0, 0.0, 0.0, 1.0, 0.7, 0.0, 0.0),
        right=(0.3, 0.0, 0.0, 1.0, 0.2, 0.7, 1.0, 0.0),
    ),
    ProblemId.TORRILHON: ProblemSpec(
        id=ProblemId.TORRILHON,
        gamma=5.0 / 3.0,
        xmin=-1.0,
        xmax=1.5,
        t_final=0.4,
        bc=BoundaryKind.OUTFLOW,
        split=0.0,
        left=(3.0, 0.0, 0.0, 0.0, 3.0, 1.5, 1.0, 0.0),
        right=(1.0, 0.0, 0.0, 0.0, 1.0, 1.5, math.cos(1.5), math.sin(1.5)),
    ),
    ProblemId.SHOCK_TUBE_25D: ProblemSpec(
        id=ProblemId.SHOCK_TUBE_25D,
        gamma=5.0 / 3.0,
        xmin=0.0,
        xmax=1.0,
        ymin=0.0,
        ymax=1.0,
        t_final=0.2,
        bc=BoundaryKind.PERIODIC,
        split=0.5,
        left=(
            1.08, 1.2, 0.01, 0.5, 0.95,
            2.0 / _FOUR_PI_ROOT, 2.0 / _FOUR_PI_ROOT, 3.6 / _FOUR_PI_ROOT,
        ),
        right=(
            1.0, 0.0, 0.0, 0.0, 1.0,
            2.0 / _FOUR_PI_ROOT, 4.0 / _FOUR_PI_ROOT, 2.0 / _FOUR_PI_ROOT,
        ),
    ),
    ProblemId.ROTOR1: ProblemSpec(
        id=ProblemId.ROTOR1,
        gamma=1.4,
        xmin=0.0,
        xmax=1.0,
        ymin=0.0,
        ymax=1.0,
        t_final=0.15,
        bc=BoundaryKind.PERIODIC,
    ),
}

ROTOR_R0 = 0.1
ROTOR_R1 = 0.115
ROTOR_U0 = 2.0


def get_problem(problem: Union[str, ProblemId]) -> ProblemSpec:
    """Look up a problem by id or id string."""
    return PROBLEMS[ProblemId(problem)]


def _matches(a: float, b: float, extent: float) -> bool:
    return abs(a - b) <= 1e-12 * max(1.0, abs(extent))


def _check_domain_1d(spec: ProblemSpec, grid: Grid1D) -> None:
    extent = spec.xmax - spec.xmin
    if not (_matches(grid.xmin, spec.xmin, extent) and _matches(grid.xmax, spec.xmax, extent)):
        raise DomainMismatch(
            f"grid [{grid.xmin}, {grid.xmax}] does not cover the {spec.id.value} "
            f"domain [{spec.xmin}, {spec.xmax}]"
        )


def _check_domain_2d(spec: ProblemSpec, grid: Grid2D) -> None:
    if not isinstance(grid, Grid2D):
        raise DomainMismatch(f"{spec.id.value} needs a 2D grid")
    box = (grid.xmin, grid.xmax, grid.ymin, grid.ymax)
    target = (spec.xmin, spec.xmax, spec.ymin, spec.ymax)
    if not all(_matches(a, b, 1.0) for a, b in zip(box, target)):
        raise DomainMismatch(f"grid box {box} differs from the {spec.id.value} box {target}")


def manufactured_density(x: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Density 2 + sin(2 pi (x - t)) and its x-derivative."""
    phase = 2.0 * np.pi * (np.asarray(x, dtype=np.float64) - t)
    return 2.0 + np.sin(phase), 2.0 * np.pi * np.cos(phase)


def manufactured_state(x: Union[float, np.ndarray], t: float) -> Union[PrimState, np.ndarray]:
    """
    Exact smooth periodic solution in primitive variables.

    A scalar ``x`` gives a PrimState, an array gives shape x.shape + (8,).
    """
    rho, _ = manufactured_density(x, t)
    prim = np.empty(np.shape(rho) + (8,))
    prim[..., 0] = rho
    prim[..., 1:4] = 1.0
    prim[..., 4] = rho * rho
    prim[..., 5] = 1.0
    prim[..., 6] = rho
    prim[..., 7] = rho
    if np.ndim(x) == 0:
        return PrimState(*map(float, prim))
    return prim


def manufactured_source(x: Union[float, np.ndarray], t: float) -> np.ndarray:
    """Analytic source that makes the manufactured solution exact, for any gamma."""
    rho, rho_x = manufactured_density(x, t)
    source = np.zeros(np.shape(rho) + (8,))
    source[..., 1] = 4.0 * rho * rho_x
    source[..., 2] = -rho_x
    source[..., 3] = -rho_x
    source[..., 4] = 4.0 * rho * rho_x - 2.0 * rho_x
    return source


def manufactured_cons(x: np.ndarray, t: float, gamma: float) -> np.ndarray:
    """Conserved variables of the manufactured solution at points ``x``."""
    return prim_to_cons(np.asarray(manufactured_state(np.atleast_1d(x), t)), gamma)


def init_manufactured(spec: ProblemSpec, grid: Grid1D) -> np.ndarray:
    """Manufactured solution sampled at cell centers at t = 0."""
    _check_domain_1d(spec, grid)
    return manufactured_cons(grid.centers, 0.0, spec.gamma)


def init_riemann(spec: ProblemSpec, grid: Grid1D) -> np.ndarray:
    """
    Piecewise constant Riemann data on a 1D grid.

    Each cell takes the state on the side of its center; a center exactly on
    the split goes right.

    Raises:
        DomainMismatch: Grid does not span the problem domain or the problem is not 1D Riemann data
    """
    if spec.left is None or spec.split is None or spec.dimension != 1:
        raise DomainMismatch(f"{spec.id.value} is not a 1D Riemann problem")
    _check_domain_1d(spec, grid)
    left = np.asarray(spec.left)
    right = np.asarray(spec.right)
    prim = np.where((grid.centers < spec.split)[:, None], left, right)
    logger.debug(
        f"{spec.id.value}: {int(np.sum(grid.centers < spec.split))} of {grid.n} cells take the left state"
    )
    return prim_to_cons(prim, spec.gamma)


def init_shock_tube_25d(grid: Grid2D, spec: Optional[ProblemSpec] = None) -> np.ndarray:
    """Rotated shock tube with the discontinuity on x + y = 1/2."""
    spec = spec or PROBLEMS[ProblemId.SHOCK_TUBE_25D]
    _check_domain_2d(spec, grid)
    x, y = grid.mesh()
    prim = np.where(
        (x + y < spec.split)[..., None], np.asarray(spec.left), np.asarray(spec.right)
    )
    return prim_to_cons(prim, spec.gamma)


def init_rotor(grid: Grid2D, spec: Optional[ProblemSpec] = None) -> np.ndarray:
    """
    First rotor problem: a dense spinning disc in a light medium.

    The taper region r0 < r < r1 blends density and swirl linearly in r so the
    velocity is continuous at both radii.
    """
    spec = spec or PROBLEMS[ProblemId.ROTOR1]
    _check_domain_2d(spec, grid)
    x, y = grid.mesh()
    dx, dy = x - 0.5, y - 0.5
    r = np.sqrt(dx * dx + dy * dy)
    taper = (ROTOR_R1 - r) / (ROTOR_R1 - ROTOR_R0)
    inner = r < ROTOR_R0
    outer = r > ROTOR_R1

    rho = np.where(inner, 10.0, np.where(outer, 1.0, 1.0 + 9.0 * taper))
    with np.errstate(divide="ignore", invalid="ignore"):
        swirl = np.where(inner, ROTOR_U0 / ROTOR_R0, np.where(outer, 0.0, taper * ROTOR_U0 / r))

    prim = np.zeros(x.shape + (8,))
    prim[..., 0] = rho
    prim[..., 1] = -swirl * dy
    prim[..., 2] = swirl * dx
    prim[..., 4] = 1.0
    prim[..., 5] = 5.0 / _FOUR_PI_ROOT
    return prim_to_cons(prim, spec.gamma)


def initial_field(spec: ProblemSpec, grid: Union[Grid1D, Grid2D]) -> np.ndarray:
    """Initial conserved field of any registered problem."""
    if spec.id is ProblemId.MANUFACTURED:
        return init_manufactured(spec, grid)
    if spec.id.is_riemann:
        return init_riemann(spec, grid)
    if spec.id is ProblemId.SHOCK_TUBE_25D:
        return init_shock_tube_25d(grid, spec)
    return init_rotor(grid, spec)
