"""
Conservation ledgers, error norms, convergence rates and field diagnostics.

Domain sums run sequentially in cell order (C order for 2D fields) so a fixed
field always yields bit-identical totals.
"""
import logging
import math
from typing import Callable, Sequence, Union

import numpy as np

from mhd_esfv.core.exceptions import GridMismatch, LengthMismatch, NonPositiveInput
from mhd_esfv.physics.state import cons_to_prim, entropy_quantities, entropy_vars
from mhd_esfv.schemas.diagnostics import ConservationLedger, EOCResult, LedgerDelta
from mhd_esfv.solver.grid import Grid1D, Grid2D

logger = logging.getLogger(__name__)

Grid = Union[Grid1D, Grid2D]


def sequential_sum(values: np.ndarray) -> float:
    """Left-to-right sum of all entries."""
    flat = np.ravel(values)
    if flat.size == 0:
        return 0.0
    return float(np.cumsum(flat)[-1])


def integrate_conserved(
    field: np.ndarray, grid: Grid, gamma: float, time: float = 0.0
) -> ConservationLedger:
    """
    Midpoint-rule domain integrals of the eight conserved variables and of U.

    Args:
        field: Conserved field, (N, 8) or (Nx, Ny, 8)
        grid: Grid the field lives on
        gamma: Adiabatic index
        time: Simulation time stamped on the ledger
    """
    measures = grid.measures
    totals = tuple(sequential_sum(measures * field[..., k]) for k in range(8))
    entropy = sequential_sum(measures * entropy_quantities(field, gamma).U)
    return ConservationLedger(time=time, totals=totals, total_entropy=entropy, grid=grid.signature())


def delta_e(initial: ConservationLedger, final: ConservationLedger) -> LedgerDelta:
    """
    Absolute change of every ledger entry.

    Raises:
        GridMismatch: Ledgers were taken on different grids
    """
    if tuple(initial.grid) != tuple(final.grid):
        raise GridMismatch(f"ledger grids differ: {initial.grid} vs {final.grid}")
    return LedgerDelta(
        totals=tuple(abs(a - b) for a, b in zip(initial.totals, final.totals)),
        entropy=abs(initial.total_entropy - final.total_entropy),
    )


def l2_error(
    field: np.ndarray,
    exact_fn: Callable[[np.ndarray, float], np.ndarray],
    grid: Grid1D,
    t: float,
) -> np.ndarray:
    """Discrete L2 norm sqrt(sum dx_i (q_i - q_exact(x_i, t))^2) per conserved variable."""
    diff = field - exact_fn(grid.centers, t)
    return np.array(
        [math.sqrt(sequential_sum(grid.widths * diff[:, k] ** 2)) for k in range(field.shape[-1])]
    )


def eoc(errors: Sequence[float], cell_counts: Sequence[int]) -> EOCResult:
    """
    Experimental orders of convergence of successive refinements.

    Raises:
        LengthMismatch: Sequences differ in length or hold fewer than two entries
        NonPositiveInput: An error is not positive
    """
    if len(errors) != len(cell_counts) or len(errors) < 2:
        raise LengthMismatch(
            f"need two or more matching entries, got {len(errors)} errors "
            f"and {len(cell_counts)} cell counts"
        )
    if any(not e > 0.0 for e in errors):
        raise NonPositiveInput("convergence rates need positive errors")
    rates = [
        math.log(errors[k] / errors[k + 1]) / math.log(cell_counts[k + 1] / cell_counts[k])
        for k in range(len(errors) - 1)
    ]
    logger.debug(f"convergence rates {[round(r, 3) for r in rates]} over cells {list(cell_counts)}")
    return EOCResult(cells=list(cell_counts), errors=list(errors), rates=rates)


def discrete_div_b(field: np.ndarray, grid: Grid2D) -> np.ndarray:
    """Forward-difference divergence of (B1, B2) with periodic wrap, shape (Nx, Ny)."""
    b1 = field[..., 5]
    b2 = field[..., 6]
    return (np.roll(b1, -1, axis=0) - b1) / grid.dx + (np.roll(b2, -1, axis=1) - b2) / grid.dy


def mach_number(field: np.ndarray, gamma: float) -> np.ndarray:
    """|u|/a with a^2 = gamma p / rho."""
    prim = cons_to_prim(field, gamma)
    speed = np.sqrt(np.sum(prim[..., 1:4] ** 2, axis=-1))
    return speed / np.sqrt(gamma * prim[..., 4] / prim[..., 0])


def magnetic_pressure(field: np.ndarray) -> np.ndarray:
    return 0.5 * np.sum(field[..., 5:8] ** 2, axis=-1)


def total_variation(profile: np.ndarray) -> float:
    """Sum of absolute differences between neighbouring cells."""
    return sequential_sum(np.abs(np.diff(profile)))


def snapshot_distance(
    centers: np.ndarray,
    widths: np.ndarray,
    values: np.ndarray,
    ref_centers: np.ndarray,
    ref_values: np.ndarray,
) -> float:
    """Width-weighted L2 distance to a reference profile interpolated onto ``centers``."""
    reference = np.interp(centers, ref_centers, ref_values)
    return math.sqrt(sequential_sum(widths * (values - reference) ** 2))


def entropy_rate(field: np.ndarray, rhs: np.ndarray, grid: Grid, gamma: float) -> float:
    """Semi-discrete entropy change sum_i |V_i| v_i . (dq/dt)_i."""
    v = entropy_vars(field, gamma)
    contraction = v[..., 0] * rhs[..., 0]
    for k in range(1, 8):
        contraction = contraction + v[..., k] * rhs[..., k]
    return sequential_sum(grid.measures * contraction)
