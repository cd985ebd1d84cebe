"""
CSV emission and reading of snapshots, ledgers and study tables.

Numbers are written with 17 significant digits so that every value survives a
round trip through text exactly.
"""
import logging
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from mhd_esfv.models.state import PRIM_NAMES
from mhd_esfv.physics.state import cons_to_prim
from mhd_esfv.schemas.diagnostics import LEDGER_COLUMNS, ConservationLedger
from mhd_esfv.solver.grid import Grid1D, Grid2D

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def write_table(path: Path, header: Sequence[str], rows: Union[np.ndarray, Sequence[Sequence[float]]]) -> Path:
    """Write a numeric table with a one-line header."""
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.asarray(rows, dtype=np.float64).reshape(-1, len(header))
    np.savetxt(path, data, fmt=FLOAT_FORMAT, delimiter=",", header=",".join(header), comments="")
    logger.debug(f"wrote {path} ({data.shape[0]} rows)")
    return path


def read_table(path: Path) -> tuple[list[str], np.ndarray]:
    """Header names and the (rows, columns) data of a CSV written by ``write_table``."""
    with open(path, "r", encoding="utf-8") as handle:
        header = handle.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data


def write_snapshot(
    path: Path, field: np.ndarray, grid: Union[Grid1D, Grid2D], gamma: float
) -> Path:
    """Primitive variables per cell, preceded by the cell-center coordinates."""
    prim = cons_to_prim(field, gamma).reshape(-1, 8)
    if isinstance(grid, Grid1D):
        coords = [grid.centers]
        names = ["x"]
    else:
        x, y = grid.mesh()
        coords = [x.ravel(), y.ravel()]
        names = ["x", "y"]
    return write_table(path, names + list(PRIM_NAMES), np.column_stack(coords + [prim]))


def write_ledger(path: Path, ledgers: Sequence[ConservationLedger]) -> Path:
    return write_table(path, ("time",) + LEDGER_COLUMNS, [ledger.row() for ledger in ledgers])
