"""
Structured 1D and 2D grids and ghost-cell handling.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from mhd_esfv.core.exceptions import InvalidExtent
from mhd_esfv.models.state import BoundaryKind

_PAD_MODES = {BoundaryKind.PERIODIC: "wrap", BoundaryKind.OUTFLOW: "edge"}


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Cell geometry of a 1D mesh plus its boundary treatment."""

    centers: np.ndarray
    widths: np.ndarray
    faces: np.ndarray = field(repr=False)
    xmin: float = 0.0
    xmax: float = 1.0
    bc: BoundaryKind = BoundaryKind.PERIODIC
    kind: str = "uniform"

    @property
    def n(self) -> int:
        return int(self.widths.size)

    @property
    def extent(self) -> float:
        return self.xmax - self.xmin

    @property
    def measures(self) -> np.ndarray:
        """Cell measures used by domain integrals."""
        return self.widths

    def signature(self) -> tuple:
        """Hashable identity used to check that two ledgers share a grid."""
        return ("1d", self.n, self.xmin, self.xmax, self.kind, float(self.widths[0]))


@dataclass(frozen=True, eq=False)
class Grid2D:
    """Uniform Cartesian mesh on a rectangle."""

    nx: int
    ny: int
    xmin: float = 0.0
    xmax: float = 1.0
    ymin: float = 0.0
    ymax: float = 1.0
    bc: BoundaryKind = BoundaryKind.PERIODIC

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / self.nx

    @property
    def dy(self) -> float:
        return (self.ymax - self.ymin) / self.ny

    @property
    def x_centers(self) -> np.ndarray:
        return self.xmin + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def y_centers(self) -> np.ndarray:
        return self.ymin + (np.arange(self.ny) + 0.5) * self.dy

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-center coordinates with shape (nx, ny) each."""
        return np.meshgrid(self.x_centers, self.y_centers, indexing="ij")

    @property
    def measures(self) -> np.ndarray:
        return np.full((self.nx, self.ny), self.dx * self.dy)

    def signature(self) -> tuple:
        return ("2d", self.nx, self.ny, self.xmin, self.xmax, self.ymin, self.ymax)


def _check_extent(n: int, xmin: float, xmax: float) -> None:
    if n < 2:
        raise InvalidExtent(f"need at least 2 cells, got {n}")
    if not xmax > xmin:
        raise InvalidExtent(f"empty interval [{xmin}, {xmax}]")


def _from_widths(widths: np.ndarray, faces: np.ndarray, bc: BoundaryKind, kind: str) -> Grid1D:
    return Grid1D(
        centers=0.5 * (faces[:-1] + faces[1:]),
        widths=widths,
        xmin=float(faces[0]),
        xmax=float(faces[-1]),
        bc=bc,
        kind=kind,
        faces=faces,
    )


def make_uniform_grid(
    n: int, xmin: float, xmax: float, bc: BoundaryKind = BoundaryKind.PERIODIC
) -> Grid1D:
    """Grid of ``n`` equal cells on [xmin, xmax]."""
    _check_extent(n, xmin, xmax)
    width = (xmax - xmin) / n
    centers = xmin + (np.arange(n) + 0.5) * width
    faces = xmin + np.arange(n + 1) * width
    faces[-1] = xmax
    return Grid1D(
        centers=centers,
        widths=np.full(n, width),
        xmin=float(xmin),
        xmax=float(xmax),
        bc=bc,
        kind="uniform",
        faces=faces,
    )


def make_stretched_grid(
    n: int,
    xmin: float,
    xmax: float,
    ratio: float,
    bc: BoundaryKind = BoundaryKind.PERIODIC,
) -> Grid1D:
    """
    Grid whose widths grow geometrically from left to right.

    Args:
        n: Number of cells
        xmin: Left end
        xmax: Right end
        ratio: Largest over smallest width, at least 1
        bc: Boundary treatment

    Returns:
        Grid1D with widths[n-1]/widths[0] == ratio

    Raises:
        InvalidExtent: On too few cells, an empty interval or ratio < 1
    """
    _check_extent(n, xmin, xmax)
    if not ratio >= 1.0:
        raise InvalidExtent(f"stretch ratio must be >= 1, got {ratio}")
    if ratio == 1.0:
        grid = make_uniform_grid(n, xmin, xmax, bc)
        return Grid1D(grid.centers, grid.widths, grid.faces, grid.xmin, grid.xmax, bc, "stretched")

    growth = ratio ** (np.arange(n) / (n - 1))
    widths = growth * ((xmax - xmin) / np.sum(growth))
    faces = np.empty(n + 1)
    faces[0] = xmin
    faces[1:] = xmin + np.cumsum(widths)
    faces[-1] = xmax
    return _from_widths(widths, faces, bc, "stretched")


def make_irregular_grid(
    n: int,
    xmin: float,
    xmax: float,
    ratio: float,
    bc: BoundaryKind = BoundaryKind.PERIODIC,
) -> Grid1D:
    """
    Grid whose widths alternate between a small and a ``ratio`` times larger cell.

    Neighbouring widths keep the same ratio under refinement, so the mesh never
    becomes locally smooth.
    """
    _check_extent(n, xmin, xmax)
    if not ratio >= 1.0:
        raise InvalidExtent(f"width ratio must be >= 1, got {ratio}")
    pattern = np.where(np.arange(n) % 2 == 0, 1.0, ratio)
    widths = pattern * ((xmax - xmin) / np.sum(pattern))
    faces = np.empty(n + 1)
    faces[0] = xmin
    faces[1:] = xmin + np.cumsum(widths)
    faces[-1] = xmax
    return _from_widths(widths, faces, bc, "irregular")


def make_uniform_grid_2d(
    nx: int,
    ny: int,
    xmin: float = 0.0,
    xmax: float = 1.0,
    ymin: float = 0.0,
    ymax: float = 1.0,
    bc: BoundaryKind = BoundaryKind.PERIODIC,
) -> Grid2D:
    """Uniform nx-by-ny grid on a rectangle, the unit square by default."""
    _check_extent(nx, xmin, xmax)
    _check_extent(ny, ymin, ymax)
    return Grid2D(nx, ny, float(xmin), float(xmax), float(ymin), float(ymax), bc)


def pad_field(field_: np.ndarray, bc: BoundaryKind, axis: int = 0) -> np.ndarray:
    """Copy of ``field_`` with one ghost layer on each side of ``axis``."""
    pad = [(0, 0)] * field_.ndim
    pad[axis] = (1, 1)
    return np.pad(field_, pad, mode=_PAD_MODES[BoundaryKind(bc)])


def ghost_states(
    field_: np.ndarray, grid: Grid1D, bc: Optional[BoundaryKind] = None
) -> tuple[np.ndarray, np.ndarray]:
    """
    Left and right ghost states of a 1D field.

    Periodic ghosts wrap around; outflow ghosts copy the nearest interior cell.
    """
    if field_.shape[0] == 0:
        raise ValueError("field is empty")
    kind = BoundaryKind(bc if bc is not None else grid.bc)
    if kind is BoundaryKind.PERIODIC:
        return field_[-1].copy(), field_[0].copy()
    return field_[0].copy(), field_[-1].copy()


def ghost_widths(grid: Grid1D, bc: Optional[BoundaryKind] = None) -> np.ndarray:
    """Cell widths extended by the widths assigned to the two ghost cells."""
    kind = BoundaryKind(bc if bc is not None else grid.bc)
    return pad_field(grid.widths, kind)
