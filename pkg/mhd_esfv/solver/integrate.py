"""
Semi-discrete finite volume operators and explicit time integrators.

The cell update is
    dq_i/dt = -(f_{i+1/2} - f_{i-1/2})/dx_i + (s_{i+1/2} + s_{i-1/2})/2 (+ analytic source)
applied direction by direction in 2D. Interface fluxes and sources are
computed first for every interface, optionally in parallel chunks, and only
then gathered into cells, so results do not depend on the thread count.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, Union

import numpy as np

from mhd_esfv.core.config import settings
from mhd_esfv.core.exceptions import InvalidStateAfterStage, SolverBreakdown
from mhd_esfv.models.state import BoundaryKind, Direction, FluxKind, RKScheme
from mhd_esfv.physics.dissipation import es_llf_flux, es_roe_flux, wave_speeds
from mhd_esfv.physics.flux import (
    ec_flux,
    ekec_flux,
    janhunen_interface_source,
    janhunen_interface_source_beta,
)
from mhd_esfv.physics.state import cons_to_prim
from mhd_esfv.solver.grid import Grid1D, Grid2D, ghost_widths, pad_field

logger = logging.getLogger(__name__)

Grid = Union[Grid1D, Grid2D]
RHSFunction = Callable[[np.ndarray, float], np.ndarray]
SourceFunction = Callable[[np.ndarray, float], np.ndarray]

FLUX_FUNCTIONS = {
    FluxKind.EC: ec_flux,
    FluxKind.EKEC: ekec_flux,
    FluxKind.ES_ROE: es_roe_flux,
    FluxKind.ES_LLF: es_llf_flux,
}

# Low-storage five-stage fourth-order coefficients (Carpenter and Kennedy).
_LSERK_A = (
    0.0,
    -567301805773.0 / 1357537059087.0,
    -2404267990393.0 / 2016746695238.0,
    -3550918686646.0 / 2091501179385.0,
    -1275806237668.0 / 842570457699.0,
)
_LSERK_B = (
    1432997174477.0 / 9575080441755.0,
    5161836677717.0 / 13612068292357.0,
    1720146321549.0 / 2090206949498.0,
    3134564353537.0 / 4481467310338.0,
    2277821191437.0 / 14882151754819.0,
)
_LSERK_C = (
    0.0,
    1432997174477.0 / 9575080441755.0,
    2526269341429.0 / 6820363962896.0,
    2006345519317.0 / 3224310063776.0,
    2802321613138.0 / 2924317926251.0,
)

# Interfaces below this count are never split across threads.
_MIN_CHUNK = 64


class SemiDiscreteOperator:
    """
    Right-hand side of the semi-discrete scheme on a fixed grid.

    Args:
        grid: Grid1D or Grid2D
        gamma: Adiabatic index
        flux_kind: Interface flux family
        bc: Boundary treatment, defaults to the grid's
        extra_source: Optional analytic source s(x, t) evaluated at 1D cell centers
        workers: Threads used for interface evaluation
    """

    def __init__(
        self,
        grid: Grid,
        gamma: float,
        flux_kind: FluxKind,
        bc: Optional[BoundaryKind] = None,
        extra_source: Optional[SourceFunction] = None,
        workers: int = 1,
    ):
        self.grid = grid
        self.gamma = gamma
        self.flux_kind = FluxKind(flux_kind)
        self.bc = BoundaryKind(bc if bc is not None else grid.bc)
        self.extra_source = extra_source
        self.workers = max(1, int(workers))
        self.flux_fn = FLUX_FUNCTIONS[self.flux_kind]
        self.source_fn = (
            janhunen_interface_source_beta
            if self.flux_kind.uses_beta_source
            else janhunen_interface_source
        )
        self.executor = ThreadPoolExecutor(max_workers=self.workers) if self.workers > 1 else None
        self.degenerate_rows = 0
        self.unbalanced_interfaces = 0
        if isinstance(grid, Grid1D):
            self._widths = ghost_widths(grid, self.bc)

    def close(self) -> None:
        """Release worker threads."""
        if self.executor is not None:
            self.executor.shutdown(wait=True)
            self.executor = None

    def __enter__(self) -> "SemiDiscreteOperator":
        return self

    def __exit__(self, *exc: object) -> None:
        self.close()

    def _interfaces_chunk(
        self,
        left: np.ndarray,
        right: np.ndarray,
        dx_left: np.ndarray,
        dx_right: np.ndarray,
        direction: Direction,
    ) -> tuple[np.ndarray, np.ndarray, tuple[int, int]]:
        flux = self.flux_fn(left, right, self.gamma, direction)
        source = self.source_fn(left, right, dx_left, dx_right, self.gamma, direction)
        return flux, source.values, (source.degenerate_count, source.unbalanced_count)

    def interfaces(
        self,
        left: np.ndarray,
        right: np.ndarray,
        dx_left: np.ndarray,
        dx_right: np.ndarray,
        direction: Direction,
    ) -> tuple[np.ndarray, np.ndarray]:
        """
        Fluxes and source contributions at every interface.

        Inputs have leading shape (n_interfaces, ...). Chunks split along the
        first axis and are reassembled in order.
        """
        n = left.shape[0]
        if self.executor is None or n < 2 * _MIN_CHUNK:
            flux, source, counts = self._interfaces_chunk(
                left, right, dx_left, dx_right, direction
            )
        else:
            bounds = np.linspace(0, n, min(self.workers, n // _MIN_CHUNK) + 1).astype(int)
            futures = [
                self.executor.submit(
                    self._interfaces_chunk,
                    left[lo:hi],
                    right[lo:hi],
                    dx_left[lo:hi],
                    dx_right[lo:hi],
                    direction,
                )
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            parts = [f.result() for f in futures]
            flux = np.concatenate([part[0] for part in parts], axis=0)
            source = np.concatenate([part[1] for part in parts], axis=0)
            counts = (sum(part[2][0] for part in parts), sum(part[2][1] for part in parts))
        self.degenerate_rows += counts[0]
        self.unbalanced_interfaces += counts[1]
        return flux, source

    def __call__(self, field: np.ndarray, t: float = 0.0) -> np.ndarray:
        if isinstance(self.grid, Grid1D):
            return self._rhs_1d(field, t)
        return self._rhs_2d(field)

    def _rhs_1d(self, field: np.ndarray, t: float) -> np.ndarray:
        grid = self.grid
        prim = cons_to_prim(field, self.gamma)
        padded = pad_field(prim, self.bc)
        widths = self._widths
        flux, source = self.interfaces(
            padded[:-1], padded[1:], widths[:-1], widths[1:], Direction.X
        )
        rhs = -(flux[1:] - flux[:-1]) / grid.widths[:, None] + 0.5 * (source[1:] + source[:-1])
        if self.extra_source is not None:
            rhs = rhs + self.extra_source(grid.centers, t)
        return rhs

    def _rhs_2d(self, field: np.ndarray) -> np.ndarray:
        grid = self.grid
        prim = cons_to_prim(field, self.gamma)
        rhs = np.zeros_like(field)
        for axis, direction, spacing in ((0, Direction.X, grid.dx), (1, Direction.Y, grid.dy)):
            padded = pad_field(prim, self.bc, axis=axis)
            left = np.moveaxis(padded, axis, 0)[:-1]
            right = np.moveaxis(padded, axis, 0)[1:]
            width = np.full(left.shape[:-1], spacing)
            flux, source = self.interfaces(left, right, width, width, direction)
            contrib = -(flux[1:] - flux[:-1]) / spacing + 0.5 * (source[1:] + source[:-1])
            rhs += np.moveaxis(contrib, 0, axis)
        return rhs


def semidiscrete_rhs_1d(
    field: np.ndarray,
    grid: Grid1D,
    gamma: float,
    flux_kind: FluxKind,
    bc: Optional[BoundaryKind] = None,
    extra_source: Optional[SourceFunction] = None,
    t: float = 0.0,
) -> np.ndarray:
    """Time derivative of a 1D conserved field, shape (N, 8)."""
    return SemiDiscreteOperator(grid, gamma, flux_kind, bc, extra_source)(field, t)


def semidiscrete_rhs_2d(
    field: np.ndarray,
    grid: Grid2D,
    gamma: float,
    flux_kind: FluxKind,
    bc: Optional[BoundaryKind] = None,
) -> np.ndarray:
    """Time derivative of a 2D conserved field, shape (Nx, Ny, 8)."""
    return SemiDiscreteOperator(grid, gamma, flux_kind, bc)(field)


def stable_dt(field: np.ndarray, grid: Grid, gamma: float, cfl: float) -> float:
    """
    CFL-limited time step.

    1D: cfl * min_i dx_i/(|u_i| + c_f,i). 2D: cfl / max_ij(lx/dx + ly/dy) with
    l = |u_d| + c_f,d per direction.
    """
    prim = cons_to_prim(field, gamma)
    if isinstance(grid, Grid1D):
        speed = np.abs(prim[..., 1]) + wave_speeds(prim, gamma, Direction.X).c_f
        return float(cfl * np.min(grid.widths / speed))
    speed_x = np.abs(prim[..., 1]) + wave_speeds(prim, gamma, Direction.X).c_f
    speed_y = np.abs(prim[..., 2]) + wave_speeds(prim, gamma, Direction.Y).c_f
    return float(cfl / np.max(speed_x / grid.dx + speed_y / grid.dy))


def _check_stage(
    y: np.ndarray, stage: int, validate: Optional[Callable[[np.ndarray], None]]
) -> None:
    finite = np.all(np.isfinite(y), axis=-1) if y.ndim > 1 else np.isfinite(y)
    if not np.all(finite):
        cell = int(np.flatnonzero(~np.ravel(finite))[0]) if y.ndim > 1 else None
        raise InvalidStateAfterStage(f"non-finite value after stage {stage + 1}", cell=cell)
    if validate is not None:
        try:
            validate(y)
        except SolverBreakdown as exc:
            raise InvalidStateAfterStage(
                f"stage {stage + 1} rejected: {type(exc).__name__}: {exc.args[0]}", cell=exc.cell
            ) from exc


def lserk45_step(
    field: np.ndarray,
    rhs_fn: RHSFunction,
    dt: float,
    t: float = 0.0,
    validate: Optional[Callable[[np.ndarray], None]] = None,
) -> np.ndarray:
    """One step of the five-stage fourth-order low-storage Runge-Kutta scheme."""
    y = np.array(field, dtype=np.float64, copy=True)
    residual = np.zeros_like(y)
    for stage, (a, b, c) in enumerate(zip(_LSERK_A, _LSERK_B, _LSERK_C)):
        residual = a * residual + dt * rhs_fn(y, t + c * dt)
        y = y + b * residual
        _check_stage(y, stage, validate)
    return y


def rk2_step(
    field: np.ndarray,
    rhs_fn: RHSFunction,
    dt: float,
    t: float = 0.0,
    validate: Optional[Callable[[np.ndarray], None]] = None,
) -> np.ndarray:
    """One step of the two-stage second-order strong-stability-preserving scheme."""
    y0 = np.array(field, dtype=np.float64, copy=True)
    y1 = y0 + dt * rhs_fn(y0, t)
    _check_stage(y1, 0, validate)
    y = 0.5 * y0 + 0.5 * (y1 + dt * rhs_fn(y1, t + dt))
    _check_stage(y, 1, validate)
    return y


STEPPERS = {RKScheme.LSERK45: lserk45_step, RKScheme.RK2: rk2_step}


def advance(
    field: np.ndarray,
    rhs_fn: RHSFunction,
    t_final: float,
    dt_fn: Callable[[np.ndarray], float],
    scheme: RKScheme = RKScheme.LSERK45,
    t0: float = 0.0,
    stop_times: Iterable[float] = (),
    on_stop: Optional[Callable[[np.ndarray, float], None]] = None,
    validate: Optional[Callable[[np.ndarray], None]] = None,
) -> tuple[np.ndarray, int]:
    """
    Integrate from t0 to t_final, landing exactly on every requested stop time.

    Args:
        field: Initial conserved field
        rhs_fn: Right-hand side ``rhs_fn(field, t)``
        t_final: End time
        dt_fn: Step size proposal for the current field
        scheme: Time integrator
        t0: Start time
        stop_times: Intermediate times at which ``on_stop`` is called
        on_stop: Callback receiving (field, t) at each stop time and at t_final
        validate: Per-stage state check

    Returns:
        Tuple of (final field, number of steps taken)

    Raises:
        SolverBreakdown: With the simulation time attached
    """
    stepper = STEPPERS[RKScheme(scheme)]
    stops = sorted({float(s) for s in stop_times if t0 < s < t_final} | {float(t_final)})
    tol = 1e-13 * max(1.0, abs(t_final))
    t = t0
    steps = 0
    for stop in stops:
        while stop - t > tol:
            try:
                dt = min(dt_fn(field), stop - t)
                field = stepper(field, rhs_fn, dt, t, validate)
            except SolverBreakdown as exc:
                logger.error(f"solver breakdown at t={t:.6g}: {exc}")
                raise exc.at_time(t)
            t = stop if stop - (t + dt) <= tol else t + dt
            steps += 1
            if steps % settings.progress_every == 0:
                logger.debug(f"step {steps}: t={t:.6g}, dt={dt:.3e}")
        if on_stop is not None:
            on_stop(field, stop)
    return field, steps
