"""
Experiment service orchestrating the verification studies.
"""
import logging
import math
import shutil
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np

from mhd_esfv.core.config import settings
from mhd_esfv.models.state import CONS_NAMES
from mhd_esfv.physics.state import cons_to_prim
from mhd_esfv.schemas.diagnostics import LEDGER_COLUMNS
from mhd_esfv.schemas.run import Experiment, RunConfig, RunSummary, SolverConfig
from mhd_esfv.services.diagnostics import (
    delta_e,
    discrete_div_b,
    eoc,
    integrate_conserved,
    l2_error,
    mach_number,
    magnetic_pressure,
    snapshot_distance,
    total_variation,
)
from mhd_esfv.services.problems import (
    ProblemSpec,
    initial_field,
    manufactured_cons,
    manufactured_source,
)
from mhd_esfv.solver.grid import (
    Grid1D,
    Grid2D,
    make_irregular_grid,
    make_stretched_grid,
    make_uniform_grid,
    make_uniform_grid_2d,
)
from mhd_esfv.solver.integrate import SemiDiscreteOperator, SourceFunction, advance, stable_dt
from mhd_esfv.utils.csv_writer import read_table, write_ledger, write_snapshot, write_table

logger = logging.getLogger(__name__)

Grid = Union[Grid1D, Grid2D]


def _label(value: float) -> str:
    return f"{value:g}"


class ExperimentService:
    """Runs one configured experiment and writes its CSV artifacts."""

    def __init__(self, config: RunConfig, workers: Optional[int] = None):
        self.config = config
        self.spec: ProblemSpec = config.problem_spec
        self.workers = workers if workers is not None else settings.workers
        self.output_dir = Path(config.output_dir)
        self.artifacts: list[Path] = []
        self.figures: dict[str, float] = {}
        self.steps: dict[str, int] = {}

    def run(self) -> RunSummary:
        """Dispatch to the experiment named in the config."""
        runners = {
            Experiment.CONVERGENCE: self.run_convergence,
            Experiment.CONSERVATION: self.run_conservation,
            Experiment.RIEMANN: self.run_riemann,
            Experiment.SHOCKTUBE2D: self.run_shocktube2d,
            Experiment.ROTOR: self.run_rotor,
        }
        logger.info(
            f"starting {self.config.experiment.value} on {self.spec.id.value} "
            f"with {self.config.flux_kind.value}, gamma={self.spec.gamma:g}, T={self.spec.t_final:g}"
        )
        self.output_dir.mkdir(parents=True, exist_ok=True)
        runners[self.config.experiment]()
        logger.info(f"finished {self.config.experiment.value}: {len(self.artifacts)} artifacts")
        return RunSummary(
            experiment=self.config.experiment,
            problem=self.spec.id,
            flux_kind=self.config.flux_kind,
            artifacts=self.artifacts,
            figures=self.figures,
            steps=self.steps,
        )

    # Building blocks

    def make_grid(self, solver: SolverConfig) -> Grid:
        spec = self.spec
        if spec.dimension == 2:
            return make_uniform_grid_2d(
                solver.cells, solver.cells, spec.xmin, spec.xmax, spec.ymin, spec.ymax, solver.bc_kind
            )
        if solver.grid_kind == "stretched":
            return make_stretched_grid(solver.cells, spec.xmin, spec.xmax, solver.ratio, solver.bc_kind)
        if solver.grid_kind == "irregular":
            return make_irregular_grid(solver.cells, spec.xmin, spec.xmax, solver.ratio, solver.bc_kind)
        return make_uniform_grid(solver.cells, spec.xmin, spec.xmax, solver.bc_kind)

    def simulate(
        self,
        field: np.ndarray,
        grid: Grid,
        solver: SolverConfig,
        extra_source: Optional[SourceFunction] = None,
        stop_times: Sequence[float] = (),
        on_stop: Optional[Callable[[np.ndarray, float], None]] = None,
    ) -> tuple[np.ndarray, int]:
        """Advance ``field`` to the final time of ``solver``."""
        logger.info(
            f"run: {solver.cells} cells ({solver.grid_kind}), cfl={solver.cfl:g}, "
            f"{solver.scheme.value}, bc={solver.bc_kind.value}"
        )
        gamma = solver.gamma
        courant = solver.cfl * solver.scheme.courant_scale
        with SemiDiscreteOperator(
            grid, gamma, solver.flux_kind, solver.bc_kind, extra_source, self.workers
        ) as rhs:
            field, steps = advance(
                field,
                rhs,
                solver.t_final,
                lambda f: stable_dt(f, grid, gamma, courant),
                solver.scheme,
                stop_times=stop_times,
                on_stop=on_stop,
                validate=lambda f: cons_to_prim(f, gamma),
            )
            if rhs.degenerate_rows:
                logger.debug(
                    f"{rhs.degenerate_rows} source rows took the bounded form, "
                    f"{rhs.unbalanced_interfaces} interfaces left entropy unbalanced"
                )
        return field, steps

    def _write(self, name: str, writer: Callable[[Path], Path]) -> Path:
        path = writer(self.output_dir / name)
        self.artifacts.append(path)
        return path

    def _snapshot(self, name: str, field: np.ndarray, grid: Grid) -> Path:
        return self._write(name, lambda p: write_snapshot(p, field, grid, self.spec.gamma))

    def _ledger_study(self, cells: int) -> None:
        """Run every CFL value from the same initial data and tabulate the ledger deltas."""
        summary_rows = []
        for cfl in self.config.cfl:
            solver = self.config.solver_config(cells, cfl)
            grid = self.make_grid(solver)
            field0 = initial_field(self.spec, grid)
            ledgers = [integrate_conserved(field0, grid, solver.gamma, 0.0)]

            def record(field: np.ndarray, t: float) -> None:
                ledgers.append(integrate_conserved(field, grid, solver.gamma, t))

            label = _label(cfl)
            final, steps = self.simulate(
                field0, grid, solver, stop_times=self.config.output_times, on_stop=record
            )
            self.steps[f"cfl={label}"] = steps
            self._write(f"ledger_cfl{label}.csv", lambda p: write_ledger(p, ledgers))
            self._snapshot(f"snapshot_cfl{label}.csv", final, grid)

            delta = delta_e(ledgers[0], ledgers[-1])
            summary_rows.append([cfl, *delta.row()])
            self.figures[f"entropy_delta cfl={label}"] = delta.entropy
            self.figures[f"max_conserved_delta cfl={label}"] = delta.max_conserved
            self.figures[f"max_magnetic_delta cfl={label}"] = delta.max_magnetic
            logger.info(
                f"cfl={label}: entropy delta {delta.entropy:.3e}, "
                f"mass/momentum/energy {delta.max_conserved:.3e}, B {delta.max_magnetic:.3e}"
            )
        self._write(
            "conservation_summary.csv",
            lambda p: write_table(p, ("cfl",) + LEDGER_COLUMNS, summary_rows),
        )

    # Experiments

    def run_convergence(self) -> None:
        """Manufactured-solution errors and convergence rates over the cell list."""
        gamma = self.spec.gamma
        cfl = self.config.cfl[0]
        errors = []
        for cells in self.config.cells:
            solver = self.config.solver_config(cells, cfl)
            grid = self.make_grid(solver)
            field, steps = self.simulate(
                initial_field(self.spec, grid), grid, solver, extra_source=manufactured_source
            )
            self.steps[f"N={cells}"] = steps
            err = l2_error(field, lambda x, t: manufactured_cons(x, t, gamma), grid, solver.t_final)
            errors.append(err)
            self._snapshot(f"snapshot_N{cells}.csv", field, grid)
            logger.info(f"N={cells}: rho error {err[0]:.3e}")

        errors_arr = np.array(errors)
        rates = np.full_like(errors_arr, np.nan)
        eoc_rows = []
        for k, name in enumerate(CONS_NAMES):
            column = errors_arr[:, k]
            if np.all(column > 0.0):
                result = eoc(column.tolist(), self.config.cells)
                rates[1:, k] = result.rates
                eoc_rows.append([k, result.mean, result.finest])
                self.figures[f"eoc_mean {name}"] = result.mean
                self.figures[f"eoc_finest {name}"] = result.finest
            else:
                eoc_rows.append([k, math.nan, math.nan])

        header = ["cells"]
        for name in CONS_NAMES:
            header += [f"err_{name}", f"eoc_{name}"]
        table = np.empty((len(self.config.cells), 1 + 2 * len(CONS_NAMES)))
        table[:, 0] = self.config.cells
        table[:, 1::2] = errors_arr
        table[:, 2::2] = rates
        self._write("convergence.csv", lambda p: write_table(p, header, table))
        self._write(
            "eoc_summary.csv",
            lambda p: write_table(p, ("variable", "mean_eoc", "finest_eoc"), eoc_rows),
        )

    def run_conservation(self) -> None:
        """Ledger deltas of a 1D Riemann problem on a periodic domain for each CFL value."""
        self._ledger_study(self.config.cells[0])

    def run_shocktube2d(self) -> None:
        """Ledger deltas of the rotated shock tube for each CFL value."""
        self._ledger_study(self.config.cells[0])

    def run_riemann(self) -> None:
        """Snapshots of a 1D Riemann problem, optionally compared against a reference."""
        cfl = self.config.cfl[0]
        final_snapshots: list[tuple[int, Path]] = []
        for cells in self.config.cells:
            solver = self.config.solver_config(cells, cfl)
            grid = self.make_grid(solver)

            def snapshot(field: np.ndarray, t: float) -> None:
                self._snapshot(f"snapshot_N{cells}_t{_label(t)}.csv", field, grid)

            field, steps = self.simulate(
                initial_field(self.spec, grid),
                grid,
                solver,
                stop_times=self.config.output_times,
                on_stop=snapshot,
            )
            self.steps[f"N={cells}"] = steps
            rho = cons_to_prim(field, solver.gamma)[:, 0]
            self.figures[f"tv_rho N={cells}"] = total_variation(rho)
            final_snapshots.append((cells, self.artifacts[-1]))

        self._compare_reference(final_snapshots)
        if self.config.save_reference:
            target = settings.reference_dir / f"{self.spec.id.value}_reference.csv"
            target.parent.mkdir(parents=True, exist_ok=True)
            shutil.copyfile(final_snapshots[-1][1], target)
            self.artifacts.append(target)
            logger.info(f"saved reference snapshot to {target}")

    def _compare_reference(self, snapshots: list[tuple[int, Path]]) -> None:
        reference = self.config.reference or (
            settings.reference_dir / f"{self.spec.id.value}_reference.csv"
        )
        if not Path(reference).is_file():
            if not self.config.save_reference:
                logger.warning(f"no reference snapshot at {reference}; skipping distance")
            return
        _, ref = read_table(Path(reference))
        rows = []
        for cells, path in snapshots:
            _, data = read_table(path)
            solver = self.config.solver_config(cells, self.config.cfl[0])
            grid = self.make_grid(solver)
            distance = snapshot_distance(data[:, 0], grid.widths, data[:, 1], ref[:, 0], ref[:, 1])
            rows.append([cells, distance])
            self.figures[f"distance N={cells}"] = distance
            logger.info(f"N={cells}: density distance to reference {distance:.3e}")
        self._write("distance.csv", lambda p: write_table(p, ("cells", "distance"), rows))

    def run_rotor(self) -> None:
        """Rotor snapshots plus Mach number, magnetic pressure and discrete divergence."""
        cells = self.config.cells[0]
        solver = self.config.solver_config(cells, self.config.cfl[0])
        grid = self.make_grid(solver)

        def snapshot(field: np.ndarray, t: float) -> None:
            self._snapshot(f"snapshot_t{_label(t)}.csv", field, grid)

        field, steps = self.simulate(
            initial_field(self.spec, grid),
            grid,
            solver,
            stop_times=self.config.output_times,
            on_stop=snapshot,
        )
        self.steps[f"N={cells}"] = steps
        div_b = discrete_div_b(field, grid)
        x, y = grid.mesh()
        table = np.column_stack(
            [
                x.ravel(),
                y.ravel(),
                mach_number(field, solver.gamma).ravel(),
                magnetic_pressure(field).ravel(),
                div_b.ravel(),
            ]
        )
        self._write(
            "rotor_diagnostics.csv",
            lambda p: write_table(p, ("x", "y", "mach", "magnetic_pressure", "div_b"), table),
        )
        max_div = float(np.max(np.abs(div_b)))
        self.figures["max_abs_div_b"] = max_div
        self.figures["min_pressure"] = float(np.min(cons_to_prim(field, solver.gamma)[..., 4]))
        logger.info(f"max|div B| = {max_div:.3e}")
