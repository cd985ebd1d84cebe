"""
Run configuration schemas for validating experiment requests.
"""
from enum import Enum
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from mhd_esfv.models.state import BoundaryKind, FluxKind, RKScheme
from mhd_esfv.services.problems import ProblemId, ProblemSpec, get_problem


class Experiment(str, Enum):
    CONVERGENCE = "convergence"
    CONSERVATION = "conservation"
    RIEMANN = "riemann"
    SHOCKTUBE2D = "shocktube2d"
    ROTOR = "rotor"


_ALLOWED_PROBLEMS = {
    Experiment.CONVERGENCE: (ProblemId.MANUFACTURED,),
    Experiment.CONSERVATION: (ProblemId.BRIO_WU, ProblemId.RYU_JONES, ProblemId.TORRILHON),
    Experiment.RIEMANN: (ProblemId.BRIO_WU, ProblemId.RYU_JONES, ProblemId.TORRILHON),
    Experiment.SHOCKTUBE2D: (ProblemId.SHOCK_TUBE_25D,),
    Experiment.ROTOR: (ProblemId.ROTOR1,),
}

_LEDGER_EXPERIMENTS = (Experiment.CONSERVATION, Experiment.SHOCKTUBE2D)
_LEDGER_CFL = (1.0, 0.1, 0.01)

GridKind = Literal["uniform", "stretched", "irregular"]


def _split_list(v: Any) -> Any:
    if isinstance(v, str):
        return [item.strip() for item in v.split(",") if item.strip()]
    if isinstance(v, (int, float)):
        return [v]
    return v


class SolverConfig(BaseModel):
    """Numerical settings of a single simulation."""

    gamma: float = Field(..., gt=1.0, description="Adiabatic index")
    cfl: float = Field(..., gt=0.0, description="Courant number before the scheme allowance")
    flux_kind: FluxKind = Field(default=FluxKind.ES_ROE, description="Interface flux family")
    bc_kind: BoundaryKind = Field(default=BoundaryKind.PERIODIC, description="Boundary treatment")
    t_final: float = Field(..., gt=0.0, description="Final simulation time")
    scheme: RKScheme = Field(default=RKScheme.LSERK45, description="Time integrator")
    cells: int = Field(..., ge=2, description="Cells per direction")
    grid_kind: GridKind = Field(default="uniform", description="Spacing of 1D grids")
    ratio: float = Field(default=10.0, ge=1.0, description="Largest over smallest stretched width")


class RunConfig(BaseModel):
    """
    One experiment request as read from a key=value config file.

    List-valued keys accept comma-separated strings.
    """

    experiment: Experiment
    problem: Optional[ProblemId] = Field(None, description="Problem id; defaults per experiment")
    flux_kind: FluxKind = Field(default=FluxKind.ES_ROE)
    cells: list[int] = Field(default_factory=lambda: [100], description="Cell count(s)")
    cfl: list[float] = Field(default_factory=lambda: [0.1], description="Courant number(s)")
    grid: GridKind = "uniform"
    ratio: float = Field(default=10.0, ge=1.0)
    gamma: Optional[float] = Field(None, gt=1.0, description="Overrides the problem's gamma")
    t_final: Optional[float] = Field(None, gt=0.0, description="Overrides the problem's final time")
    bc: Optional[BoundaryKind] = Field(None, description="Overrides the experiment's boundary kind")
    scheme: Optional[RKScheme] = Field(None, description="RK2 in 2D, LSERK45 in 1D by default")
    output_dir: Path = Path("results")
    output_times: list[float] = Field(default_factory=list)
    reference: Optional[Path] = Field(None, description="Reference snapshot CSV to compare against")
    save_reference: bool = False

    model_config = {"extra": "forbid"}

    @field_validator("cells", "cfl", "output_times", mode="before")
    @classmethod
    def split_lists(cls, v: Any) -> Any:
        """Accept comma-separated values."""
        return _split_list(v)

    @field_validator("cells")
    @classmethod
    def validate_cells(cls, v: list[int]) -> list[int]:
        if not v:
            raise ValueError("at least one cell count is required")
        if any(n < 2 for n in v):
            raise ValueError("cell counts must be >= 2")
        return v

    @field_validator("cfl")
    @classmethod
    def validate_cfl(cls, v: list[float]) -> list[float]:
        if not v:
            raise ValueError("at least one CFL number is required")
        if any(c <= 0.0 for c in v):
            raise ValueError("CFL numbers must be positive")
        return v

    @field_validator("output_times")
    @classmethod
    def validate_output_times(cls, v: list[float]) -> list[float]:
        if any(t <= 0.0 for t in v):
            raise ValueError("output times must be positive")
        return sorted(v)

    @model_validator(mode="after")
    def check_combination(self) -> "RunConfig":
        """Fill the default problem and check it fits the experiment."""
        allowed = _ALLOWED_PROBLEMS[self.experiment]
        if self.problem is None:
            self.problem = allowed[0]
        if "cfl" not in self.model_fields_set and self.experiment in _LEDGER_EXPERIMENTS:
            self.cfl = list(_LEDGER_CFL)
        if self.problem not in allowed:
            names = ", ".join(p.value for p in allowed)
            raise ValueError(
                f"experiment {self.experiment.value} runs only problem(s) {names}, "
                f"got {self.problem.value}"
            )
        if self.experiment is Experiment.CONVERGENCE and len(self.cells) < 2:
            raise ValueError("convergence needs at least two cell counts")
        if self.experiment is not Experiment.CONVERGENCE and self.experiment is not Experiment.RIEMANN:
            if len(self.cells) != 1:
                raise ValueError(f"experiment {self.experiment.value} takes a single cell count")
        if self.experiment in (Experiment.CONVERGENCE, Experiment.RIEMANN, Experiment.ROTOR):
            if len(self.cfl) != 1:
                raise ValueError(f"experiment {self.experiment.value} takes a single CFL number")
        t_end = self.t_final if self.t_final is not None else get_problem(self.problem).t_final
        if any(t >= t_end for t in self.output_times):
            raise ValueError(f"output times must precede the final time {t_end}")
        return self

    @property
    def problem_spec(self) -> ProblemSpec:
        """Problem definition with gamma and final time overrides applied."""
        spec = get_problem(self.problem)
        update: dict[str, Any] = {}
        if self.gamma is not None:
            update["gamma"] = self.gamma
        if self.t_final is not None:
            update["t_final"] = self.t_final
        return spec.model_copy(update=update) if update else spec

    @property
    def boundary(self) -> BoundaryKind:
        """Conservation studies are periodic; other runs use the problem default."""
        if self.bc is not None:
            return self.bc
        if self.experiment is Experiment.CONSERVATION:
            return BoundaryKind.PERIODIC
        return self.problem_spec.bc

    @property
    def time_scheme(self) -> RKScheme:
        if self.scheme is not None:
            return self.scheme
        if self.experiment in (Experiment.SHOCKTUBE2D, Experiment.ROTOR):
            return RKScheme.RK2
        return RKScheme.LSERK45

    def solver_config(self, cells: int, cfl: float) -> SolverConfig:
        """Settings of the single simulation with the given resolution and CFL."""
        spec = self.problem_spec
        return SolverConfig(
            gamma=spec.gamma,
            cfl=cfl,
            flux_kind=self.flux_kind,
            bc_kind=self.boundary,
            t_final=spec.t_final,
            scheme=self.time_scheme,
            cells=cells,
            grid_kind=self.grid,
            ratio=self.ratio,
        )


class RunSummary(BaseModel):
    """Outcome of one experiment."""

    experiment: Experiment
    problem: ProblemId
    flux_kind: FluxKind
    artifacts: list[Path] = Field(default_factory=list)
    figures: dict[str, float] = Field(default_factory=dict, description="Headline numbers")
    steps: dict[str, int] = Field(default_factory=dict, description="Time steps per run label")
