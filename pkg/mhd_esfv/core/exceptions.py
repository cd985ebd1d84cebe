"""
Exception hierarchy shared by the solver library and the command-line runner.
"""
from typing import Optional

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG_ERROR = 2
EXIT_SOLVER_BREAKDOWN = 3


class MHDError(Exception):
    """Base class for all package errors. Carries the CLI exit code."""

    exit_code: int = EXIT_UNEXPECTED


class ConfigError(MHDError):
    """Invalid run configuration, unknown key or unreadable config file."""

    exit_code = EXIT_CONFIG_ERROR


class SolverBreakdown(MHDError):
    """
    A numerical state became unusable during a run.

    Args:
        message: Human readable description
        cell: Flat index of the offending cell, if known
        time: Simulation time at which the breakdown was detected, if known
    """

    exit_code = EXIT_SOLVER_BREAKDOWN

    def __init__(
        self,
        message: str,
        cell: Optional[int] = None,
        time: Optional[float] = None,
    ) -> None:
        self.cell = cell
        self.time = time
        super().__init__(message)

    def __str__(self) -> str:
        text = super().__str__()
        where = []
        if self.cell is not None:
            where.append(f"cell {self.cell}")
        if self.time is not None:
            where.append(f"t={self.time:.6g}")
        return f"{text} ({', '.join(where)})" if where else text

    def at_time(self, time: float) -> "SolverBreakdown":
        """Attach the simulation time and return self for re-raising."""
        self.time = time
        return self


class NonPositiveDensity(SolverBreakdown):
    """Density fell below the validity threshold."""


class NonPositivePressure(SolverBreakdown):
    """Thermal pressure fell below the validity threshold."""


class NonFiniteState(SolverBreakdown):
    """A NaN or infinity appeared in a state."""


class InvalidStateAfterStage(SolverBreakdown):
    """A Runge-Kutta stage produced a non-finite or rejected field."""


class NonPositiveInput(MHDError, ValueError):
    """Logarithmic mean called with a non-positive argument."""

    exit_code = EXIT_SOLVER_BREAKDOWN


class InvalidExtent(MHDError, ValueError):
    """Grid requested with too few cells, an empty interval or a bad ratio."""

    exit_code = EXIT_CONFIG_ERROR


class DomainMismatch(MHDError, ValueError):
    """Grid does not cover the domain a problem is defined on."""

    exit_code = EXIT_CONFIG_ERROR


class GridMismatch(MHDError, ValueError):
    """Two ledgers were computed on different grids."""

    exit_code = EXIT_CONFIG_ERROR


class LengthMismatch(MHDError, ValueError):
    """Error and cell-count sequences differ in length or are too short."""

    exit_code = EXIT_CONFIG_ERROR
