"""
Pydantic schemas for run configuration and diagnostics.
"""

from .diagnostics import ConservationLedger, EOCResult, LedgerDelta
from .run import Experiment, RunConfig, RunSummary, SolverConfig

__all__ = [
    "ConservationLedger",
    "EOCResult",
    "Experiment",
    "LedgerDelta",
    "RunConfig",
    "RunSummary",
    "SolverConfig",
]
