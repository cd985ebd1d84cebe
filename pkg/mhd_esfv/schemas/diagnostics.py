"""
Schemas for conservation ledgers and convergence results.
"""
import math

from pydantic import BaseModel, Field

LEDGER_COLUMNS = ("mass", "momx", "momy", "momz", "energy", "B1", "B2", "B3", "entropy")


class ConservationLedger(BaseModel):
    """Domain integrals of the conserved variables and of the entropy at one time."""

    time: float
    totals: tuple[float, ...] = Field(..., min_length=8, max_length=8)
    total_entropy: float
    grid: tuple = Field(..., description="Signature of the grid the totals were taken on")

    def row(self) -> list[float]:
        """Values in ledger CSV column order."""
        return [self.time, *self.totals, self.total_entropy]


class LedgerDelta(BaseModel):
    """Absolute change of every ledger entry between two times."""

    totals: tuple[float, ...] = Field(..., min_length=8, max_length=8)
    entropy: float

    def row(self) -> list[float]:
        return [*self.totals, self.entropy]

    @property
    def max_conserved(self) -> float:
        """Largest change among mass, momentum and energy."""
        return max(self.totals[:5])

    @property
    def max_magnetic(self) -> float:
        return max(self.totals[5:])


class EOCResult(BaseModel):
    """Pairwise convergence rates of one error column."""

    cells: list[int]
    errors: list[float]
    rates: list[float]

    @property
    def mean(self) -> float:
        return math.fsum(self.rates) / len(self.rates)

    @property
    def finest(self) -> float:
        """Rate of the two finest resolutions."""
        return self.rates[-1]
