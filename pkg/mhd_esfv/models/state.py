"""
Domain types for ideal MHD states, directions and scheme selectors.

Numerical kernels work on numpy arrays whose last axis holds the eight state
components. The records below are the single-state view of those arrays:
``np.asarray(PrimState(...))`` gives the ``(8,)`` array and ``PrimState(*arr)``
converts back.
"""
from enum import Enum, IntEnum
from typing import NamedTuple

import numpy as np

NVARS = 8

# Threshold below which density or pressure counts as non-physical.
VALIDITY_FLOOR = 1e-14

PRIM_NAMES = ("rho", "u", "v", "w", "p", "B1", "B2", "B3")
CONS_NAMES = ("rho", "mom1", "mom2", "mom3", "E", "B1", "B2", "B3")


class Direction(IntEnum):
    """Coordinate direction of an interface normal."""

    X = 0
    Y = 1
    Z = 2


class FluxKind(str, Enum):
    """Interface flux families."""

    EC = "EC"
    EKEC = "EKEC"
    ES_ROE = "ES_ROE"
    ES_LLF = "ES_LLF"

    @property
    def uses_beta_source(self) -> bool:
        """EKEC pairs with the beta-weighted source discretization."""
        return self is FluxKind.EKEC


class BoundaryKind(str, Enum):
    """Ghost-cell treatment at the domain ends."""

    PERIODIC = "periodic"
    OUTFLOW = "outflow"


class RKScheme(str, Enum):
    """Explicit time integrators."""

    LSERK45 = "LSERK45"
    RK2 = "RK2"

    @property
    def courant_scale(self) -> float:
        """
        Step allowance relative to RK2 at the same Courant number.

        Ratio of the stability interval on the negative real axis (about 4.6
        for the five-stage scheme) to the RK2 interval of 2. Runs multiply the
        configured cfl by it, so cfl=1 is the upwind stability edge for either
        scheme.
        """
        return 2.3 if self is RKScheme.LSERK45 else 1.0


class PrimState(NamedTuple):
    """Primitive state (rho, u, v, w, p, B1, B2, B3)."""

    rho: float
    u: float
    v: float
    w: float
    p: float
    B1: float
    B2: float
    B3: float


class ConsState(NamedTuple):
    """Conserved state (rho, rho*u, rho*v, rho*w, E, B1, B2, B3)."""

    rho: float
    mom1: float
    mom2: float
    mom3: float
    E: float
    B1: float
    B2: float
    B3: float


class EntropyQuantities(NamedTuple):
    """Pointwise entropy quantities; each entry has the batch shape of the input."""

    s: np.ndarray
    U: np.ndarray
    F: np.ndarray
    G: np.ndarray
    H: np.ndarray
    phi_x: np.ndarray
    phi_y: np.ndarray
    phi_z: np.ndarray

    def flux(self, direction: Direction) -> np.ndarray:
        """Entropy flux in the given direction."""
        return (self.F, self.G, self.H)[direction]

    def potential(self, direction: Direction) -> np.ndarray:
        """Entropy potential in the given direction."""
        return (self.phi_x, self.phi_y, self.phi_z)[direction]


class ParamVector(NamedTuple):
    """Parameter vector z = (sqrt(rho/p), sqrt(rho/p) u, ..., sqrt(rho p), B)."""

    z1: np.ndarray
    z2: np.ndarray
    z3: np.ndarray
    z4: np.ndarray
    z5: np.ndarray
    z6: np.ndarray
    z7: np.ndarray
    z8: np.ndarray


def as_state_array(state: "np.ndarray | PrimState | ConsState") -> np.ndarray:
    """Float64 array view of a record or array with trailing axis of length 8."""
    arr = np.asarray(state, dtype=np.float64)
    if arr.shape[-1:] != (NVARS,):
        raise ValueError(f"expected trailing axis of length {NVARS}, got shape {arr.shape}")
    return arr
