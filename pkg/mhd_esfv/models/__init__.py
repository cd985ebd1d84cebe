"""
Domain types for MHD states and scheme selectors.
"""

from mhd_esfv.models.state import (
    BoundaryKind,
    ConsState,
    Direction,
    EntropyQuantities,
    FluxKind,
    ParamVector,
    PrimState,
    RKScheme,
)

__all__ = [
    "BoundaryKind",
    "ConsState",
    "Direction",
    "EntropyQuantities",
    "FluxKind",
    "ParamVector",
    "PrimState",
    "RKScheme",
]
