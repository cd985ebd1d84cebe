"""
State conversions and pointwise entropy quantities of ideal MHD.

Every function is vectorized over leading axes; the last axis holds the eight
components in primitive order (rho, u, v, w, p, B1, B2, B3) or conserved order
(rho, rho u, rho v, rho w, E, B1, B2, B3).

Y and Z quantities are obtained from the X formulas by relabelling the state:
Y exchanges (u, v) and (B1, B2), Z exchanges (u, w) and (B1, B3). The same
involution maps flux vectors back to the global frame.
"""
from typing import Union, overload

import numpy as np

from mhd_esfv.core.exceptions import NonFiniteState, NonPositiveDensity, NonPositivePressure
from mhd_esfv.models.state import (
    VALIDITY_FLOOR,
    ConsState,
    Direction,
    EntropyQuantities,
    ParamVector,
    PrimState,
    as_state_array,
)

StateLike = Union[np.ndarray, PrimState, ConsState]

_PERMUTATIONS = {
    Direction.X: np.array([0, 1, 2, 3, 4, 5, 6, 7]),
    Direction.Y: np.array([0, 2, 1, 3, 4, 6, 5, 7]),
    Direction.Z: np.array([0, 3, 2, 1, 4, 7, 6, 5]),
}


def permutation(direction: Direction) -> np.ndarray:
    """Index array relabelling a state so that ``direction`` becomes X."""
    return _PERMUTATIONS[Direction(direction)]


def to_normal_frame(arr: np.ndarray, direction: Direction) -> np.ndarray:
    """Relabel state or flux components; the map is its own inverse."""
    if direction == Direction.X:
        return arr
    return arr[..., permutation(direction)]


def _first_bad(mask: np.ndarray) -> int:
    return int(np.flatnonzero(np.ravel(mask))[0])


def check_prim(prim: np.ndarray) -> None:
    """
    Raise if any primitive state is non-finite or below the validity floor.

    Raises:
        NonFiniteState: NaN or infinity in any component
        NonPositiveDensity: rho <= 1e-14
        NonPositivePressure: p <= 1e-14
    """
    finite = np.all(np.isfinite(prim), axis=-1)
    if not np.all(finite):
        raise NonFiniteState("non-finite state", cell=_first_bad(~finite))
    rho = prim[..., 0]
    bad_rho = ~(rho > VALIDITY_FLOOR)
    if np.any(bad_rho):
        idx = _first_bad(bad_rho)
        raise NonPositiveDensity(f"density {np.ravel(rho)[idx]:.6g} not positive", cell=idx)
    p = prim[..., 4]
    bad_p = ~(p > VALIDITY_FLOOR)
    if np.any(bad_p):
        idx = _first_bad(bad_p)
        raise NonPositivePressure(f"pressure {np.ravel(p)[idx]:.6g} not positive", cell=idx)


@overload
def prim_to_cons(prim: PrimState, gamma: float) -> ConsState: ...
@overload
def prim_to_cons(prim: np.ndarray, gamma: float) -> np.ndarray: ...


def prim_to_cons(prim, gamma):
    """Conserved variables from primitive ones via the ideal-gas energy relation."""
    arr = as_state_array(prim)
    rho = arr[..., 0]
    vel = arr[..., 1:4]
    mag = arr[..., 5:8]
    cons = np.empty_like(arr)
    cons[..., 0] = rho
    cons[..., 1:4] = rho[..., None] * vel
    cons[..., 4] = (
        arr[..., 4] / (gamma - 1.0)
        + 0.5 * rho * np.sum(vel * vel, axis=-1)
        + 0.5 * np.sum(mag * mag, axis=-1)
    )
    cons[..., 5:8] = mag
    if isinstance(prim, PrimState):
        return ConsState(*map(float, cons))
    return cons


@overload
def cons_to_prim(cons: ConsState, gamma: float, validate: bool = True) -> PrimState: ...
@overload
def cons_to_prim(cons: np.ndarray, gamma: float, validate: bool = True) -> np.ndarray: ...


def cons_to_prim(cons, gamma, validate=True):
    """
    Primitive variables from conserved ones.

    Args:
        cons: Conserved state(s)
        gamma: Adiabatic index
        validate: Check density and pressure against the validity floor

    Returns:
        Primitive state(s), as a record when a record was passed

    Raises:
        NonPositiveDensity, NonPositivePressure, NonFiniteState
    """
    arr = as_state_array(cons)
    rho = arr[..., 0]
    mom = arr[..., 1:4]
    mag = arr[..., 5:8]
    prim = np.empty_like(arr)
    prim[..., 0] = rho
    with np.errstate(divide="ignore", invalid="ignore"):
        vel = mom / rho[..., None]
    prim[..., 1:4] = vel
    prim[..., 4] = (gamma - 1.0) * (
        arr[..., 4]
        - 0.5 * np.sum(mom * vel, axis=-1)
        - 0.5 * np.sum(mag * mag, axis=-1)
    )
    prim[..., 5:8] = mag
    if validate:
        check_prim(prim)
    if isinstance(cons, ConsState):
        return PrimState(*map(float, prim))
    return prim


def param_vector(prim: StateLike) -> ParamVector:
    """Parameter vector z of a primitive state."""
    arr = as_state_array(prim)
    rho, p = arr[..., 0], arr[..., 4]
    z1 = np.sqrt(rho / p)
    return ParamVector(
        z1,
        z1 * arr[..., 1],
        z1 * arr[..., 2],
        z1 * arr[..., 3],
        np.sqrt(rho * p),
        arr[..., 5],
        arr[..., 6],
        arr[..., 7],
    )


def entropy_vars_prim(prim: StateLike, gamma: float) -> np.ndarray:
    """Entropy variables v = dU/dq evaluated from a primitive state."""
    arr = as_state_array(prim)
    rho, p = arr[..., 0], arr[..., 4]
    vel = arr[..., 1:4]
    s = np.log(p) - gamma * np.log(rho)
    beta2 = rho / p
    v = np.empty_like(arr)
    v[..., 0] = (gamma - s) / (gamma - 1.0) - 0.5 * beta2 * np.sum(vel * vel, axis=-1)
    v[..., 1:4] = beta2[..., None] * vel
    v[..., 4] = -beta2
    v[..., 5:8] = beta2[..., None] * arr[..., 5:8]
    return v


def entropy_vars(cons: StateLike, gamma: float) -> np.ndarray:
    """Entropy variables of a conserved state."""
    return entropy_vars_prim(cons_to_prim(as_state_array(cons), gamma), gamma)


def entropy_quantities_prim(prim: StateLike, gamma: float) -> EntropyQuantities:
    """Entropy, entropy fluxes and entropy potentials from a primitive state."""
    arr = as_state_array(prim)
    rho, u, v, w, p = (arr[..., k] for k in range(5))
    mag = arr[..., 5:8]
    s = np.log(p) - gamma * np.log(rho)
    big_u = -rho * s / (gamma - 1.0)
    b_sq = np.sum(mag * mag, axis=-1)
    u_dot_b = u * mag[..., 0] + v * mag[..., 1] + w * mag[..., 2]
    potentials = [
        rho * vel + rho * vel * b_sq / (2.0 * p) - rho * mag[..., k] * u_dot_b / p
        for k, vel in enumerate((u, v, w))
    ]
    return EntropyQuantities(
        s=s,
        U=big_u,
        F=u * big_u,
        G=v * big_u,
        H=w * big_u,
        phi_x=potentials[0],
        phi_y=potentials[1],
        phi_z=potentials[2],
    )


def entropy_quantities(cons: StateLike, gamma: float) -> EntropyQuantities:
    """Entropy quantities of a conserved state."""
    return entropy_quantities_prim(cons_to_prim(as_state_array(cons), gamma), gamma)


def entropy_jacobian(prim: StateLike, gamma: float) -> np.ndarray:
    """
    Symmetric positive definite Jacobian H = dq/dv at a primitive state.

    Args:
        prim: Primitive state(s), shape (..., 8)
        gamma: Adiabatic index

    Returns:
        Array of shape (..., 8, 8)
    """
    arr = as_state_array(prim)
    rho, p = arr[..., 0], arr[..., 4]
    vel = [arr[..., 1], arr[..., 2], arr[..., 3]]
    mag = [arr[..., 5], arr[..., 6], arr[..., 7]]
    vel_sq = vel[0] ** 2 + vel[1] ** 2 + vel[2] ** 2
    b_sq = mag[0] ** 2 + mag[1] ** 2 + mag[2] ** 2
    a_sq = gamma * p / rho
    enthalpy = a_sq / (gamma - 1.0) + 0.5 * vel_sq
    gas_energy = p / (gamma - 1.0) + 0.5 * rho * vel_sq
    p_over_rho = p / rho

    jac = np.zeros(arr.shape[:-1] + (8, 8))
    jac[..., 0, 0] = rho
    jac[..., 0, 4] = jac[..., 4, 0] = gas_energy
    for i in range(3):
        jac[..., 0, i + 1] = jac[..., i + 1, 0] = rho * vel[i]
        jac[..., i + 1, 4] = jac[..., 4, i + 1] = rho * enthalpy * vel[i]
        for j in range(i, 3):
            jac[..., i + 1, j + 1] = jac[..., j + 1, i + 1] = rho * vel[i] * vel[j]
        jac[..., i + 1, i + 1] += p
        jac[..., 4, i + 5] = jac[..., i + 5, 4] = p_over_rho * mag[i]
        jac[..., i + 5, i + 5] = p_over_rho
    jac[..., 4, 4] = (
        rho * enthalpy**2 - a_sq * p / (gamma - 1.0) + a_sq * b_sq / gamma
    )
    return jac


def _physical_flux_x(arr: np.ndarray, gamma: float) -> np.ndarray:
    rho, u, v, w, p, b1, b2, b3 = (arr[..., k] for k in range(8))
    b_sq = b1 * b1 + b2 * b2 + b3 * b3
    u_dot_b = u * b1 + v * b2 + w * b3
    energy = p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v + w * w) + 0.5 * b_sq
    total_p = p + 0.5 * b_sq
    flux = np.empty_like(arr)
    flux[..., 0] = rho * u
    flux[..., 1] = rho * u * u + total_p - b1 * b1
    flux[..., 2] = rho * u * v - b1 * b2
    flux[..., 3] = rho * u * w - b1 * b3
    flux[..., 4] = u * (energy + total_p) - b1 * u_dot_b
    flux[..., 5] = 0.0
    flux[..., 6] = u * b2 - v * b1
    flux[..., 7] = u * b3 - w * b1
    return flux


def physical_flux(prim: StateLike, gamma: float, direction: Direction = Direction.X) -> np.ndarray:
    """Ideal MHD flux of a primitive state in the given direction."""
    arr = to_normal_frame(as_state_array(prim), direction)
    return to_normal_frame(_physical_flux_x(arr, gamma), direction)
