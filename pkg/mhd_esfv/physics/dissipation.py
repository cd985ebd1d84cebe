"""
Eigenstructure of the divergence-augmented MHD system and entropy stable fluxes.

The right eigenvectors are scaled so that the entropy Jacobian factorizes as
H = R S R^T with a diagonal S. Dissipation added to the EC flux is then a
non-negative combination of the scaled characteristic jumps of the entropy
variables, which makes every interface entropy stable.

Alfven columns are written with the normalized tangential field beta instead
of b; their scaling entry absorbs the factor b_perp^2, which keeps them finite
when the tangential field vanishes.
"""
from typing import NamedTuple

import numpy as np

from mhd_esfv.models.state import Direction, PrimState, as_state_array
from mhd_esfv.physics.flux import ec_flux
from mhd_esfv.physics.means import avg, jump
from mhd_esfv.physics.state import (
    entropy_jacobian,
    entropy_vars_prim,
    permutation,
    to_normal_frame,
)

DEGENERATE_BPERP_TOL = 1e-12
ALPHA_DENOM_FLOOR = 1e-14

# Column order of the eigensystem.
WAVE_ORDER = ("-f", "-a", "-s", "E", "D", "+s", "+a", "+f")


class WaveSpeeds(NamedTuple):
    """Characteristic speeds for one direction; ``b`` is B/sqrt(rho) in the global frame."""

    a: np.ndarray
    c_a: np.ndarray
    c_f: np.ndarray
    c_s: np.ndarray
    b: np.ndarray
    b_perp: np.ndarray


class EigenSystem(NamedTuple):
    """Eigenvalues, scaled right eigenvectors (columns) and diagonal scaling."""

    eigenvalues: np.ndarray
    rhat: np.ndarray
    scaling: np.ndarray
    alpha_f: np.ndarray
    alpha_s: np.ndarray
    beta_t: np.ndarray


def _wave_speeds_normal(prim: np.ndarray, gamma: float) -> WaveSpeeds:
    rho, p = prim[..., 0], prim[..., 4]
    b = prim[..., 5:8] / np.sqrt(rho)[..., None]
    a_sq = gamma * p / rho
    b_sq = np.sum(b * b, axis=-1)
    b1_sq = b[..., 0] ** 2
    disc = np.maximum((a_sq + b_sq) ** 2 - 4.0 * a_sq * b1_sq, 0.0)
    cf_sq = 0.5 * (a_sq + b_sq + np.sqrt(disc))
    # c_f^2 c_s^2 = a^2 b1^2; this form of the slow root avoids cancellation
    cs_sq = a_sq * b1_sq / cf_sq
    return WaveSpeeds(
        a=np.sqrt(a_sq),
        c_a=np.abs(b[..., 0]),
        c_f=np.sqrt(cf_sq),
        c_s=np.sqrt(cs_sq),
        b=b,
        b_perp=np.sqrt(b[..., 1] ** 2 + b[..., 2] ** 2),
    )


def wave_speeds(
    prim: "np.ndarray | PrimState", gamma: float, direction: Direction = Direction.X
) -> WaveSpeeds:
    """Sound, Alfven, fast and slow speeds of a primitive state along ``direction``."""
    arr = as_state_array(prim)
    speeds = _wave_speeds_normal(to_normal_frame(arr, direction), gamma)
    return speeds._replace(b=arr[..., 5:8] / np.sqrt(arr[..., 0])[..., None])


def _eigen_system_normal(prim: np.ndarray, gamma: float) -> EigenSystem:
    rho, u, v, w, p = (prim[..., k] for k in range(5))
    ws = _wave_speeds_normal(prim, gamma)
    a, c_f, c_s, c_a = ws.a, ws.c_f, ws.c_s, ws.c_a
    b = ws.b
    b_perp = ws.b_perp
    sqrt_rho = np.sqrt(rho)
    rho_32 = rho * sqrt_rho
    a_sq = a * a

    b_norm = np.sqrt(np.sum(b * b, axis=-1))
    degenerate = b_perp <= DEGENERATE_BPERP_TOL * b_norm
    safe_perp = np.where(degenerate, 1.0, b_perp)
    beta2 = np.where(degenerate, 1.0 / np.sqrt(2.0), b[..., 1] / safe_perp)
    beta3 = np.where(degenerate, 1.0 / np.sqrt(2.0), b[..., 2] / safe_perp)
    sgn = np.where(b[..., 0] >= 0.0, 1.0, -1.0)

    denom = np.maximum(c_f * c_f - c_s * c_s, ALPHA_DENOM_FLOOR)
    alpha_f_sq = np.maximum(a_sq - c_s * c_s, 0.0) / denom
    alpha_s_sq = np.maximum(c_f * c_f - a_sq, 0.0) / denom
    total = alpha_f_sq + alpha_s_sq
    split = total == 0.0
    total = np.where(split, 1.0, total)
    alpha_f = np.where(split, np.sqrt(0.5), np.sqrt(alpha_f_sq / total))
    alpha_s = np.where(split, np.sqrt(0.5), np.sqrt(alpha_s_sq / total))

    vel_sq = u * u + v * v + w * w
    tang = v * beta2 + w * beta3
    enth = a_sq / (gamma - 1.0)

    rhat = np.zeros(prim.shape[:-1] + (8, 8))

    # entropy wave
    rhat[..., 0, 3] = 1.0
    rhat[..., 1, 3] = u
    rhat[..., 2, 3] = v
    rhat[..., 3, 3] = w
    rhat[..., 4, 3] = 0.5 * vel_sq

    # divergence wave
    rhat[..., 4, 4] = prim[..., 5]
    rhat[..., 5, 4] = 1.0

    # Alfven columns carry sgn(b1) so that column +a belongs to u + c_a
    for col, sign in ((1, -1.0), (6, 1.0)):
        rhat[..., 2, col] = sign * sgn * rho_32 * beta3
        rhat[..., 3, col] = -sign * sgn * rho_32 * beta2
        rhat[..., 4, col] = sign * sgn * rho_32 * (beta3 * v - beta2 * w)
        rhat[..., 6, col] = -rho * beta3
        rhat[..., 7, col] = rho * beta2

    for col, sign in ((0, -1.0), (7, 1.0)):
        rhat[..., 0, col] = alpha_f * rho
        rhat[..., 1, col] = alpha_f * rho * (u + sign * c_f)
        rhat[..., 2, col] = rho * (alpha_f * v - sign * alpha_s * c_s * beta2 * sgn)
        rhat[..., 3, col] = rho * (alpha_f * w - sign * alpha_s * c_s * beta3 * sgn)
        rhat[..., 4, col] = (
            0.5 * alpha_f * rho * vel_sq
            + a * alpha_s * rho * b_perp
            + alpha_f * rho * enth
            + sign * alpha_f * c_f * rho * u
            - sign * alpha_s * c_s * rho * sgn * tang
        )
        rhat[..., 6, col] = alpha_s * a * beta2 * sqrt_rho
        rhat[..., 7, col] = alpha_s * a * beta3 * sqrt_rho

    for col, sign in ((2, -1.0), (5, 1.0)):
        rhat[..., 0, col] = alpha_s * rho
        rhat[..., 1, col] = alpha_s * rho * (u + sign * c_s)
        rhat[..., 2, col] = rho * (alpha_s * v + sign * alpha_f * c_f * beta2 * sgn)
        rhat[..., 3, col] = rho * (alpha_s * w + sign * alpha_f * c_f * beta3 * sgn)
        rhat[..., 4, col] = (
            0.5 * alpha_s * rho * vel_sq
            - a * alpha_f * rho * b_perp
            + alpha_s * rho * enth
            + sign * alpha_s * c_s * rho * u
            + sign * alpha_f * c_f * rho * sgn * tang
        )
        rhat[..., 6, col] = -alpha_f * a * beta2 * sqrt_rho
        rhat[..., 7, col] = -alpha_f * a * beta3 * sqrt_rho

    magneto = 1.0 / (2.0 * rho * gamma)
    alfven = p / (2.0 * rho**3)
    scaling = np.stack(
        [magneto, alfven, magneto, rho * (gamma - 1.0) / gamma, p / rho, magneto, alfven, magneto],
        axis=-1,
    )
    eigenvalues = np.stack(
        [u - c_f, u - c_a, u - c_s, u, u, u + c_s, u + c_a, u + c_f], axis=-1
    )
    return EigenSystem(
        eigenvalues=eigenvalues,
        rhat=rhat,
        scaling=scaling,
        alpha_f=alpha_f,
        alpha_s=alpha_s,
        beta_t=np.stack([beta2, beta3], axis=-1),
    )


def eigen_system(
    prim: "np.ndarray | PrimState", gamma: float, direction: Direction = Direction.X
) -> EigenSystem:
    """
    Scaled eigensystem of the divergence-augmented flux Jacobian.

    Columns are ordered (-f, -a, -s, E, D, +s, +a, +f). Rows of ``rhat`` are
    conserved components in global order.

    Args:
        prim: Primitive state(s), shape (..., 8)
        gamma: Adiabatic index
        direction: Wave propagation direction

    Returns:
        EigenSystem satisfying H = rhat @ diag(scaling) @ rhat.T
    """
    system = _eigen_system_normal(to_normal_frame(as_state_array(prim), direction), gamma)
    if direction == Direction.X:
        return system
    return system._replace(rhat=system.rhat[..., permutation(direction), :])


def _matvec(mat: np.ndarray, vec: np.ndarray) -> np.ndarray:
    out = mat[..., :, 0] * vec[..., 0, None]
    for k in range(1, 8):
        out = out + mat[..., :, k] * vec[..., k, None]
    return out


def _rmatvec(mat: np.ndarray, vec: np.ndarray) -> np.ndarray:
    out = mat[..., 0, :] * vec[..., 0, None]
    for k in range(1, 8):
        out = out + mat[..., k, :] * vec[..., k, None]
    return out


def roe_dissipation(
    left: np.ndarray, right: np.ndarray, gamma: float, direction: Direction = Direction.X
) -> np.ndarray:
    """R |Lambda| S R^T [[v]] at the arithmetic mean of the primitive states."""
    left = as_state_array(left)
    right = as_state_array(right)
    system = eigen_system(avg(left, right), gamma, direction)
    dv = jump(entropy_vars_prim(left, gamma), entropy_vars_prim(right, gamma))
    weights = _rmatvec(system.rhat, dv) * np.abs(system.eigenvalues) * system.scaling
    return _matvec(system.rhat, weights)


def es_roe_flux(
    left: "np.ndarray | PrimState",
    right: "np.ndarray | PrimState",
    gamma: float,
    direction: Direction = Direction.X,
) -> np.ndarray:
    """Entropy stable flux with matrix (Roe type) dissipation."""
    return ec_flux(left, right, gamma, direction) - 0.5 * roe_dissipation(
        left, right, gamma, direction
    )


def llf_dissipation(
    left: np.ndarray, right: np.ndarray, gamma: float, direction: Direction = Direction.X
) -> np.ndarray:
    """lambda_max H [[v]] at the arithmetic mean of the primitive states."""
    left = as_state_array(left)
    right = as_state_array(right)
    mean = avg(left, right)
    speeds = wave_speeds(mean, gamma, direction)
    lam_max = np.abs(mean[..., 1 + Direction(direction)]) + speeds.c_f
    dv = jump(entropy_vars_prim(left, gamma), entropy_vars_prim(right, gamma))
    return lam_max[..., None] * _matvec(entropy_jacobian(mean, gamma), dv)


def es_llf_flux(
    left: "np.ndarray | PrimState",
    right: "np.ndarray | PrimState",
    gamma: float,
    direction: Direction = Direction.X,
) -> np.ndarray:
    """Entropy stable flux with scalar (local Lax-Friedrichs type) dissipation."""
    return ec_flux(left, right, gamma, direction) - 0.5 * llf_dissipation(
        left, right, gamma, direction
    )
