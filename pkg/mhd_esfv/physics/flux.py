"""
Entropy conservative interface fluxes and the matching magnetic source term.

The EC flux is built from means of the parameter vector z, the EKEC flux from
means of primitive variables and the inverse temperature beta = rho/(2p). Both
conserve entropy exactly when the cell update also receives the interface
source of ``janhunen_interface_source`` (or its beta-weighted twin).

Kernels work in the interface-normal frame and relabel back to the global
frame, see ``mhd_esfv.physics.state.to_normal_frame``.
"""
from typing import NamedTuple

import numpy as np

from mhd_esfv.models.state import Direction, PrimState, as_state_array
from mhd_esfv.physics.means import avg, jump, log_mean
from mhd_esfv.physics.state import param_vector, to_normal_frame


class ECAverages(NamedTuple):
    """Averaged quantities of the EC flux, in the interface-normal frame."""

    rho_hat: np.ndarray
    u1: np.ndarray
    v1: np.ndarray
    w1: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    u2: np.ndarray
    v2: np.ndarray
    w2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    B3: np.ndarray
    ring_B1: np.ndarray
    ring_B2: np.ndarray
    ring_B3: np.ndarray
    B1B2: np.ndarray
    B1B3: np.ndarray
    B2B3: np.ndarray


class BetaAverages(NamedTuple):
    """Inverse-temperature means used by the EKEC flux."""

    beta_left: np.ndarray
    beta_right: np.ndarray
    beta_avg: np.ndarray
    beta_ln: np.ndarray
    beta_u: np.ndarray
    beta_v: np.ndarray
    beta_w: np.ndarray


class InterfaceSource(NamedTuple):
    """
    Per-interface magnetic source contribution.

    ``values`` has the full eight rows (rows 1 to 5 are zero). ``degenerate``
    flags the magnetic rows that carry the bounded form because their field
    component changes sign (or vanishes) across the interface. ``unbalanced``
    marks interfaces whose entropy balance could not be restored on another
    row.
    """

    values: np.ndarray
    direction: Direction
    jump_b: np.ndarray
    degenerate: np.ndarray
    unbalanced: np.ndarray

    @property
    def s6(self) -> np.ndarray:
        return self.values[..., 5]

    @property
    def s7(self) -> np.ndarray:
        return self.values[..., 6]

    @property
    def s8(self) -> np.ndarray:
        return self.values[..., 7]

    @property
    def degenerate_count(self) -> int:
        return int(np.count_nonzero(self.degenerate))

    @property
    def unbalanced_count(self) -> int:
        return int(np.count_nonzero(self.unbalanced))


def _ec_averages_normal(left: np.ndarray, right: np.ndarray, gamma: float) -> ECAverages:
    zl = param_vector(left)
    zr = param_vector(right)

    z1_avg = avg(zl.z1, zr.z1)
    z5_avg = avg(zl.z5, zr.z5)
    z1_ln = log_mean(zl.z1, zr.z1)
    z5_ln = log_mean(zl.z5, zr.z5)
    z1_sq_avg = avg(zl.z1 * zl.z1, zr.z1 * zr.z1)

    return ECAverages(
        rho_hat=z1_avg * z5_ln,
        u1=avg(zl.z2, zr.z2) / z1_avg,
        v1=avg(zl.z3, zr.z3) / z1_avg,
        w1=avg(zl.z4, zr.z4) / z1_avg,
        p1=z5_avg / z1_avg,
        p2=((gamma + 1.0) / (2.0 * gamma)) * (z5_ln / z1_ln)
        + ((gamma - 1.0) / (2.0 * gamma)) * (z5_avg / z1_avg),
        u2=avg(zl.z1 * zl.z2, zr.z1 * zr.z2) / z1_sq_avg,
        v2=avg(zl.z1 * zl.z3, zr.z1 * zr.z3) / z1_sq_avg,
        w2=avg(zl.z1 * zl.z4, zr.z1 * zr.z4) / z1_sq_avg,
        B1=avg(zl.z6, zr.z6),
        B2=avg(zl.z7, zr.z7),
        B3=avg(zl.z8, zr.z8),
        ring_B1=avg(zl.z6 * zl.z6, zr.z6 * zr.z6),
        ring_B2=avg(zl.z7 * zl.z7, zr.z7 * zr.z7),
        ring_B3=avg(zl.z8 * zl.z8, zr.z8 * zr.z8),
        B1B2=avg(zl.z6 * zl.z7, zr.z6 * zr.z7),
        B1B3=avg(zl.z6 * zl.z8, zr.z6 * zr.z8),
        B2B3=avg(zl.z7 * zl.z8, zr.z7 * zr.z8),
    )


def ec_averages(
    left: "np.ndarray | PrimState",
    right: "np.ndarray | PrimState",
    gamma: float,
    direction: Direction = Direction.X,
) -> ECAverages:
    """Averaged quantities of the EC flux across an interface normal to ``direction``."""
    return _ec_averages_normal(
        to_normal_frame(as_state_array(left), direction),
        to_normal_frame(as_state_array(right), direction),
        gamma,
    )


def _ec_flux_normal(left: np.ndarray, right: np.ndarray, gamma: float) -> np.ndarray:
    a = _ec_averages_normal(left, right, gamma)
    mass = a.rho_hat * a.u1
    flux = np.empty(np.broadcast(left, right).shape)
    flux[..., 0] = mass
    flux[..., 1] = a.p1 + mass * a.u1 + 0.5 * (a.ring_B1 + a.ring_B2 + a.ring_B3) - a.ring_B1
    flux[..., 2] = mass * a.v1 - a.B1B2
    flux[..., 3] = mass * a.w1 - a.B1B3
    flux[..., 5] = 0.0
    flux[..., 6] = a.u2 * a.B2 - a.v2 * a.B1
    flux[..., 7] = a.u2 * a.B3 - a.w2 * a.B1
    flux[..., 4] = (
        gamma / (gamma - 1.0) * a.u1 * a.p2
        + 0.5 * mass * (a.u1 * a.u1 + a.v1 * a.v1 + a.w1 * a.w1)
        + a.B2 * flux[..., 6]
        + a.B3 * flux[..., 7]
    )
    return flux


def ec_flux(
    left: "np.ndarray | PrimState",
    right: "np.ndarray | PrimState",
    gamma: float,
    direction: Direction = Direction.X,
) -> np.ndarray:
    """
    Entropy conservative flux between two primitive states.

    Args:
        left: Primitive state(s) on the low side of the interface
        right: Primitive state(s) on the high side
        gamma: Adiabatic index
        direction: Interface normal

    Returns:
        Flux array of shape (..., 8) in global component order
    """
    left_n = to_normal_frame(as_state_array(left), direction)
    right_n = to_normal_frame(as_state_array(right), direction)
    return to_normal_frame(_ec_flux_normal(left_n, right_n, gamma), direction)


def beta_averages(left: np.ndarray, right: np.ndarray) -> BetaAverages:
    """Means of beta = rho/(2p) and of beta-weighted velocities."""
    left = as_state_array(left)
    right = as_state_array(right)
    beta_l = left[..., 0] / (2.0 * left[..., 4])
    beta_r = right[..., 0] / (2.0 * right[..., 4])
    return BetaAverages(
        beta_left=beta_l,
        beta_right=beta_r,
        beta_avg=avg(beta_l, beta_r),
        beta_ln=log_mean(beta_l, beta_r),
        beta_u=avg(beta_l * left[..., 1], beta_r * right[..., 1]),
        beta_v=avg(beta_l * left[..., 2], beta_r * right[..., 2]),
        beta_w=avg(beta_l * left[..., 3], beta_r * right[..., 3]),
    )


def _ekec_flux_normal(left: np.ndarray, right: np.ndarray, gamma: float) -> np.ndarray:
    b = beta_averages(left, right)
    rho_ln = log_mean(left[..., 0], right[..., 0])
    rho_avg = avg(left[..., 0], right[..., 0])
    u, v, w = (avg(left[..., k], right[..., k]) for k in (1, 2, 3))
    sq_avg = [avg(left[..., k] ** 2, right[..., k] ** 2) for k in (1, 2, 3)]
    mag_avg = [avg(left[..., k], right[..., k]) for k in (5, 6, 7)]
    mag_sq = [avg(left[..., k] ** 2, right[..., k] ** 2) for k in (5, 6, 7)]
    b1b2 = avg(left[..., 5] * left[..., 6], right[..., 5] * right[..., 6])
    b1b3 = avg(left[..., 5] * left[..., 7], right[..., 5] * right[..., 7])

    mass = rho_ln * u
    p_tilde = rho_avg / (2.0 * b.beta_avg)
    flux = np.empty(np.broadcast(left, right).shape)
    flux[..., 0] = mass
    flux[..., 1] = mass * u + p_tilde + 0.5 * (mag_sq[0] + mag_sq[1] + mag_sq[2]) - mag_sq[0]
    flux[..., 2] = mass * v - b1b2
    flux[..., 3] = mass * w - b1b3
    flux[..., 5] = 0.0
    flux[..., 6] = (b.beta_u * mag_avg[1] - b.beta_v * mag_avg[0]) / b.beta_avg
    flux[..., 7] = (b.beta_u * mag_avg[2] - b.beta_w * mag_avg[0]) / b.beta_avg
    flux[..., 4] = (
        mass / (2.0 * (gamma - 1.0) * b.beta_ln)
        + rho_avg * u / (2.0 * b.beta_avg)
        - 0.5 * mass * (sq_avg[0] + sq_avg[1] + sq_avg[2])
        + mass * (u * u + v * v + w * w)
        + mag_avg[1] * flux[..., 6]
        + mag_avg[2] * flux[..., 7]
    )
    return flux


def ekec_flux(
    left: "np.ndarray | PrimState",
    right: "np.ndarray | PrimState",
    gamma: float,
    direction: Direction = Direction.X,
) -> np.ndarray:
    """Entropy and kinetic energy conservative flux between two primitive states."""
    left_n = to_normal_frame(as_state_array(left), direction)
    right_n = to_normal_frame(as_state_array(right), direction)
    return to_normal_frame(_ekec_flux_normal(left_n, right_n, gamma), direction)


def _assemble_source(
    jump_b: np.ndarray,
    numerators: list[np.ndarray],
    left_parts: list[np.ndarray],
    right_parts: list[np.ndarray],
    bounded: list[np.ndarray],
    direction: Direction,
) -> InterfaceSource:
    """
    Combine the per-row pieces into one InterfaceSource.

    Row k contracts with the width-weighted entropy variables to
    ``-jump_b * numerators[k]``. That needs the division by
    avg(left_parts[k], right_parts[k]), which is only bounded when both parts
    share a sign. Other rows take ``-jump_b * bounded[k]`` and the entropy they
    miss is added to the same-sign row with the largest denominator, provided
    that row is at least as strong as the rows it covers for.
    """
    jump_b = np.asarray(jump_b, dtype=np.float64)
    lp = np.stack(left_parts, axis=-1)
    rp = np.stack(right_parts, axis=-1)
    denoms = avg(lp, rp)
    target = -jump_b[..., None] * np.stack(numerators, axis=-1)
    exact = lp * rp > 0.0
    rows = np.where(
        exact,
        target / np.where(exact, denoms, 1.0),
        -jump_b[..., None] * np.stack(bounded, axis=-1),
    )

    residual = np.sum(np.where(exact, 0.0, target - rows * denoms), axis=-1)
    strength = np.where(exact, np.abs(denoms), 0.0)
    host = np.argmax(strength, axis=-1)[..., None]
    host_strength = np.take_along_axis(strength, host, axis=-1)[..., 0]
    needed = np.max(np.where(exact, 0.0, np.maximum(np.abs(lp), np.abs(rp))), axis=-1)
    absorbs = (residual != 0.0) & (host_strength > 0.0) & (host_strength >= needed)
    host_denom = np.take_along_axis(denoms, host, axis=-1)[..., 0]
    shift = np.where(absorbs, residual / np.where(absorbs, host_denom, 1.0), 0.0)
    np.put_along_axis(
        rows, host, np.take_along_axis(rows, host, axis=-1) + shift[..., None], axis=-1
    )

    values = np.zeros(jump_b.shape + (8,))
    values[..., 5:] = rows
    # a zero bounded value makes the row exactly zero
    degenerate = ~exact & (jump_b[..., None] != 0.0) & (np.stack(bounded, axis=-1) != 0.0)
    unbalanced = (residual != 0.0) & ~absorbs
    return InterfaceSource(values, Direction(direction), jump_b, degenerate, unbalanced)


def janhunen_interface_source(
    left: "np.ndarray | PrimState",
    right: "np.ndarray | PrimState",
    dx_left: "float | np.ndarray",
    dx_right: "float | np.ndarray",
    gamma: float,
    direction: Direction = Direction.X,
) -> InterfaceSource:
    """
    Interface contribution of the divergence source on the induction rows.

    Row k (k = 1, 2, 3) equals
    -[[B_d]] <z1 z_{k+1}> <z_{k+5}> / <dx z1^2 z_{k+5}>, where B_d is the field
    component normal to the interface and each side's average weight is its
    own cell width. Each cell receives half the sum of its two interface
    contributions.

    A row whose field component changes sign across the interface uses
    -[[B_d]] <z1 z_{k+1}> / <dx z1^2> instead, which stays bounded; the
    entropy this form misses is moved onto a row with a same-sign field.

    Args:
        left: Primitive state(s) on the low side
        right: Primitive state(s) on the high side
        dx_left: Width of the low-side cell(s) normal to the interface
        dx_right: Width of the high-side cell(s)
        gamma: Adiabatic index, unused by this discretization
        direction: Interface normal

    Returns:
        InterfaceSource with rows 1 to 5 zero
    """
    left = as_state_array(left)
    right = as_state_array(right)
    d = Direction(direction)
    zl = param_vector(left)
    zr = param_vector(right)
    jump_b = jump(left[..., 5 + d], right[..., 5 + d])
    vel_l = (zl.z2, zl.z3, zl.z4)
    vel_r = (zr.z2, zr.z3, zr.z4)
    mag_l = (zl.z6, zl.z7, zl.z8)
    mag_r = (zr.z6, zr.z7, zr.z8)
    w_l = dx_left * zl.z1 * zl.z1
    w_r = dx_right * zr.z1 * zr.z1
    vel_means = [avg(zl.z1 * vel_l[k], zr.z1 * vel_r[k]) for k in range(3)]
    return _assemble_source(
        jump_b,
        [vel_means[k] * avg(mag_l[k], mag_r[k]) for k in range(3)],
        [w_l * mag_l[k] for k in range(3)],
        [w_r * mag_r[k] for k in range(3)],
        [vel_means[k] / avg(w_l, w_r) for k in range(3)],
        d,
    )


def janhunen_interface_source_beta(
    left: "np.ndarray | PrimState",
    right: "np.ndarray | PrimState",
    dx_left: "float | np.ndarray",
    dx_right: "float | np.ndarray",
    gamma: float,
    direction: Direction = Direction.X,
) -> InterfaceSource:
    """Beta-weighted form of the interface source, paired with the EKEC flux."""
    left = as_state_array(left)
    right = as_state_array(right)
    d = Direction(direction)
    b = beta_averages(left, right)
    jump_b = jump(left[..., 5 + d], right[..., 5 + d])
    beta_vel = (b.beta_u, b.beta_v, b.beta_w)
    numerators = [beta_vel[k] * avg(left[..., 5 + k], right[..., 5 + k]) for k in range(3)]
    weight = avg(dx_left * b.beta_left, dx_right * b.beta_right)
    return _assemble_source(
        jump_b,
        numerators,
        [dx_left * b.beta_left * left[..., 5 + k] for k in range(3)],
        [dx_right * b.beta_right * right[..., 5 + k] for k in range(3)],
        [beta_vel[k] / weight for k in range(3)],
        d,
    )
