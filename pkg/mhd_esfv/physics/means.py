"""
Interface averaging operators: jump, arithmetic mean and logarithmic mean.

All three accept scalars or broadcastable arrays and act elementwise.
"""
from typing import Union

import numpy as np

from mhd_esfv.core.exceptions import NonPositiveInput

ArrayLike = Union[float, np.ndarray]

# Series branch is taken for f^2 below this value, f = (aL - aR)/(aL + aR).
LOG_MEAN_SERIES_THRESHOLD = 1e-2


def jump(a_left: ArrayLike, a_right: ArrayLike) -> np.ndarray:
    """Right value minus left value."""
    return np.subtract(a_right, a_left)


def avg(a_left: ArrayLike, a_right: ArrayLike) -> np.ndarray:
    """Arithmetic mean of the two sides."""
    return 0.5 * np.add(a_left, a_right)


def log_mean(a_left: ArrayLike, a_right: ArrayLike) -> np.ndarray:
    """
    Logarithmic mean (aL - aR)/(ln aL - ln aR), evaluated without cancellation.

    With f = (aL - aR)/(aL + aR) the mean equals (aL + aR)/(2 F) where
    F = ln(aL/aR)/(2 f) = atanh(f)/f. Near equal arguments F is replaced by
    its odd-power series in f, truncated past the f^12 term so the result keeps
    close to machine precision across the whole series branch.

    Args:
        a_left: Positive left values
        a_right: Positive right values

    Returns:
        Elementwise logarithmic mean, a numpy scalar for scalar inputs

    Raises:
        NonPositiveInput: If any argument is not strictly positive
    """
    a_left = np.asarray(a_left, dtype=np.float64)
    a_right = np.asarray(a_right, dtype=np.float64)
    if np.any(~(a_left > 0.0)) or np.any(~(a_right > 0.0)):
        raise NonPositiveInput("logarithmic mean requires strictly positive arguments")

    total = a_left + a_right
    f = (a_left - a_right) / total
    u = f * f
    series = 1.0 + u * (
        1.0 / 3.0
        + u * (1.0 / 5.0 + u * (1.0 / 7.0 + u * (1.0 / 9.0 + u * (1.0 / 11.0 + u / 13.0))))
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = np.log(a_left / a_right) / (2.0 * f)
    big_f = np.where(u < LOG_MEAN_SERIES_THRESHOLD, series, closed)
    return (total / (2.0 * big_f))[()]
