"""Bessel and Hankel functions of the first kind for complex arguments.

All functions accept a Python scalar or a numpy array of any shape and return
the same kind. Values come from the ascending power series, summed with
compensated (Kahan) summation, and are validated for ``|w| <= 50``.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from scatpoles.constants import (
    BESSEL_MAX_ARGUMENT,
    BRANCH_CUT_ANGLE_TOL,
    EULER_GAMMA,
    HANKEL_MAX_ORDER,
    RECURRENCE_GROWTH_LIMIT,
    SERIES_MAX_TERMS,
    SERIES_TOL,
)
from scatpoles.utils import raise_value_error

ComplexLike = Union[complex, float, np.ndarray]


class SpecialFunctionDomainError(ValueError):
    """Argument outside the validated range, at the origin or on the branch cut."""


class RecurrenceAccuracyWarning(RuntimeWarning):
    """Forward recurrence grew so much that the J component lost its digits."""


@dataclass(frozen=True)
class SpecFunConfig:
    """Truncation controls for the ascending series.

    Args:
        series_tol (float): Stop once a term is below ``series_tol`` times the running sum.
        max_terms (int): Hard cap on the number of terms.
    """

    series_tol: float = SERIES_TOL
    max_terms: int = SERIES_MAX_TERMS

    def __post_init__(self):
        if not 0 < self.series_tol < 1e-8:
            raise_value_error(f"SpecFunConfig: series_tol must lie in (0, 1e-8), got {self.series_tol}")
        if self.max_terms < 50:
            raise_value_error(f"SpecFunConfig: max_terms must be >= 50, got {self.max_terms}")


DEFAULT_SPECFUN_CONFIG = SpecFunConfig()


def _as_complex(w: ComplexLike) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(w, dtype=np.complex128)
    return arr, arr.ndim == 0


def _finish(values: np.ndarray, scalar: bool):
    return complex(values) if scalar else values


def _check_order(order: int, allowed_max: Optional[int] = None) -> None:
    if int(order) != order or order < 0:
        raise_value_error(f"bessel: order must be a non-negative integer, got {order}")
    if allowed_max is not None and order > allowed_max:
        raise_value_error(f"bessel: order must be <= {allowed_max}, got {order}")


def _check_range(w: np.ndarray) -> None:
    if np.any(np.abs(w) > BESSEL_MAX_ARGUMENT):
        raise SpecialFunctionDomainError(
            f"bessel: |w| = {np.max(np.abs(w)):.6g} exceeds the validated range {BESSEL_MAX_ARGUMENT}"
        )


def _check_off_cut(w: np.ndarray) -> None:
    if np.any(w == 0):
        raise SpecialFunctionDomainError("bessel: Y and H are singular at w = 0")
    if np.any(np.abs(np.angle(w)) > math.pi - BRANCH_CUT_ANGLE_TOL):
        raise SpecialFunctionDomainError("bessel: argument lies on the branch cut along the negative real axis")


def _kahan_add(total: np.ndarray, comp: np.ndarray, term: np.ndarray):
    y = term - comp
    t = total + y
    return t, (t - total) - y


def _j_series(order: int, w: np.ndarray, config: SpecFunConfig) -> np.ndarray:
    half = w / 2.0
    q = -(half * half)
    term = half**order / math.factorial(order)
    total = term.copy()
    comp = np.zeros_like(total)
    for k in range(1, config.max_terms):
        term = term * q / (k * (order + k))
        total, comp = _kahan_add(total, comp, term)
        decreasing = np.abs(q) < k * (order + k)
        if np.all(decreasing & (np.abs(term) <= config.series_tol * np.abs(total))):
            break
    return total


def _y_series(order: int, w: np.ndarray, j: np.ndarray, config: SpecFunConfig) -> np.ndarray:
    # sum over k of weight_k * t_k with t_k the k-th J term;
    # weight H_k (order 0) or (H_k + H_{k+1}) / 2 (order 1)
    half = w / 2.0
    q = -(half * half)
    term = half**order / math.factorial(order)
    harmonic = 0.0
    if order == 0:
        total = np.zeros_like(term)
    else:
        total = 0.5 * term  # k = 0: (H_0 + H_1) / 2 = 1/2
    comp = np.zeros_like(total)
    for k in range(1, config.max_terms):
        term = term * q / (k * (order + k))
        harmonic += 1.0 / k
        weight = harmonic if order == 0 else harmonic + 0.5 / (k + 1)
        total, comp = _kahan_add(total, comp, weight * term)
        decreasing = np.abs(q) < k * (order + k)
        if np.all(decreasing & (weight * np.abs(term) <= config.series_tol * np.abs(total))):
            break
    log_part = (np.log(half) + EULER_GAMMA) * j
    if order == 0:
        return (2.0 / math.pi) * (log_part - total)
    return (2.0 / math.pi) * (log_part - total) - 2.0 / (math.pi * w)


def bessel_j(order: int, w: ComplexLike, config: Optional[SpecFunConfig] = None) -> ComplexLike:
    """Bessel function of the first kind J_order(w).

    Args:
        order (int): Non-negative integer order.
        w (complex | np.ndarray): Argument(s), ``|w| <= 50``.
        config (SpecFunConfig, optional): Series controls. Defaults to module defaults.

    Examples:
        >>> bessel_j(0, 0.0)
        (1+0j)
    """
    config = config or DEFAULT_SPECFUN_CONFIG
    _check_order(order)
    arr, scalar = _as_complex(w)
    _check_range(arr)
    return _finish(_j_series(int(order), arr, config), scalar)


def bessel_jy(order: int, w: ComplexLike, config: Optional[SpecFunConfig] = None):
    """Return the pair (J_order(w), Y_order(w)) for order 0 or 1 sharing one validation pass."""
    config = config or DEFAULT_SPECFUN_CONFIG
    if order not in (0, 1):
        raise_value_error(f"bessel_y: order must be 0 or 1, got {order}")
    arr, scalar = _as_complex(w)
    _check_range(arr)
    _check_off_cut(arr)
    j = _j_series(order, arr, config)
    y = _y_series(order, arr, j, config)
    return _finish(j, scalar), _finish(y, scalar)


def bessel_y(order: int, w: ComplexLike, config: Optional[SpecFunConfig] = None) -> ComplexLike:
    """Bessel function of the second kind Y_order(w), order 0 or 1, principal branch."""
    return bessel_jy(order, w, config)[1]


def hankel1(order: int, w: ComplexLike, config: Optional[SpecFunConfig] = None) -> ComplexLike:
    """Hankel function of the first kind H_order^(1)(w) = J + iY, order 0 or 1."""
    j, y = bessel_jy(order, w, config)
    return j + 1j * y


def _hankel_pair(order: int, w: ComplexLike, config: Optional[SpecFunConfig]):
    """Forward recurrence; returns (H_{order-1}, H_order) and H_0 for the growth check."""
    h0 = hankel1(0, w, config)
    h1 = hankel1(1, w, config)
    prev, cur = h0, h1
    for k in range(1, order):
        prev, cur = cur, (2.0 * k / w) * cur - prev
    if order == 0:
        return None, h0, h0
    return prev, cur, h0


def _warn_growth(order: int, h: ComplexLike, h0: ComplexLike) -> None:
    if np.any(np.abs(h) > RECURRENCE_GROWTH_LIMIT * np.abs(h0)):
        warnings.warn(
            f"hankel1_int: |H_{order}| exceeds {RECURRENCE_GROWTH_LIMIT:g} |H_0|; J component may be inaccurate",
            RecurrenceAccuracyWarning,
            stacklevel=3,
        )


def hankel1_int(order: int, w: ComplexLike, config: Optional[SpecFunConfig] = None) -> ComplexLike:
    """H_order^(1)(w) for integer order <= 40 by forward recurrence from H_0 and H_1.

    Emits a ``RecurrenceAccuracyWarning`` when ``|H_order|`` has grown past
    ``1e12 |H_0|``.
    """
    _check_order(order, HANKEL_MAX_ORDER)
    _, h, h0 = _hankel_pair(int(order), w, config)
    _warn_growth(order, h, h0)
    return h


def hankel1_int_derivative(order: int, w: ComplexLike, config: Optional[SpecFunConfig] = None) -> ComplexLike:
    """d/dw H_order^(1)(w) = H_{order-1}^(1)(w) - (order / w) H_order^(1)(w), order >= 1."""
    _check_order(order, HANKEL_MAX_ORDER)
    if order < 1:
        raise_value_error("hankel1_int_derivative: order must be >= 1")
    prev, h, h0 = _hankel_pair(int(order), w, config)
    _warn_growth(order, h, h0)
    return prev - order * h / w
