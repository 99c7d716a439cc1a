"""Resolvent-integral spectral indicator of a dense matrix."""

from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np
import scipy.linalg

from scatpoles.constants import INDICATOR_NODES, INDICATOR_RADIUS
from scatpoles.operators.galerkin import OperatorMatrix
from scatpoles.utils import raise_numerical_error, raise_value_error

MatrixLike = Union[OperatorMatrix, np.ndarray]


@dataclass(frozen=True)
class Contour:
    """Circle center + radius e^{i theta_j}, theta_j = pi j / m, j = 0..2m-1."""

    center: complex = 0j
    radius: float = INDICATOR_RADIUS
    m: int = INDICATOR_NODES

    def __post_init__(self):
        if not self.radius > 0:
            raise_value_error(f"Contour: radius must be positive, got {self.radius}")
        if self.m < 4:
            raise_value_error(f"Contour: m must be >= 4, got {self.m}")

    def offsets(self) -> np.ndarray:
        """radius e^{i theta_j}."""
        theta = np.pi * np.arange(2 * self.m) / self.m
        return self.radius * np.exp(1j * theta)

    def nodes(self) -> np.ndarray:
        return self.center + self.offsets()

    def weights(self) -> np.ndarray:
        """Trapezoid weights of (1 / 2 pi i) closed integral dz: radius e^{i theta_j} / 2m."""
        return self.offsets() / (2 * self.m)


def _entries(w: MatrixLike) -> np.ndarray:
    entries = w.entries if isinstance(w, OperatorMatrix) else np.asarray(w)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise_value_error(f"rim_indicator: expected a square matrix, got shape {entries.shape}")
    return entries


def factor_shifts(entries: np.ndarray, nodes: np.ndarray) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Pivoted LU of (z_j I - W) for every node; raises NumericalError on a zero pivot."""
    eye = np.eye(entries.shape[0])
    factors = []
    for z in nodes:
        lu, piv = scipy.linalg.lu_factor(z * eye - entries, check_finite=False)
        pivots = np.abs(np.diag(lu))
        if not np.all(np.isfinite(pivots)) or np.min(pivots) == 0.0:
            raise_numerical_error(f"rim_indicator: shifted system singular at z = {z}")
        factors.append((lu, piv))
    return factors


def _apply_projection(factors, weights: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    total = np.zeros_like(rhs, dtype=np.complex128)
    for (lu, piv), weight in zip(factors, weights):
        total += weight * scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)
    return total


def rim_indicator(w: MatrixLike, contour: Contour, f: np.ndarray) -> float:
    """Norm of R(R f / |R f|), R the trapezoid rule for the spectral projection inside ``contour``.

    Close to 1 when ``w`` has an eigenvalue inside the contour that ``f``
    sees, and small like (radius / distance)^{2m} otherwise.

    Examples:
        >>> import numpy as np
        >>> from scatpoles.solver.indicator import Contour, rim_indicator
        >>> round(rim_indicator(0.1 * np.eye(3), Contour(0j, 0.5, 10), np.array([1.0, 0, 0])), 6)
        1.0
    """
    entries = _entries(w)
    f = np.asarray(f, dtype=np.complex128)
    if f.shape != (entries.shape[0],):
        raise_value_error(f"rim_indicator: f has shape {f.shape}, expected ({entries.shape[0]},)")
    norm_f = np.linalg.norm(f)
    if abs(norm_f - 1.0) > 1e-10:
        raise_value_error(f"rim_indicator: f must have unit norm, got {norm_f}")
    factors = factor_shifts(entries, contour.nodes())
    weights = contour.weights()
    first = _apply_projection(factors, weights, f)
    norm_first = np.linalg.norm(first)
    if norm_first == 0.0:
        return 0.0
    second = _apply_projection(factors, weights, first / norm_first)
    return float(np.linalg.norm(second))
