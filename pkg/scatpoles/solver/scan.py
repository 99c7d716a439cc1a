"""Indicator scan of a rectangle in the complex wavenumber plane."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import scipy.ndimage

from scatpoles.constants import (
    DEFAULT_IM_MAX,
    DEFAULT_IM_MIN,
    DEFAULT_RE_MAX,
    DEFAULT_RE_MIN,
    INDICATOR_LOG10_FLOOR,
)
from scatpoles.geometry.curve import Curve
from scatpoles.operators.galerkin import OperatorFlavor, OperatorMatrix, assemble_operator, k_operator_diagonal
from scatpoles.solver.indicator import Contour, rim_indicator
from scatpoles.solver.pool import WorkerPool
from scatpoles.utils import NumericalError, random_unit_vector, raise_value_error


@dataclass(frozen=True)
class SearchRegion:
    """Rectangle (re_min, re_max) x (im_min, im_max) split into n_re x n_im cells."""

    re_min: float = DEFAULT_RE_MIN
    re_max: float = DEFAULT_RE_MAX
    im_min: float = DEFAULT_IM_MIN
    im_max: float = DEFAULT_IM_MAX
    n_re: int = 40
    n_im: int = 40

    def __post_init__(self):
        if not self.re_min < self.re_max:
            raise_value_error(f"SearchRegion: re_min {self.re_min} must be < re_max {self.re_max}")
        if not self.im_min < self.im_max:
            raise_value_error(f"SearchRegion: im_min {self.im_min} must be < im_max {self.im_max}")
        if self.n_re < 2 or self.n_im < 2:
            raise_value_error(f"SearchRegion: grid counts must be >= 2, got {self.n_re} x {self.n_im}")

    @property
    def cell_size(self) -> Tuple[float, float]:
        return (self.re_max - self.re_min) / self.n_re, (self.im_max - self.im_min) / self.n_im

    @property
    def cell_diagonal(self) -> float:
        return math.hypot(*self.cell_size)

    def grid(self) -> np.ndarray:
        """Cell centres as a complex (n_im, n_re) array; row i has imaginary part rising with i."""
        d_re, d_im = self.cell_size
        re = self.re_min + (np.arange(self.n_re) + 0.5) * d_re
        im = self.im_min + (np.arange(self.n_im) + 0.5) * d_im
        return re[None, :] + 1j * im[:, None]

    def contains(self, kappa: complex) -> bool:
        return self.re_min < kappa.real < self.re_max and self.im_min < kappa.imag < self.im_max

    def distance_to_boundary(self, kappa: complex) -> float:
        """Distance from kappa to the nearest edge; not positive outside."""
        return min(
            kappa.real - self.re_min,
            self.re_max - kappa.real,
            kappa.imag - self.im_min,
            self.im_max - kappa.imag,
        )


@dataclass
class IndicatorField:
    """RIM values on the cell centres of a region.

    Points whose assembly or solve failed hold 0 and are listed in ``failures``.
    """

    region: SearchRegion
    kappa: np.ndarray
    rim: np.ndarray
    n: int
    flavor: OperatorFlavor
    contour: Contour
    seed: Optional[int]
    failures: Dict[Tuple[int, int], str] = field(default_factory=dict)

    @property
    def log10_rim(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            values = np.log10(self.rim)
        return np.maximum(values, INDICATOR_LOG10_FLOOR)

    def to_rows(self) -> List[Tuple[float, float, float]]:
        """(kappa_re, kappa_im, log10_rim) with the real part as the outer loop."""
        logs = self.log10_rim
        return [
            (float(self.kappa[i, j].real), float(self.kappa[i, j].imag), float(logs[i, j]))
            for j in range(self.kappa.shape[1])
            for i in range(self.kappa.shape[0])
        ]


def indicator_matrix(w: OperatorMatrix) -> np.ndarray:
    """Matrix whose eigenvalues the scan tests for zero.

    S_n has eigenvalues clustering at 0 like 1/|m|, so rows are scaled by the
    inverse of K_n (|m|, and 1 at m = 0); I + D_n is used as is. Both keep the
    singular wavenumbers of W_n.
    """
    if w.flavor is OperatorFlavor.S_N:
        return w.entries / k_operator_diagonal(w.n)[:, None]
    return np.asarray(w.entries)


def scan_region(
    curve: Curve,
    n: int,
    flavor: Union[str, OperatorFlavor],
    region: SearchRegion,
    contour: Optional[Contour] = None,
    seed: Optional[int] = None,
    pool: Optional[WorkerPool] = None,
    logger: Optional[logging.Logger] = None,
) -> IndicatorField:
    """Evaluate the spectral indicator at every cell centre of ``region``.

    The same seeded unit vector is used at every point, so the field is a
    deterministic function of the arguments.
    """
    logger = logger or logging.getLogger(__name__)
    flavor = OperatorFlavor.from_name(flavor)
    contour = contour or Contour()
    pool = pool or WorkerPool(threads=1, logger=logger)
    f = random_unit_vector(2 * n + 1, seed)
    kappa = region.grid()
    points = [(i, j) for i in range(kappa.shape[0]) for j in range(kappa.shape[1])]

    def evaluate(index: Tuple[int, int]) -> Tuple[float, Optional[str]]:
        k = complex(kappa[index])
        try:
            w = assemble_operator(curve, k, n, flavor)
            return rim_indicator(indicator_matrix(w), contour, f), None
        except (ValueError, NumericalError) as e:
            return 0.0, str(e)

    logger.info(f"scan_region: {flavor.value} n={n} over {region.n_re}x{region.n_im} cells")
    results = pool.map(evaluate, points)
    rim = np.zeros(kappa.shape)
    failures: Dict[Tuple[int, int], str] = {}
    for index, (value, error) in zip(points, results):
        rim[index] = value
        if error is not None:
            failures[index] = error
    if failures:
        logger.warning(f"scan_region: {len(failures)} grid points failed, first: {next(iter(failures.values()))}")
    return IndicatorField(
        region=region, kappa=kappa, rim=rim, n=n, flavor=flavor, contour=contour, seed=seed, failures=failures
    )


def find_candidate_cells(field: IndicatorField, threshold: float) -> List[complex]:
    """Cell centres that are 8-neighbour local maxima of log10 RIM and at least ``threshold``.

    Sorted by decreasing indicator value.
    """
    logs = field.log10_rim
    peaks = logs == scipy.ndimage.maximum_filter(logs, size=3, mode="nearest")
    mask = peaks & (logs >= threshold)
    order = np.argsort(-logs[mask], kind="stable")
    return [complex(k) for k in field.kappa[mask][order]]
