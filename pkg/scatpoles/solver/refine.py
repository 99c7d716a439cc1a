"""Contour-moment extraction of the singular wavenumbers inside a circle."""

import logging
import warnings
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from scatpoles.constants import (
    REFINE_ACCEPTANCE,
    REFINE_BLOCK,
    REFINE_CLUSTER_TOL,
    REFINE_MIN_GAP,
    REFINE_NODES,
    REFINE_RANK_TOL,
)
from scatpoles.geometry.curve import Curve
from scatpoles.operators.galerkin import OperatorFlavor, assemble_operator
from scatpoles.solver.pool import WorkerPool
from scatpoles.solver.scan import SearchRegion
from scatpoles.utils import NumericalError, random_block, raise_numerical_error, raise_value_error


class NoPoleWarning(RuntimeWarning):
    """The zeroth moment is numerically zero: no singular wavenumber inside the circle."""


@dataclass(frozen=True)
class RefineSettings:
    """Controls for the moment extraction.

    Args:
        radius (float, optional): Circle radius; None lets the caller pick one.
        m (int): Half the number of quadrature nodes.
        block (int): Columns of the random probing block.
        rank_tol (float): Relative singular value cut-off.
        cluster_tol (float): Eigenvalues closer than this form one pole.
        acceptance (float): Largest residual accepted for a pole.
        polish (bool): Re-run at half radius centred on every estimate.
    """

    radius: Optional[float] = None
    m: int = REFINE_NODES
    block: int = REFINE_BLOCK
    rank_tol: float = REFINE_RANK_TOL
    cluster_tol: float = REFINE_CLUSTER_TOL
    acceptance: float = REFINE_ACCEPTANCE
    polish: bool = True

    def __post_init__(self):
        if self.radius is not None and not self.radius > 0:
            raise_value_error(f"RefineSettings: radius must be positive, got {self.radius}")
        if self.m < 4:
            raise_value_error(f"RefineSettings: m must be >= 4, got {self.m}")
        if self.block < 1:
            raise_value_error(f"RefineSettings: block must be >= 1, got {self.block}")
        if not 0 < self.rank_tol < 1:
            raise_value_error(f"RefineSettings: rank_tol must lie in (0, 1), got {self.rank_tol}")


@dataclass(frozen=True)
class PoleEstimate:
    kappa: complex
    residual: float
    count: int
    flavor: OperatorFlavor
    n: int


@dataclass(frozen=True)
class MomentResult:
    """Eigenvalues found inside one circle, with their cluster multiplicities."""

    center: complex
    radius: float
    eigenvalues: List[Tuple[complex, int]]
    rank: int
    singular_values: np.ndarray


def residual(curve: Curve, n: int, flavor: Union[str, OperatorFlavor], kappa: complex) -> float:
    """Smallest singular value of W_n(kappa)."""
    if kappa == 0:
        raise_value_error("residual: kappa must be nonzero")
    w = assemble_operator(curve, kappa, n, flavor)
    return float(scipy.linalg.svdvals(w.entries, check_finite=False)[-1])


def cluster_eigenvalues(values: Sequence[complex], tol: float = REFINE_CLUSTER_TOL) -> List[Tuple[complex, int]]:
    """Group values closer than ``tol`` to a cluster's first member; returns (mean, size) pairs.

    Examples:
        >>> cluster_eigenvalues([2j, 1 + 1j, 1 + 1j])
        [(2j, 1), ((1+1j), 2)]
    """
    ordered = sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag))
    clusters: List[List[complex]] = []
    for z in ordered:
        for cluster in clusters:
            if abs(z - cluster[0]) < tol:
                cluster.append(z)
                break
        else:
            clusters.append([z])
    return [(complex(np.mean(c)) if len(c) > 1 else c[0], len(c)) for c in clusters]


def contour_moments(
    curve: Curve,
    n: int,
    flavor: OperatorFlavor,
    center: complex,
    radius: float,
    settings: RefineSettings,
    seed: Optional[int],
    pool: WorkerPool,
) -> Tuple[np.ndarray, np.ndarray, float]:
    """A_p = (1 / 2m) sum_j (R e^{i phi_j})^{p+1} W_n(center + R e^{i phi_j})^{-1} V for p = 0, 1.

    Moments are taken in the shifted variable kappa - center. Also returns
    the integrand scale R max_j |W^{-1} V| used by the no-pole test.
    """
    size = 2 * n + 1
    v = random_block(size, settings.block, seed)
    phi = np.pi * np.arange(2 * settings.m) / settings.m
    offsets = radius * np.exp(1j * phi)

    def solve(offset: complex) -> np.ndarray:
        w = assemble_operator(curve, center + offset, n, flavor)
        lu, piv = scipy.linalg.lu_factor(w.entries, check_finite=False)
        if np.min(np.abs(np.diag(lu))) == 0.0:
            raise_numerical_error(f"contour_moments: W_n singular on the contour at kappa = {center + offset}")
        return scipy.linalg.lu_solve((lu, piv), v, check_finite=False)

    solutions = pool.map(solve, list(offsets))
    a0 = np.zeros((size, settings.block), dtype=np.complex128)
    a1 = np.zeros_like(a0)
    scale = 0.0
    for offset, x in zip(offsets, solutions):
        a0 += offset * x
        a1 += offset * offset * x
        scale = max(scale, float(np.linalg.norm(x, 2)))
    norm = 2 * settings.m
    return a0 / norm, a1 / norm, radius * scale


def extract_eigenvalues(
    curve: Curve,
    n: int,
    flavor: Union[str, OperatorFlavor],
    center: complex,
    radius: float,
    settings: Optional[RefineSettings] = None,
    seed: Optional[int] = None,
    pool: Optional[WorkerPool] = None,
    logger: Optional[logging.Logger] = None,
) -> MomentResult:
    """Eigenvalues of kappa -> W_n(kappa) strictly inside the circle (center, radius).

    Warns with ``NoPoleWarning`` and returns no eigenvalues when the zeroth
    moment vanishes. Raises NumericalError when the singular values show no
    clear gap or the probing block is too narrow.
    """
    logger = logger or logging.getLogger(__name__)
    settings = settings or RefineSettings()
    flavor = OperatorFlavor.from_name(flavor)
    pool = pool or WorkerPool(threads=1, logger=logger)
    a0, a1, scale = contour_moments(curve, n, flavor, complex(center), radius, settings, seed, pool)
    u, sigma, vh = scipy.linalg.svd(a0, full_matrices=False)
    if sigma[0] <= settings.rank_tol * scale:
        warnings.warn(
            f"extract_eigenvalues: no singular wavenumber inside |kappa - ({center:.6g})| < {radius:.3g}",
            NoPoleWarning,
            stacklevel=2,
        )
        return MomentResult(center=complex(center), radius=radius, eigenvalues=[], rank=0, singular_values=sigma)
    rank = int(np.sum(sigma > settings.rank_tol * sigma[0]))
    if rank == len(sigma):
        raise_numerical_error(
            f"extract_eigenvalues: rank {rank} fills the probing block; increase block or shrink the radius"
        )
    gap = sigma[rank - 1] / sigma[rank] if sigma[rank] > 0 else np.inf
    if gap < REFINE_MIN_GAP:
        raise_numerical_error(f"extract_eigenvalues: singular value gap {gap:.3g} below {REFINE_MIN_GAP} at rank {rank}")
    u0 = u[:, :rank]
    w0 = vh[:rank].conj().T
    reduced = u0.conj().T @ a1 @ w0 / sigma[:rank]
    shifted = scipy.linalg.eigvals(reduced, check_finite=False)
    inside = [complex(center) + z for z in shifted if abs(z) < radius]
    logger.debug(f"extract_eigenvalues: rank {rank}, {len(inside)} eigenvalues inside, gap {gap:.3g}")
    return MomentResult(
        center=complex(center),
        radius=radius,
        eigenvalues=cluster_eigenvalues(inside, settings.cluster_tol),
        rank=rank,
        singular_values=sigma,
    )


def refine_poles(
    curve: Curve,
    n: int,
    flavor: Union[str, OperatorFlavor],
    candidates: Sequence[complex],
    settings: RefineSettings,
    seed: Optional[int] = None,
    pool: Optional[WorkerPool] = None,
    logger: Optional[logging.Logger] = None,
    region: Optional[SearchRegion] = None,
    failures: Optional[List[str]] = None,
) -> List[PoleEstimate]:
    """Refine every candidate cell into poles, deduplicated and sorted by real then imaginary part.

    ``settings.radius`` must be set. With a ``region`` each circle is shrunk
    to stay inside it and only poles inside it are kept. Poles with a
    residual above ``settings.acceptance`` are dropped with a warning.

    A NumericalError on one candidate propagates unless ``failures`` is
    given: then the candidate is retried once with twice the block at half
    the radius, and if that fails too it is skipped and the reason appended
    to ``failures``.
    """
    logger = logger or logging.getLogger(__name__)
    flavor = OperatorFlavor.from_name(flavor)
    if settings.radius is None:
        return raise_value_error("refine_poles: settings.radius must be set")
    pool = pool or WorkerPool(threads=1, logger=logger)
    found: List[Tuple[complex, int]] = []
    for candidate in candidates:
        radius = settings.radius
        if region is not None:
            radius = min(radius, region.distance_to_boundary(candidate))
            if radius <= 0:
                logger.info(f"refine_poles: candidate {candidate:.6g} lies outside the region")
                continue
        try:
            found.extend(_refine_candidate(curve, n, flavor, candidate, radius, settings, seed, pool, logger))
        except NumericalError as e:
            if failures is None:
                raise
            logger.info(f"refine_poles: retrying candidate {candidate:.6g} after: {e}")
            try:
                wider = replace(settings, block=2 * settings.block)
                found.extend(_refine_candidate(curve, n, flavor, candidate, radius / 2, wider, seed, pool, logger))
            except NumericalError as again:
                logger.warning(f"refine_poles: skipping {flavor.short_name} candidate {candidate:.6g}: {again}")
                failures.append(f"{flavor.short_name} candidate {candidate:.6g} skipped: {again}")

    poles: List[PoleEstimate] = []
    for kappa, count in _dedupe(found, settings.cluster_tol):
        if region is not None and not region.contains(kappa):
            continue
        res = residual(curve, n, flavor, kappa)
        if res > settings.acceptance:
            logger.warning(f"refine_poles: dropping {kappa:.12g}, residual {res:.3g} > {settings.acceptance:g}")
            continue
        poles.append(PoleEstimate(kappa=kappa, residual=res, count=count, flavor=flavor, n=n))
    return sorted(poles, key=lambda p: (p.kappa.real, p.kappa.imag))


def _refine_candidate(curve, n, flavor, candidate, radius, settings, seed, pool, logger) -> List[Tuple[complex, int]]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoPoleWarning)
        coarse = extract_eigenvalues(curve, n, flavor, candidate, radius, settings, seed, pool, logger)
    if not coarse.eigenvalues:
        logger.info(f"refine_poles: no pole near candidate {candidate:.6g}")
    found = []
    for estimate, count in coarse.eigenvalues:
        if settings.polish:
            estimate, count = _polish(curve, n, flavor, estimate, count, radius / 2, settings, seed, pool, logger)
        found.append((estimate, count))
    return found


def _polish(curve, n, flavor, estimate, count, radius, settings, seed, pool, logger) -> Tuple[complex, int]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoPoleWarning)
        fine = extract_eigenvalues(curve, n, flavor, estimate, radius, settings, seed, pool, logger)
    if not fine.eigenvalues:
        return estimate, count
    return min(fine.eigenvalues, key=lambda e: abs(e[0] - estimate))


def _dedupe(found: Sequence[Tuple[complex, int]], tol: float) -> List[Tuple[complex, int]]:
    kept: List[Tuple[complex, int]] = []
    for kappa, count in found:
        if all(abs(kappa - other) >= tol for other, _ in kept):
            kept.append((kappa, count))
    return kept


def match_flavors(
    first: Sequence[PoleEstimate], second: Sequence[PoleEstimate]
) -> List[Tuple[PoleEstimate, Optional[PoleEstimate], float]]:
    """Pair every pole of ``first`` with the nearest pole of ``second``; distance is inf when ``second`` is empty."""
    pairs = []
    for pole in first:
        if not second:
            pairs.append((pole, None, float("inf")))
            continue
        partner = min(second, key=lambda q: abs(q.kappa - pole.kappa))
        pairs.append((pole, partner, abs(partner.kappa - pole.kappa)))
    return pairs
