"""Scattering poles of the disk as zeros of H_nu^(1), independent of any discretisation."""

import logging
import warnings
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from scatpoles.constants import (
    BESSEL_MAX_ARGUMENT,
    BRANCH_CUT_ANGLE_TOL,
    HANKEL_MAX_ORDER,
    ORACLE_CONTOUR_CLEARANCE,
    ORACLE_DEDUP_DISTANCE,
    ORACLE_INTEGER_TOL,
    ORACLE_MARGIN,
    ORACLE_MAX_NODES,
    ORACLE_MIN_NODES,
    ORACLE_NEWTON_MAX_ITER,
    ORACLE_RESIDUAL_TOL,
    ORACLE_SEEDS,
)
from scatpoles.solver.indicator import Contour
from scatpoles.solver.pool import WorkerPool
from scatpoles.solver.scan import SearchRegion
from scatpoles.special.bessel import RecurrenceAccuracyWarning, hankel1_int, hankel1_int_derivative
from scatpoles.utils import raise_numerical_error, raise_value_error


@dataclass(frozen=True)
class HankelZero:
    order: int
    kappa: complex
    newton_residual: float


def _log_derivative(nu: int, kappa):
    """(H_nu' / H_nu, H_nu) without recurrence growth warnings."""
    if not 1 <= nu <= HANKEL_MAX_ORDER:
        raise_value_error(f"disk oracle: order must lie in [1, {HANKEL_MAX_ORDER}], got {nu}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RecurrenceAccuracyWarning)
        h = hankel1_int(nu, kappa)
        dh = hankel1_int_derivative(nu, kappa)
    return dh / h, h


def _in_domain(z: np.ndarray) -> np.ndarray:
    return (
        np.isfinite(z)
        & (np.abs(z) > 0)
        & (np.abs(z) <= BESSEL_MAX_ARGUMENT)
        & (np.abs(np.angle(z)) < np.pi - BRANCH_CUT_ANGLE_TOL)
    )


def newton_sweep(
    nu: int,
    seeds: Sequence[complex],
    max_iter: int = ORACLE_NEWTON_MAX_ITER,
    step_tol: float = 1e-14,
) -> List[Optional[HankelZero]]:
    """Newton iteration on H_nu from every seed at once.

    Entries are None where the iterate leaves the validated domain or does
    not settle within ``max_iter`` steps.
    """
    if nu < 1:
        raise_value_error(f"newton_sweep: order must be >= 1, got {nu}")
    z = np.asarray(seeds, dtype=np.complex128).ravel().copy()
    active = _in_domain(z)
    done = np.zeros(z.shape, dtype=bool)
    for _ in range(max_iter):
        if not np.any(active):
            break
        ratio, _ = _log_derivative(nu, z[active])
        with np.errstate(divide="ignore", invalid="ignore"):
            step = 1.0 / ratio
        z[active] = z[active] - step
        settled = np.abs(step) <= step_tol * np.maximum(np.abs(z[active]), 1.0)
        index = np.flatnonzero(active)
        done[index[settled]] = True
        active[index[settled]] = False
        active &= _in_domain(z)
    done &= _in_domain(z)
    results: List[Optional[HankelZero]] = [None] * z.size
    if np.any(done):
        # one extra step settles the last digit
        polished = z[done] - 1.0 / _log_derivative(nu, z[done])[0]
        keep = _in_domain(polished)
        polished = np.where(keep, polished, z[done])
        residuals = np.abs(_log_derivative(nu, polished)[1])
        for i, kappa, res in zip(np.flatnonzero(done), polished, residuals):
            results[i] = HankelZero(order=nu, kappa=complex(kappa), newton_residual=float(res))
    return results


def newton_hankel_zero(
    nu: int,
    seed: complex,
    max_iter: int = ORACLE_NEWTON_MAX_ITER,
    step_tol: float = 1e-14,
) -> Optional[HankelZero]:
    """Newton iteration on H_nu from ``seed``; None when it leaves the domain or does not settle."""
    return newton_sweep(nu, [seed], max_iter, step_tol)[0]


def _dedupe(zeros: Sequence[HankelZero], distance: float) -> List[HankelZero]:
    kept: List[HankelZero] = []
    for zero in sorted(zeros, key=lambda z: (z.kappa.real, z.kappa.imag)):
        if all(abs(zero.kappa - other.kappa) > distance for other in kept):
            kept.append(zero)
    return kept


def hankel_zeros_in_region(
    nu_max: int,
    region: SearchRegion,
    seeds: int = ORACLE_SEEDS,
    pool: Optional[WorkerPool] = None,
    logger: Optional[logging.Logger] = None,
) -> List[HankelZero]:
    """Zeros of H_nu, 2 <= nu <= nu_max, inside ``region`` with Im < 0.

    Newton runs from a ``seeds`` x ``seeds`` grid of cell centres. Results
    are sorted by order, then real, then imaginary part.
    """
    logger = logger or logging.getLogger(__name__)
    if nu_max < 2:
        raise_value_error(f"hankel_zeros_in_region: nu_max must be >= 2, got {nu_max}")
    pool = pool or WorkerPool(threads=1, logger=logger)
    seed_grid = SearchRegion(region.re_min, region.re_max, region.im_min, region.im_max, seeds, seeds).grid().ravel()

    def sweep(nu: int) -> Tuple[List[HankelZero], int]:
        accepted, failed = [], 0
        for zero in newton_sweep(nu, seed_grid):
            if zero is None or zero.newton_residual > ORACLE_RESIDUAL_TOL:
                failed += 1
                continue
            if zero.kappa.imag < 0 and region.contains(zero.kappa):
                accepted.append(zero)
        return _dedupe(accepted, ORACLE_DEDUP_DISTANCE), failed

    results = pool.map(sweep, list(range(2, nu_max + 1)))
    zeros: List[HankelZero] = []
    for nu, (found, failed) in zip(range(2, nu_max + 1), results):
        if failed:
            logger.debug(f"hankel_zeros_in_region: nu={nu}, {failed} of {len(seed_grid)} seeds did not converge")
        zeros.extend(found)
    logger.info(f"hankel_zeros_in_region: {len(zeros)} zeros for nu <= {nu_max}")
    return zeros


def _settle(integrate: Callable[[int], complex], start: int, label: str) -> int:
    previous = None
    nodes = start
    while nodes <= ORACLE_MAX_NODES:
        value = integrate(nodes)
        nearest = round(value.real)
        close = abs(value - nearest) < ORACLE_INTEGER_TOL
        if close and previous == nearest:
            return int(nearest)
        previous = nearest if close else None
        nodes *= 2
    return raise_numerical_error(f"{label}: winding number did not settle within {ORACLE_MAX_NODES} nodes")


def argument_principle_count(nu: int, contour: Contour) -> int:
    """Number of zeros of H_nu inside ``contour`` from the trapezoid rule for (1/2 pi i) closed integral H'/H.

    The node count starts at 64 (or 2 * contour.m if larger) and doubles
    until two successive levels give the same integer.
    """
    if nu < 1:
        raise_value_error(f"argument_principle_count: order must be >= 1, got {nu}")

    def integrate(nodes: int) -> complex:
        phase = np.exp(2j * np.pi * np.arange(nodes) / nodes)
        ratio, h = _log_derivative(nu, contour.center + contour.radius * phase)
        if np.min(np.abs(h)) < ORACLE_CONTOUR_CLEARANCE:
            raise_value_error(f"argument_principle_count: contour passes within reach of a zero of H_{nu}")
        return complex(contour.radius / nodes * np.sum(phase * ratio))

    return _settle(integrate, max(ORACLE_MIN_NODES, 2 * contour.m), "argument_principle_count")


def _rectangle_integral(nu: int, corners: Sequence[complex], nodes: int) -> complex:
    x, w = np.polynomial.legendre.leggauss(nodes)
    total = 0j
    for a, b in zip(corners, list(corners[1:]) + [corners[0]]):
        points = a + (b - a) * (x + 1.0) / 2.0
        ratio, _ = _log_derivative(nu, points)
        total += np.sum(w * ratio) * (b - a) / 2.0
    return total / (2j * np.pi)


def region_zero_count(
    nu: int,
    region: SearchRegion,
    margin: float = ORACLE_MARGIN,
    tiles: Tuple[int, int] = (2, 2),
) -> int:
    """Zeros of H_nu inside ``region`` shrunk by ``margin`` on every side, summed over a tiling.

    Each tile edge uses Gauss-Legendre nodes, doubled until the count settles.
    """
    re_min, re_max = region.re_min + margin, region.re_max - margin
    im_min, im_max = region.im_min + margin, region.im_max - margin
    if not (re_min < re_max and im_min < im_max):
        raise_value_error(f"region_zero_count: margin {margin} leaves an empty rectangle")
    re_edges = np.linspace(re_min, re_max, tiles[0] + 1)
    im_edges = np.linspace(im_min, im_max, tiles[1] + 1)
    count = 0
    for i in range(tiles[0]):
        for j in range(tiles[1]):
            corners = [
                complex(re_edges[i], im_edges[j]),
                complex(re_edges[i + 1], im_edges[j]),
                complex(re_edges[i + 1], im_edges[j + 1]),
                complex(re_edges[i], im_edges[j + 1]),
            ]
            count += _settle(
                lambda nodes, c=corners: _rectangle_integral(nu, c, nodes // 4),
                ORACLE_MIN_NODES,
                "region_zero_count",
            )
    return count


def inset(region: SearchRegion, margin: float = ORACLE_MARGIN) -> SearchRegion:
    return SearchRegion(
        region.re_min + margin,
        region.re_max - margin,
        region.im_min + margin,
        region.im_max - margin,
        region.n_re,
        region.n_im,
    )


def match_to_poles(
    zeros: Sequence[HankelZero], poles: Sequence[complex], tol: float
) -> Tuple[List[HankelZero], List[complex]]:
    """Zeros with no pole within ``tol`` and poles with no zero within ``tol``; both empty means complete."""
    lonely_zeros = [z for z in zeros if not any(abs(z.kappa - p) <= tol for p in poles)]
    lonely_poles = [complex(p) for p in poles if not any(abs(z.kappa - p) <= tol for z in zeros)]
    return lonely_zeros, lonely_poles
