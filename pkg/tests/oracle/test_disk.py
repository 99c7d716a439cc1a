import pytest

from scatpoles.oracle.disk import (
    HankelZero,
    _log_derivative,
    argument_principle_count,
    hankel_zeros_in_region,
    inset,
    match_to_poles,
    newton_hankel_zero,
    newton_sweep,
    region_zero_count,
)
from scatpoles.solver.indicator import Contour
from scatpoles.solver.pool import WorkerPool
from scatpoles.solver.scan import SearchRegion
from scatpoles.special.bessel import hankel1_int, hankel1_int_derivative
from tests.mocks.configs import DISK_POLES, DISK_POLES_IN_REGION


def test_zeros_in_default_region():
    zeros = hankel_zeros_in_region(10, SearchRegion())
    assert len(zeros) == len(DISK_POLES_IN_REGION)
    for approx in DISK_POLES_IN_REGION:
        assert min(abs(z.kappa - approx) for z in zeros) <= 2e-4
    for pole in DISK_POLES:
        assert min(abs(z.kappa - pole) for z in zeros) <= 1e-9
    for zero in zeros:
        assert zero.newton_residual <= 1e-12
        assert zero.kappa.imag < 0


def test_zeros_are_roots_of_their_order():
    for zero in hankel_zeros_in_region(4, SearchRegion()):
        assert abs(hankel1_int(zero.order, zero.kappa)) <= 1e-12


def test_threaded_sweep_matches_serial():
    region = SearchRegion(0.5, 3.5, -3.5, -1.0)
    with WorkerPool(threads=3) as pool:
        threaded = hankel_zeros_in_region(6, region, seeds=8, pool=pool)
    assert threaded == hankel_zeros_in_region(6, region, seeds=8)


def test_pole_free_region():
    assert hankel_zeros_in_region(4, SearchRegion(0.0, 0.5, -0.5, 0.0)) == []


def test_newton_from_nearby_seed():
    hits = [z for nu in range(2, 11) for z in newton_sweep(nu, [DISK_POLES[0] + 0.02 - 0.01j]) if z is not None]
    assert min(abs(z.kappa - DISK_POLES[0]) for z in hits) <= 1e-9
    assert newton_hankel_zero(2, 0j) is None
    with pytest.raises(ValueError):
        newton_sweep(0, [1.0 - 1.0j])


def test_log_derivative_matches_public_hankel():
    kappa = 2.2 - 1.9j
    for nu in (2, 4, 7):
        ratio, h = _log_derivative(nu, kappa)
        assert h == hankel1_int(nu, kappa)
        assert abs(ratio - hankel1_int_derivative(nu, kappa) / h) <= 1e-14 * abs(ratio)


def test_argument_principle_counts():
    around_first = Contour(center=DISK_POLES[0], radius=0.3)
    assert sum(argument_principle_count(nu, around_first) for nu in range(2, 11)) == 1
    assert argument_principle_count(2, Contour(center=2.0 + 0.0j, radius=0.1)) == 0
    wide = Contour(center=2.0 - 2.0j, radius=1.8)
    narrow = Contour(center=2.0 - 2.0j, radius=0.5)
    for nu in (2, 3, 4):
        assert argument_principle_count(nu, wide) >= argument_principle_count(nu, narrow)


def test_region_count_matches_newton():
    region = SearchRegion()
    zeros = hankel_zeros_in_region(5, region)
    inner = inset(region)
    for nu in range(2, 6):
        newton = sum(1 for z in zeros if z.order == nu and inner.contains(z.kappa))
        assert region_zero_count(nu, region) == newton


def test_region_count_rejects_large_margin():
    with pytest.raises(ValueError):
        region_zero_count(2, SearchRegion(0.0, 0.1, -0.1, 0.0), margin=0.06)


def test_inset():
    inner = inset(SearchRegion(0.0, 4.0, -4.0, 0.0, 10, 20), 0.5)
    assert (inner.re_min, inner.re_max, inner.im_min, inner.im_max) == (0.5, 3.5, -3.5, -0.5)
    assert (inner.n_re, inner.n_im) == (10, 20)


def test_match_to_poles():
    zeros = [HankelZero(order=2, kappa=1.0 - 1.0j, newton_residual=0.0)]
    assert match_to_poles(zeros, [1.0 - 1.0j + 1e-12], 1e-9) == ([], [])
    lonely_zeros, lonely_poles = match_to_poles(zeros, [2.0 - 1.0j], 1e-9)
    assert lonely_zeros == zeros
    assert lonely_poles == [2.0 - 1.0j]
