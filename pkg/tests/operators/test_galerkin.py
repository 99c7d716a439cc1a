import math

import mpmath
import numpy as np
import pytest
import scipy.linalg

from scatpoles.geometry.curve import disk, peanut
from scatpoles.operators.galerkin import (
    OperatorFlavor,
    TrigCoeffs,
    assemble_A,
    assemble_B,
    assemble_operator,
    dump_operator_matrix,
    interpolate2d,
    inverse_interpolate,
    k_operator_diagonal,
    k_operator_matrix,
    knots,
    load_operator_matrix,
)
from scatpoles.operators.kernels import KernelFlavor, KernelSplit, sample_split
from tests.mocks.configs import DISK_POLES


def _smooth(s, t):
    return np.exp(np.cos(s) + 0.5j * np.sin(t - 1.0)) + 0.3 * np.cos(2 * s + t)


def _samples(fn, n):
    s, t = np.meshgrid(knots(n), knots(n), indexing="ij")
    return fn(s, t)


def _basis(points, n):
    # G[p, i] = e_i(points[p]), i = -n..n
    return np.exp(1j * np.outer(points, np.arange(-n, n + 1))) / math.sqrt(2 * math.pi)


def _on_grid(coeffs, grid):
    # Q f(s_p, t_q) = E C E^T / 2 pi with E[p, j] = e^{i j s_p}
    e = np.exp(1j * np.outer(grid, np.arange(-coeffs.n, coeffs.n + 1)))
    return e @ coeffs.c @ e.T / (2 * math.pi)


def _off_diagonal_ratio(entries):
    off = entries - np.diag(np.diag(entries))
    return np.max(np.abs(off)) / np.max(np.abs(np.diag(entries)))


def test_interpolate_constant():
    coeffs = interpolate2d(np.ones((9, 9)), 4)
    expected = np.zeros((9, 9))
    expected[4, 4] = 2 * math.pi
    assert np.allclose(coeffs.c, expected, rtol=0, atol=1e-14)


def test_interpolate_single_mode():
    n = 5
    coeffs = interpolate2d(_samples(lambda s, t: np.exp(1j * (s - t)) / (2 * math.pi), n), n)
    expected = np.zeros((11, 11))
    expected[n + 1, n - 1] = 1.0
    assert np.allclose(coeffs.c, expected, rtol=0, atol=1e-14)


def test_interpolation_reproduces_samples():
    n = 7
    samples = _samples(_smooth, n)
    s, t = np.meshgrid(knots(n), knots(n), indexing="ij")
    back = inverse_interpolate(interpolate2d(samples, n), s, t)
    assert np.max(np.abs(back - samples) / np.abs(samples)) <= 1e-12


def test_disk_coefficients_are_convolution():
    n = 8
    split = KernelSplit(kappa=2.0, curve=disk(1.0), flavor=KernelFlavor.SINGLE_LAYER)
    s, t = np.meshgrid(knots(n), knots(n), indexing="ij")
    a, _ = sample_split(split, s, t)
    c = interpolate2d(a, n).c
    j, k = np.meshgrid(np.arange(-n, n + 1), np.arange(-n, n + 1), indexing="ij")
    assert np.max(np.abs(c[j + k != 0])) <= 1e-13


def test_interpolate_shape_mismatch():
    with pytest.raises(ValueError):
        interpolate2d(np.ones((4, 5)), 2)


def test_assemble_B_simple_cases():
    n = 3
    c = np.zeros((7, 7), dtype=complex)
    c[n, n] = 1.0
    expected = np.zeros((7, 7))
    expected[n, n] = 1.0
    assert np.array_equal(assemble_B(TrigCoeffs(n=n, c=c)), expected)

    c = np.zeros((7, 7), dtype=complex)
    c[n + 1, n - 1] = 1.0
    expected = np.zeros((7, 7))
    expected[n + 1, n + 1] = 1.0
    assert np.array_equal(assemble_B(TrigCoeffs(n=n, c=c)), expected)


def test_assemble_A_simple_cases():
    n = 4
    c = np.zeros((9, 9), dtype=complex)
    assert not np.any(assemble_A(TrigCoeffs(n=n, c=c)))
    c[n, n] = -1.0
    m = np.abs(np.arange(-n, n + 1))
    expected = np.diag(np.where(m == 0, 0.0, 1.0 / np.maximum(m, 1)))
    assert np.allclose(assemble_A(TrigCoeffs(n=n, c=c)), expected, rtol=0, atol=1e-15)


def test_assemble_B_matches_dense_quadrature():
    n, points = 6, 512
    coeffs = interpolate2d(_samples(_smooth, n), n)
    grid = 2 * math.pi * np.arange(points) / points
    values = _on_grid(coeffs, grid)
    g = _basis(grid, n)
    oracle = g.conj().T @ values @ g * (2 * math.pi / points) ** 2
    assert np.max(np.abs(assemble_B(coeffs) - oracle)) <= 1e-10


def test_assemble_A_matches_truncated_log_series():
    n, points, terms = 6, 512, 400
    coeffs = interpolate2d(_samples(_smooth, n), n)
    grid = 2 * math.pi * np.arange(points) / points
    values = _on_grid(coeffs, grid)
    m = np.arange(1, terms + 1)
    log_series = -2.0 * np.cos(np.outer(grid, m)) @ (1.0 / m)
    weighted = values * scipy.linalg.circulant(log_series)
    g = _basis(grid, n)
    oracle = g.conj().T @ weighted @ g * (2 * math.pi / points) ** 2
    assert np.max(np.abs(assemble_A(coeffs) - oracle)) <= 1e-8


def test_k_operator_spectrum():
    assert np.allclose(
        np.diag(k_operator_matrix(4).entries),
        [1 / 4, 1 / 3, 1 / 2, 1, 1, 1, 1 / 2, 1 / 3, 1 / 4],
        rtol=0,
        atol=1e-15,
    )
    assert np.array_equal(np.diag(k_operator_matrix(1).entries), np.ones(3))
    k16 = k_operator_matrix(16)
    assert np.max(np.abs(k16.entries - np.diag(np.diag(k16.entries)))) <= 1e-14
    assert np.allclose(np.diag(k16.entries), k_operator_diagonal(16), rtol=0, atol=1e-15)
    assert k16.flavor is OperatorFlavor.K


@pytest.mark.parametrize("n", [8, 16, 32])
def test_disk_matrices_are_diagonal(n):
    for flavor in ("single", "double"):
        w = assemble_operator(disk(1.0), 1.5 - 0.7j, n, flavor)
        assert _off_diagonal_ratio(w.entries) <= 1e-12
    assert _off_diagonal_ratio(assemble_operator(disk(0.7), 2.0, n, "single").entries) <= 1e-12


def test_disk_single_layer_eigenvalues():
    mpmath.mp.dps = 30
    kappa, n = 2.0, 32
    w = assemble_operator(disk(1.0), kappa, n, "S_n")
    diag = np.diag(w.entries)
    for m in range(5):
        expected = complex(1j * mpmath.pi * mpmath.besselj(m, kappa) * mpmath.hankel1(m, kappa))
        assert abs(diag[n + m] - expected) <= 1e-10 * abs(expected)
        assert abs(diag[n - m] - diag[n + m]) <= 1e-13 * abs(diag[n + m])


def test_identity_part_of_double_flavor():
    w = assemble_operator(peanut(), 1.0 - 0.5j, 6, "double")
    split = KernelSplit(kappa=1.0 - 0.5j, curve=peanut(), flavor=KernelFlavor.DOUBLE_LAYER)
    s, t = np.meshgrid(knots(6), knots(6), indexing="ij")
    a, b = sample_split(split, s, t)
    d = assemble_A(interpolate2d(a, 6)) + assemble_B(interpolate2d(b, 6))
    assert np.allclose(w.entries - d, np.eye(13), rtol=0, atol=1e-15)
    assert w.flavor is OperatorFlavor.I_PLUS_D_N


def test_peanut_entries_converge_with_n():
    kappa = 1.0 - 0.5j
    matrices = {n: assemble_operator(peanut(), kappa, n, "single").entries for n in (8, 16, 32, 64)}

    def block_difference(n):
        lo, hi = n, 2 * n
        inner = matrices[hi][lo : lo + 2 * n + 1, lo : lo + 2 * n + 1]
        return np.max(np.abs(matrices[n] - inner))

    assert block_difference(16) < block_difference(8) / 5
    assert block_difference(32) <= max(block_difference(16) / 5, 1e-13)


def test_singular_at_disk_pole():
    for flavor in ("single", "double"):
        w = assemble_operator(disk(1.0), DISK_POLES[0], 32, flavor)
        assert scipy.linalg.svdvals(w.entries)[-1] <= 1e-8
    away = assemble_operator(disk(1.0), 2.0 - 2.0j, 32, "double")
    assert scipy.linalg.svdvals(away.entries)[-1] >= 1e-2


def test_operator_matrix_is_read_only():
    w = assemble_operator(disk(1.0), 1.0, 4, "single")
    with pytest.raises(ValueError):
        w.entries[0, 0] = 1.0


def test_invalid_assembly():
    with pytest.raises(ValueError):
        assemble_operator(disk(1.0), 1.0, 1, "single")
    with pytest.raises(ValueError):
        assemble_operator(disk(1.0), 0.0, 4, "single")
    with pytest.raises(ValueError):
        OperatorFlavor.from_name("triple")
    with pytest.raises(ValueError):
        k_operator_matrix(0)


def test_flavor_names():
    assert OperatorFlavor.from_name("single") is OperatorFlavor.S_N
    assert OperatorFlavor.from_name("I_plus_D_n") is OperatorFlavor.I_PLUS_D_N
    assert OperatorFlavor.I_PLUS_D_N.short_name == "double"


def test_dump_and_load(tmp_path):
    w = assemble_operator(peanut(), 0.5 - 1.4j, 4, "double")
    path = dump_operator_matrix(w, tmp_path / "w.npz")
    loaded = load_operator_matrix(path)
    assert path.exists()
    assert loaded.n == 4
    assert loaded.flavor is OperatorFlavor.I_PLUS_D_N
    assert loaded.kappa == w.kappa
    assert np.array_equal(loaded.entries, w.entries)
