import math

import numpy as np
import pytest

from scatpoles.constants import EULER_GAMMA
from scatpoles.geometry.curve import acorn, disk, peanut
from scatpoles.operators.kernels import (
    KernelFlavor,
    KernelSplit,
    diagonal_continuity,
    direct_kernel,
    eval_a,
    eval_b,
    reconstruct_kernel,
)
from scatpoles.special.bessel import hankel1

SINGLE = KernelFlavor.SINGLE_LAYER
DOUBLE = KernelFlavor.DOUBLE_LAYER


def _off_diagonal_pairs(seed, count=50):
    rng = np.random.default_rng(seed)
    s = rng.uniform(0.0, 2 * math.pi, count)
    t = rng.uniform(0.0, 2 * math.pi, count)
    gap = np.abs(np.mod(s - t + math.pi, 2 * math.pi) - math.pi)
    return s[gap > 0.05], t[gap > 0.05]


def test_single_layer_diagonal_on_disk():
    ks = KernelSplit(kappa=2.0, curve=disk(1.0), flavor=SINGLE)
    assert abs(eval_a(ks, 0.7, 0.7) + 1 / (2 * math.pi)) <= 1e-15
    assert abs(eval_b(ks, 0.7, 0.7) - (0.5j - EULER_GAMMA / math.pi)) <= 1e-14


def test_double_layer_diagonal_on_disk():
    ks = KernelSplit(kappa=2.0, curve=disk(1.0), flavor=DOUBLE)
    assert eval_a(ks, 1.3, 1.3) == 0
    assert abs(eval_b(ks, 1.3, 1.3) + 1 / (2 * math.pi)) <= 1e-15


def test_split_identity_at_antipode():
    ks = KernelSplit(kappa=2.0, curve=disk(1.0), flavor=SINGLE)
    expected = 0.5j * hankel1(0, 4.0)
    assert abs(reconstruct_kernel(ks, math.pi, 0.0) - expected) <= 1e-13 * abs(expected)


@pytest.mark.parametrize(
    "curve, kappa, flavor",
    [
        (peanut(), 1.5 - 0.5j, DOUBLE),
        (acorn(), 3.0 - 2.0j, SINGLE),
        (peanut(), 0.5 - 1.4j, SINGLE),
        (acorn(), 1.1 - 1.3j, DOUBLE),
    ],
)
def test_reconstruct_matches_direct_kernel(curve, kappa, flavor):
    ks = KernelSplit(kappa=kappa, curve=curve, flavor=flavor)
    s, t = _off_diagonal_pairs(5)
    split = reconstruct_kernel(ks, s, t)
    direct = direct_kernel(ks, s, t)
    assert np.max(np.abs(split - direct) / np.abs(direct)) <= 1e-12


def test_diagonal_continuity_shrinks_with_step():
    for curve, flavor in ((peanut(), SINGLE), (acorn(), DOUBLE)):
        ks = KernelSplit(kappa=1.0 - 1.0j, curve=curve, flavor=flavor)
        gaps = [diagonal_continuity(ks, 0.4, h) for h in (1e-2, 1e-3, 1e-4)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] <= 1e-3


def test_diagonal_continuity_step_range():
    ks = KernelSplit(kappa=1.0, curve=disk(1.0), flavor=SINGLE)
    with pytest.raises(ValueError):
        diagonal_continuity(ks, 0.0, 0.1)


@pytest.mark.parametrize("flavor", [SINGLE, DOUBLE])
@pytest.mark.parametrize("curve", [peanut(), acorn()])
def test_split_factors_are_biperiodic(curve, flavor):
    ks = KernelSplit(kappa=1.5 - 0.7j, curve=curve, flavor=flavor)
    s, t = _off_diagonal_pairs(seed=5)
    # the diagonal goes through the coincident limit on both sides
    s = np.append(s, 0.9)
    t = np.append(t, 0.9)
    for factor in (eval_a, eval_b):
        base = factor(ks, s, t)
        scale = np.maximum(np.abs(base), 1.0)
        assert np.all(np.abs(factor(ks, s + 2 * math.pi, t) - base) <= 1e-10 * scale)
        assert np.all(np.abs(factor(ks, s, t - 2 * math.pi) - base) <= 1e-10 * scale)


def test_disk_kernels_depend_on_difference_only():
    rng = np.random.default_rng(3)
    s, t = _off_diagonal_pairs(9, 20)
    shift = rng.uniform(-3.0, 3.0, s.shape)
    for flavor in (SINGLE, DOUBLE):
        ks = KernelSplit(kappa=1.3 - 1.7j, curve=disk(1.0), flavor=flavor)
        for evaluate in (eval_a, eval_b):
            base = evaluate(ks, s, t)
            moved = evaluate(ks, s + shift, t + shift)
            assert np.max(np.abs(moved - base)) <= 1e-12 * np.max(np.abs(base) + 1.0)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        KernelSplit(kappa=0.0, curve=disk(1.0), flavor=SINGLE)
    ks = KernelSplit(kappa=1.0, curve=disk(1.0), flavor=SINGLE)
    with pytest.raises(ValueError):
        reconstruct_kernel(ks, 0.5, 0.5)
