import math

import numpy as np
import pytest

from scatpoles.geometry.curve import (
    CurveKind,
    DegenerateCurveError,
    acorn,
    chord,
    curve_from_spec,
    disk,
    frame,
    frame_derivative_check,
    peanut,
    radial_trig,
    signed_area,
)

RNG = np.random.default_rng(11)
RANDOM_T = RNG.uniform(0.0, 2 * math.pi, 100)


def test_disk_frame_at_zero():
    f = frame(disk(1.0), 0.0)
    assert np.allclose(f.z, [1.0, 0.0], atol=1e-15)
    assert np.allclose(f.dz, [0.0, 1.0], atol=1e-15)
    assert np.allclose(f.ddz, [-1.0, 0.0], atol=1e-15)
    assert np.allclose(f.normal, [1.0, 0.0], atol=1e-15)


def test_builtin_points():
    assert np.allclose(frame(peanut(), 0.0).z, [math.sqrt(1.25), 0.0], atol=1e-15)
    assert np.allclose(frame(acorn(), math.pi / 2).z, [0.0, 0.6 * math.sqrt(4.25)], atol=1e-14)
    assert np.allclose(frame(disk(2.5), math.pi).z, [-2.5, 0.0], atol=1e-14)


@pytest.mark.parametrize("curve", [disk(1.0), peanut(), acorn()], ids=["disk", "peanut", "acorn"])
def test_normal_is_unit_and_orthogonal(curve):
    f = frame(curve, RANDOM_T)
    assert np.max(np.abs(np.sum(f.normal * f.dz, axis=-1))) <= 1e-14
    assert np.max(np.abs(np.linalg.norm(f.normal, axis=-1) - 1.0)) <= 1e-14


def test_normal_points_outward():
    for curve in (disk(1.0), peanut(), acorn()):
        f = frame(curve, RANDOM_T)
        assert np.all(np.sum(f.normal * f.z, axis=-1) > 0)


def test_derivatives_match_finite_differences():
    assert frame_derivative_check(disk(1.0), RANDOM_T) <= 1e-9
    assert frame_derivative_check(peanut(), RANDOM_T) <= 1e-7
    assert frame_derivative_check(acorn(), RANDOM_T) <= 1e-7


def test_frame_is_periodic():
    t = np.array([0.25, 1.0, 2.0, 4.0])
    t = t[(t + 2 * math.pi) - 2 * math.pi == t]
    for curve in (peanut(), acorn()):
        a, b = frame(curve, t), frame(curve, t + 2 * math.pi)
        assert np.allclose(a.z, b.z, rtol=0, atol=1e-14)
        assert np.allclose(a.ddz, b.ddz, rtol=0, atol=1e-13)


def test_chord_on_disk():
    rho, dot = chord(disk(1.0), math.pi, 0.0)
    assert abs(rho - 2.0) <= 1e-14
    assert abs(dot + 2.0) <= 1e-14
    s, t = np.meshgrid(RANDOM_T[:20], RANDOM_T[20:40], indexing="ij")
    rho, _ = chord(disk(1.5), s, t)
    assert np.max(np.abs(rho - 3.0 * np.abs(np.sin((s - t) / 2)))) <= 1e-14


def test_chord_on_peanut_matches_parametrization():
    s = math.pi / 3
    r = math.sqrt(0.25 + math.cos(s) ** 2)
    zs = np.array([r * math.cos(s), r * math.sin(s)])
    zt = np.array([math.sqrt(1.25), 0.0])
    rho, dot = chord(peanut(), s, 0.0)
    assert abs(rho - np.linalg.norm(zs - zt)) <= 1e-14
    assert abs(dot - (zs - zt)[0]) <= 1e-14


def test_signed_area():
    assert abs(signed_area(disk(2.0)) - 4 * math.pi) <= 1e-12
    assert abs(signed_area(peanut()) - 0.75 * math.pi) <= 1e-12
    assert abs(signed_area(acorn()) - 1.53 * math.pi) <= 1e-12


def test_radial_trig():
    curve = radial_trig([1.0, 0.1], [0.05])
    assert curve.kind is CurveKind.RADIAL_TRIG
    assert np.allclose(frame(curve, 0.0).z, [1.1, 0.0], atol=1e-15)
    assert frame_derivative_check(curve, RANDOM_T) <= 1e-7
    assert np.allclose(frame(radial_trig([2.0]), RANDOM_T).z, frame(disk(2.0), RANDOM_T).z, atol=1e-15)


def test_degenerate_curves():
    with pytest.raises(DegenerateCurveError):
        radial_trig([0.5, 1.0])
    with pytest.raises(ValueError):
        radial_trig([])
    with pytest.raises(ValueError):
        disk(-1.0)


def test_curve_from_spec():
    assert curve_from_spec("peanut") == peanut()
    assert curve_from_spec("disk", radius=0.5).radius == 0.5
    assert curve_from_spec("radial_trig", cos_coeffs=[1.0, 0.2]).cos_coeffs == (1.0, 0.2)
    with pytest.raises(ValueError):
        curve_from_spec("square")
