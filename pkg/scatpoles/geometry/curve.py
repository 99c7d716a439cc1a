"""Smooth closed boundary curves z(t) = r(t) (cos t, sin t) with analytic derivatives."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from scatpoles.constants import TWO_PI
from scatpoles.utils import raise_value_error

Angle = Union[float, np.ndarray]

RADIAL_VALIDITY_POINTS = 4096
AREA_QUADRATURE_POINTS = 1024
MIN_SPEED = 1e-12


class DegenerateCurveError(ValueError):
    """Parametrisation with vanishing speed, non-positive radius or clockwise orientation."""


class CurveKind(Enum):
    DISK = "disk"
    PEANUT = "peanut"
    ACORN = "acorn"
    RADIAL_TRIG = "radial_trig"


@dataclass(frozen=True)
class CurveFrame:
    """Point, derivatives and outward unit normal at parameter(s) t.

    Vector fields have a trailing axis of length 2.
    """

    z: np.ndarray
    dz: np.ndarray
    ddz: np.ndarray
    normal: np.ndarray
    speed: np.ndarray


@dataclass(frozen=True)
class Curve:
    """Star-shaped curve given by its radius function r(t).

    Use the constructors `disk`, `peanut`, `acorn` and `radial_trig` rather
    than instantiating directly; they validate the curve.

    Examples:
        >>> from scatpoles.geometry.curve import disk, frame
        >>> frame(disk(1.0), 0.0).normal
        array([1., 0.])
    """

    kind: CurveKind
    radius: float = 1.0
    cos_coeffs: Tuple[float, ...] = field(default_factory=tuple)
    sin_coeffs: Tuple[float, ...] = field(default_factory=tuple)

    def radial(self, t: Angle) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """r(t), r'(t), r''(t)."""
        t = np.asarray(t, dtype=float)
        if self.kind is CurveKind.DISK:
            r = np.full_like(t, self.radius)
            return r, np.zeros_like(t), np.zeros_like(t)
        if self.kind is CurveKind.PEANUT:
            # r = sqrt(q), q = 1/4 + cos^2 t
            c = np.cos(t)
            q = 0.25 + c * c
            dq = -np.sin(2.0 * t)
            ddq = -2.0 * np.cos(2.0 * t)
            return _sqrt_radial(1.0, q, dq, ddq)
        if self.kind is CurveKind.ACORN:
            # r = 0.6 sqrt(q), q = 17/4 + 2 cos 3t
            q = 4.25 + 2.0 * np.cos(3.0 * t)
            dq = -6.0 * np.sin(3.0 * t)
            ddq = -18.0 * np.cos(3.0 * t)
            return _sqrt_radial(0.6, q, dq, ddq)
        r = np.zeros_like(t)
        dr = np.zeros_like(t)
        ddr = np.zeros_like(t)
        for k, a in enumerate(self.cos_coeffs):
            r = r + a * np.cos(k * t)
            dr = dr - k * a * np.sin(k * t)
            ddr = ddr - k * k * a * np.cos(k * t)
        for k, b in enumerate(self.sin_coeffs, start=1):
            r = r + b * np.sin(k * t)
            dr = dr + k * b * np.cos(k * t)
            ddr = ddr - k * k * b * np.sin(k * t)
        return r, dr, ddr

    def point(self, t: Angle) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        r = self.radial(t)[0]
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)


def _sqrt_radial(scale: float, q, dq, ddq):
    root = np.sqrt(q)
    r = scale * root
    dr = scale * dq / (2.0 * root)
    ddr = scale * (ddq / (2.0 * root) - dq * dq / (4.0 * q * root))
    return r, dr, ddr


def _validated(curve: Curve) -> Curve:
    t = np.linspace(0.0, TWO_PI, RADIAL_VALIDITY_POINTS, endpoint=False)
    r = curve.radial(t)[0]
    if np.any(r <= 0):
        raise DegenerateCurveError(f"Curve: radius must stay positive, min r = {r.min():.6g}")
    if np.min(frame(curve, t).speed) < MIN_SPEED:
        raise DegenerateCurveError("Curve: |z'(t)| vanishes on the validation grid")
    if signed_area(curve) <= 0:
        raise DegenerateCurveError("Curve: orientation must be counterclockwise")
    return curve


def disk(radius: float = 1.0) -> Curve:
    if not radius > 0:
        raise_value_error(f"Curve: disk radius must be positive, got {radius}")
    return _validated(Curve(kind=CurveKind.DISK, radius=float(radius)))


def peanut() -> Curve:
    """sqrt(0.25 + cos^2 t) (cos t, sin t)."""
    return _validated(Curve(kind=CurveKind.PEANUT))


def acorn() -> Curve:
    """0.6 sqrt(17/4 + 2 cos 3t) (cos t, sin t)."""
    return _validated(Curve(kind=CurveKind.ACORN))


def radial_trig(cos_coeffs: Sequence[float], sin_coeffs: Sequence[float] = ()) -> Curve:
    """r(t) = a_0 + sum_k a_k cos kt + b_k sin kt with ``cos_coeffs = (a_0, a_1, ...)``, ``sin_coeffs = (b_1, ...)``."""
    if len(cos_coeffs) == 0:
        raise_value_error("Curve: radial_trig needs at least the constant coefficient")
    return _validated(
        Curve(
            kind=CurveKind.RADIAL_TRIG,
            cos_coeffs=tuple(float(a) for a in cos_coeffs),
            sin_coeffs=tuple(float(b) for b in sin_coeffs),
        )
    )


def curve_from_spec(
    kind: str,
    radius: float = 1.0,
    cos_coeffs: Optional[Sequence[float]] = None,
    sin_coeffs: Optional[Sequence[float]] = None,
) -> Curve:
    try:
        curve_kind = CurveKind(kind)
    except ValueError:
        return raise_value_error(f"Curve: unknown kind {kind!r}")
    if curve_kind is CurveKind.DISK:
        return disk(radius)
    if curve_kind is CurveKind.PEANUT:
        return peanut()
    if curve_kind is CurveKind.ACORN:
        return acorn()
    return radial_trig(cos_coeffs or (), sin_coeffs or ())


def frame(curve: Curve, t: Angle) -> CurveFrame:
    """z, z', z'' and the outward normal (z2', -z1') / |z'| at t (reduced mod 2 pi)."""
    t = np.mod(np.asarray(t, dtype=float), TWO_PI)
    r, dr, ddr = curve.radial(t)
    c, s = np.cos(t), np.sin(t)
    e = np.stack([c, s], axis=-1)
    e_perp = np.stack([-s, c], axis=-1)
    r_, dr_, ddr_ = r[..., None], dr[..., None], ddr[..., None]
    z = r_ * e
    dz = dr_ * e + r_ * e_perp
    ddz = ddr_ * e + 2.0 * dr_ * e_perp - r_ * e
    speed = np.hypot(dz[..., 0], dz[..., 1])
    if np.any(speed < MIN_SPEED):
        raise DegenerateCurveError("frame: degenerate parametrisation, |z'(t)| < 1e-12")
    normal = np.stack([dz[..., 1], -dz[..., 0]], axis=-1) / speed[..., None]
    return CurveFrame(z=z, dz=dz, ddz=ddz, normal=normal, speed=speed)


def signed_area(curve: Curve, points: int = AREA_QUADRATURE_POINTS) -> float:
    """(1/2) closed integral of z1 z2' - z2 z1' by the trapezoid rule."""
    t = np.linspace(0.0, TWO_PI, points, endpoint=False)
    f = frame(curve, t)
    integrand = f.z[:, 0] * f.dz[:, 1] - f.z[:, 1] * f.dz[:, 0]
    return float(0.5 * TWO_PI * np.mean(integrand))


def chord(curve: Curve, s: Angle, t: Angle) -> Tuple[np.ndarray, np.ndarray]:
    """Distance rho = |z(s) - z(t)| and dot = (z(s) - z(t)) . nu(z(t)); broadcasts s and t."""
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    ft = frame(curve, t)
    diff = curve.point(np.mod(s, TWO_PI)) - ft.z
    rho = np.hypot(diff[..., 0], diff[..., 1])
    dot = diff[..., 0] * ft.normal[..., 0] + diff[..., 1] * ft.normal[..., 1]
    return rho, dot


def frame_derivative_check(curve: Curve, t: Angle, step: float = 1e-4) -> float:
    """Max relative deviation of z', z'' from fourth-order central differences of z.

    z' uses ``step``; z'' uses ``10 * step`` because the second difference
    divides the rounding error by step squared.
    """
    t = np.asarray(t, dtype=float)
    f = frame(curve, t)

    def central(h):
        zp1, zm1 = curve.point(t + h), curve.point(t - h)
        zp2, zm2 = curve.point(t + 2 * h), curve.point(t - 2 * h)
        return zp1, zm1, zp2, zm2

    zp1, zm1, zp2, zm2 = central(step)
    d1 = (-zp2 + 8.0 * zp1 - 8.0 * zm1 + zm2) / (12.0 * step)
    h2 = 10.0 * step
    zp1, zm1, zp2, zm2 = central(h2)
    d2 = (-zp2 + 16.0 * zp1 - 30.0 * f.z + 16.0 * zm1 - zm2) / (12.0 * h2 * h2)
    dev1 = np.linalg.norm(d1 - f.dz, axis=-1) / np.linalg.norm(f.dz, axis=-1)
    dev2 = np.linalg.norm(d2 - f.ddz, axis=-1) / np.maximum(np.linalg.norm(f.ddz, axis=-1), 1.0)
    return float(max(np.max(dev1), np.max(dev2)))
