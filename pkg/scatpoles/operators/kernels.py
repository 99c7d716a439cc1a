"""Log-split kernel factors of the single and double layer operators.

For fixed kappa the parametrised kernels are written as

    a(s, t) ln(4 sin^2((s - t) / 2)) + b(s, t)

with smooth a, b. The factor 2 relating the layer kernels to S(kappa) and
D(kappa) is part of a and b, so assembled matrices represent S and D.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np

from scatpoles.constants import EULER_GAMMA, TWO_PI
from scatpoles.geometry.curve import Curve, chord, frame
from scatpoles.special.bessel import bessel_jy
from scatpoles.utils import raise_value_error

Angle = Union[float, np.ndarray]

COINCIDENCE_TOL = 1e-13


class KernelFlavor(Enum):
    SINGLE_LAYER = "single"
    DOUBLE_LAYER = "double"


@dataclass(frozen=True)
class KernelSplit:
    """Kernel split at a fixed complex wavenumber.

    Args:
        kappa (complex): Wavenumber, nonzero.
        curve (Curve): Boundary.
        flavor (KernelFlavor): Single or double layer.
    """

    kappa: complex
    curve: Curve
    flavor: KernelFlavor

    def __post_init__(self):
        if self.kappa == 0:
            raise_value_error("KernelSplit: kappa must be nonzero")
        object.__setattr__(self, "kappa", complex(self.kappa))


def _coincident(s: np.ndarray, t: np.ndarray) -> np.ndarray:
    d = np.mod(s - t + math.pi, TWO_PI) - math.pi
    return np.abs(d) < COINCIDENCE_TOL


def _log_weight(s: np.ndarray, t: np.ndarray) -> np.ndarray:
    return np.log(4.0 * np.sin((s - t) / 2.0) ** 2)


def sample_split(ks: KernelSplit, s: Angle, t: Angle) -> Tuple[np.ndarray, np.ndarray]:
    """Both factors a(s, t), b(s, t) on broadcast arrays; coincident points use the diagonal limits."""
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    diag = _coincident(s, t)
    off = ~diag
    kappa = ks.kappa
    ft = frame(ks.curve, t)
    speed = ft.speed
    a = np.zeros(s.shape, dtype=np.complex128)
    b = np.zeros(s.shape, dtype=np.complex128)

    if np.any(off):
        rho, dot = chord(ks.curve, s[off], t[off])
        w = kappa * rho
        log_w = _log_weight(s[off], t[off])
        if ks.flavor is KernelFlavor.SINGLE_LAYER:
            j0, y0 = bessel_jy(0, w)
            a_off = -j0 * speed[off] / TWO_PI
            b_off = 0.5j * (j0 + 1j * y0) * speed[off] - a_off * log_w
        else:
            j1, y1 = bessel_jy(1, w)
            cosine = dot / rho
            a_off = -(kappa / TWO_PI) * cosine * j1 * speed[off]
            b_off = 0.5j * kappa * cosine * (j1 + 1j * y1) * speed[off] - a_off * log_w
        a[off] = a_off
        b[off] = b_off

    if np.any(diag):
        sp = speed[diag]
        if ks.flavor is KernelFlavor.SINGLE_LAYER:
            a[diag] = -sp / TWO_PI
            log_term = np.log(kappa * kappa / 4.0 * sp * sp)
            b[diag] = (0.5j - EULER_GAMMA / math.pi - log_term / TWO_PI) * sp
        else:
            curvature = np.sum(ft.ddz[diag] * ft.normal[diag], axis=-1)
            b[diag] = curvature / (TWO_PI * sp)
    return a, b


def _scalar_or_array(values: np.ndarray, s, t) -> Union[complex, np.ndarray]:
    return complex(values) if np.ndim(s) == 0 and np.ndim(t) == 0 else values


def eval_a(ks: KernelSplit, s: Angle, t: Angle):
    """Factor a(s, t) multiplying the logarithm (a_S or a_D)."""
    a, _ = sample_split(ks, s, t)
    return _scalar_or_array(a, s, t)


def eval_b(ks: KernelSplit, s: Angle, t: Angle):
    """Smooth remainder b(s, t) (b_S or b_D)."""
    _, b = sample_split(ks, s, t)
    return _scalar_or_array(b, s, t)


def reconstruct_kernel(ks: KernelSplit, s: Angle, t: Angle):
    """a(s, t) ln(4 sin^2((s - t) / 2)) + b(s, t) away from the diagonal."""
    s_arr, t_arr = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    if np.any(_coincident(s_arr, t_arr)):
        raise_value_error("reconstruct_kernel: s and t coincide; the split kernel is singular there")
    a, b = sample_split(ks, s_arr, t_arr)
    return _scalar_or_array(a * _log_weight(s_arr, t_arr) + b, s, t)


def direct_kernel(ks: KernelSplit, s: Angle, t: Angle):
    """Unsplit integrand: (i/2) H_0(kappa rho)|z'| or (i kappa / 2)(dot / rho) H_1(kappa rho)|z'|."""
    s_arr, t_arr = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    rho, dot = chord(ks.curve, s_arr, t_arr)
    speed = frame(ks.curve, t_arr).speed
    if ks.flavor is KernelFlavor.SINGLE_LAYER:
        j, y = bessel_jy(0, ks.kappa * rho)
        values = 0.5j * (j + 1j * y) * speed
    else:
        j, y = bessel_jy(1, ks.kappa * rho)
        values = 0.5j * ks.kappa * (dot / rho) * (j + 1j * y) * speed
    return _scalar_or_array(np.asarray(values), s, t)


def diagonal_continuity(ks: KernelSplit, t: float, h: float) -> float:
    """|b(t + h, t) - b(t, t)|; tends to zero with h since b is continuous on the diagonal."""
    if not 1e-6 <= h <= 1e-2:
        raise_value_error(f"diagonal_continuity: h must lie in [1e-6, 1e-2], got {h}")
    return abs(eval_b(ks, t + h, t) - eval_b(ks, t, t))

