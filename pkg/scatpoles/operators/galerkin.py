"""Fourier-Galerkin matrices of the split boundary integral operators.

Basis e_m(t) = exp(imt) / sqrt(2 pi), |m| <= n. Row/column index m is stored
at position m + n, so every matrix is (2n + 1) x (2n + 1).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Union

import numpy as np
import scipy.fft

from scatpoles.constants import TWO_PI
from scatpoles.geometry.curve import Curve
from scatpoles.operators.kernels import KernelFlavor, KernelSplit, sample_split
from scatpoles.utils import raise_value_error

logger = logging.getLogger(__name__)


class OperatorFlavor(Enum):
    S_N = "S_n"
    I_PLUS_D_N = "I_plus_D_n"
    K = "K"

    @classmethod
    def from_name(cls, name: Union[str, "OperatorFlavor"]) -> "OperatorFlavor":
        """Accept enum members, their values or the short names ``single`` / ``double``."""
        if isinstance(name, OperatorFlavor):
            return name
        aliases = {"single": cls.S_N, "double": cls.I_PLUS_D_N}
        if name in aliases:
            return aliases[name]
        try:
            return cls(name)
        except ValueError:
            return raise_value_error(f"OperatorFlavor: unknown flavor {name!r}")

    @property
    def short_name(self) -> str:
        return {OperatorFlavor.S_N: "single", OperatorFlavor.I_PLUS_D_N: "double"}.get(self, self.value)

    @property
    def kernel_flavor(self) -> KernelFlavor:
        if self is OperatorFlavor.S_N:
            return KernelFlavor.SINGLE_LAYER
        if self is OperatorFlavor.I_PLUS_D_N:
            return KernelFlavor.DOUBLE_LAYER
        return raise_value_error("OperatorFlavor: K has no kernel split at a wavenumber")


@dataclass(frozen=True)
class TrigCoeffs:
    """Coefficients c[j + n, k + n] of Q f(s, t) = sum c_{j,k} e_j(s) e_k(t)."""

    n: int
    c: np.ndarray

    @property
    def size(self) -> int:
        return 2 * self.n + 1


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense Galerkin matrix of S_n(kappa), I + D_n(kappa) or K."""

    n: int
    flavor: OperatorFlavor
    kappa: complex
    entries: np.ndarray

    def __post_init__(self):
        self.entries.flags.writeable = False


def knots(n: int) -> np.ndarray:
    """Equidistant knots 2 pi l / (2n + 1), l = 0..2n."""
    return TWO_PI * np.arange(2 * n + 1) / (2 * n + 1)


def interpolate2d(samples: np.ndarray, n: int) -> TrigCoeffs:
    """Trigonometric interpolation of samples f(s_l, t_m) on the (2n + 1)^2 knot grid.

    c_{j,k} = 2 pi / (2n + 1)^2 sum f(s_l, t_m) exp(-i j s_l) exp(-i k t_m),
    computed by a 2-D FFT with the zero frequency shifted to the centre.
    """
    size = 2 * n + 1
    samples = np.asarray(samples)
    if samples.shape != (size, size):
        return raise_value_error(f"interpolate2d: expected samples of shape {(size, size)}, got {samples.shape}")
    spectrum = scipy.fft.fftshift(scipy.fft.fft2(samples))
    return TrigCoeffs(n=n, c=spectrum * (TWO_PI / size**2))


def inverse_interpolate(coeffs: TrigCoeffs, s, t) -> np.ndarray:
    """Evaluate Q f at broadcast points (s, t)."""
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    m = np.arange(-coeffs.n, coeffs.n + 1)
    es = np.exp(1j * s[..., None] * m)
    et = np.exp(1j * t[..., None] * m)
    return np.einsum("...j,jk,...k->...", es, coeffs.c, et) / TWO_PI


def assemble_B(coeffs: TrigCoeffs) -> np.ndarray:  # noqa: N802
    """Galerkin matrix of the smooth-kernel operator: entry (i, l) = c_{i,-l}."""
    return coeffs.c[:, ::-1].copy()


def assemble_A(coeffs: TrigCoeffs) -> np.ndarray:  # noqa: N802
    """Galerkin matrix of the log-weighted operator.

    With ln(4 sin^2(tau / 2)) = -sum_{m != 0} exp(i m tau) / |m| the entry is
    (i, l) = -sum_{k != -l} c_{i-k-l, k} / |k + l|. Writing q = k + l this is a
    weighted sum of copies of the B matrix shifted by q along the diagonal.
    """
    b0 = assemble_B(coeffs)
    size = coeffs.size
    out = np.zeros_like(b0)
    for q in range(1, size):
        out[q:, q:] -= b0[: size - q, : size - q] / q
        out[: size - q, : size - q] -= b0[q:, q:] / q
    return out


def assemble_operator(
    curve: Curve,
    kappa: complex,
    n: int,
    flavor: Union[str, OperatorFlavor],
) -> OperatorMatrix:
    """Assemble S_n(kappa) or I + D_n(kappa) from interpolated split kernels.

    Args:
        curve (Curve): Boundary.
        kappa (complex): Nonzero wavenumber.
        n (int): Truncation order, >= 2.
        flavor: ``S_n`` / ``single`` or ``I_plus_D_n`` / ``double``.

    Examples:
        >>> from scatpoles.geometry.curve import disk
        >>> w = assemble_operator(disk(1.0), 2.0 - 1.0j, 8, "single")
        >>> w.entries.shape
        (17, 17)
    """
    flavor = OperatorFlavor.from_name(flavor)
    if n < 2:
        raise_value_error(f"assemble_operator: n must be >= 2, got {n}")
    split = KernelSplit(kappa=kappa, curve=curve, flavor=flavor.kernel_flavor)
    grid = knots(n)
    s, t = np.meshgrid(grid, grid, indexing="ij")
    a, b = sample_split(split, s, t)
    entries = assemble_A(interpolate2d(a, n)) + assemble_B(interpolate2d(b, n))
    if flavor is OperatorFlavor.I_PLUS_D_N:
        entries += np.eye(2 * n + 1)
    if not np.all(np.isfinite(entries)):
        raise_value_error(f"assemble_operator: non-finite entries at kappa={kappa}")
    return OperatorMatrix(n=n, flavor=flavor, kappa=complex(kappa), entries=entries)


def k_operator_diagonal(n: int) -> np.ndarray:
    """Eigenvalues of K in index order -n..n: 1 at m = 0, 1/|m| otherwise."""
    m = np.abs(np.arange(-n, n + 1))
    return np.where(m == 0, 1.0, 1.0 / np.maximum(m, 1))


def k_operator_matrix(n: int) -> OperatorMatrix:
    """Galerkin matrix of K[phi](s) = -(1/2pi) int [ln(4 sin^2((s - t)/2)) - 1] phi(t) dt.

    Built from the constant split a = -1/(2 pi), b = 1/(2 pi).
    """
    if n < 1:
        raise_value_error(f"k_operator_matrix: n must be >= 1, got {n}")
    size = 2 * n + 1
    c_a = np.zeros((size, size), dtype=np.complex128)
    c_b = np.zeros((size, size), dtype=np.complex128)
    c_a[n, n] = -1.0
    c_b[n, n] = 1.0
    entries = assemble_A(TrigCoeffs(n=n, c=c_a)) + assemble_B(TrigCoeffs(n=n, c=c_b))
    return OperatorMatrix(n=n, flavor=OperatorFlavor.K, kappa=0j, entries=entries)


def dump_operator_matrix(matrix: OperatorMatrix, path: Union[str, Path]) -> Path:
    """Write a matrix to ``.npz`` with keys ``entries``, ``n``, ``flavor``, ``kappa``."""
    path = Path(path)
    np.savez(
        path,
        entries=np.asarray(matrix.entries),
        n=np.int64(matrix.n),
        flavor=np.str_(matrix.flavor.value),
        kappa=np.complex128(matrix.kappa),
    )
    logger.debug(f"dump_operator_matrix: wrote {matrix.flavor.value} n={matrix.n} to {path}")
    return path if path.suffix == ".npz" else path.with_suffix(path.suffix + ".npz")


def load_operator_matrix(path: Union[str, Path]) -> OperatorMatrix:
    with np.load(Path(path)) as data:
        return OperatorMatrix(
            n=int(data["n"]),
            flavor=OperatorFlavor(str(data["flavor"])),
            kappa=complex(data["kappa"]),
            entries=np.array(data["entries"]),
        )
