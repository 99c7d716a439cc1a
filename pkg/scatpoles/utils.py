from typing import Optional

import numpy as np


class NumericalError(ArithmeticError):
    """A computation broke down: singular solve, missing rank gap, no convergence."""


def raise_value_error(message: str):
    raise ValueError(message)


def raise_numerical_error(message: str):
    raise NumericalError(message)


def random_unit_vector(size: int, seed: Optional[int] = None) -> np.ndarray:
    """Unit-norm complex vector with independent normal real and imaginary parts."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return v / np.linalg.norm(v)


def random_block(rows: int, cols: int, seed: Optional[int] = None) -> np.ndarray:
    # separate stream from random_unit_vector for the same seed
    rng = np.random.default_rng(None if seed is None else [seed, 1])
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def format_complex(z: complex, digits: int = 15) -> str:
    sign = "-" if z.imag < 0 else "+"
    return f"{z.real:.{digits}g} {sign} {abs(z.imag):.{digits}g}i"
