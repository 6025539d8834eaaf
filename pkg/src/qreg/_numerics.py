"""Central differences and quadrature on uniform grids.

Quadrature is h * sum(values): the trapezoid rule on the Dirichlet box whose
ghost nodes carry zeros.  It is the inner product under which the
finite-difference Hamiltonian is symmetric, so discrete eigenvectors satisfy
their Rayleigh and action identities to rounding.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

_FIRST = {
    2: (-1 / 2, 0.0, 1 / 2),
    4: (1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12),
    6: (-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60),
}
_SECOND = {
    2: (1.0, -2.0, 1.0),
    4: (-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12),
    6: (1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90),
}


def central_difference(values: np.ndarray, h: float, derivative: int, accuracy: int = 2) -> np.ndarray:
    """Derivative by a centred stencil; points the stencil cannot reach are NaN."""
    table = {1: _FIRST, 2: _SECOND}.get(derivative)
    if table is None or accuracy not in table:
        raise DomainError(f"no centred stencil for derivative={derivative}, accuracy={accuracy}")
    coeffs = table[accuracy]
    half = len(coeffs) // 2
    values = np.asarray(values, dtype=float)
    out = np.full(values.shape, np.nan)
    n = values.size
    if n <= 2 * half:
        return out
    acc = np.zeros(n - 2 * half)
    for j, c in enumerate(coeffs):
        if c != 0.0:
            acc += c * values[j : n - 2 * half + j]
    out[half : n - half] = acc / h**derivative
    return out


def integrate(values: np.ndarray, h: float) -> float:
    return float(h * np.sum(values))


def gradient_energy(values: np.ndarray, h: float, boundary: str = "dirichlet") -> float:
    """Sum of squared forward differences, approximating the integral of (X')^2.

    ``dirichlet`` includes the two ghost intervals (zero beyond the grid);
    ``open`` uses only intervals between grid points.
    """
    values = np.asarray(values, dtype=float)
    if boundary == "dirichlet":
        padded = np.concatenate(([0.0], values, [0.0]))
    elif boundary == "open":
        padded = values
    else:
        raise DomainError(f"unknown boundary treatment {boundary!r}")
    return float(np.sum(np.diff(padded) ** 2) / h)
