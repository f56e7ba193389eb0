"""Fourth-order finite-difference stencils on a uniform grid.

Hard-wall convention: values outside the grid are zero, matching the
Dirichlet boundary treatment of the PDE oracle.  The first-derivative
stencil is antisymmetric and the second-derivative stencil symmetric, so
Hamiltonians assembled from them stay discretely Hermitian.
"""
from __future__ import annotations

import numpy as np

__all__ = ["shift_zero", "d1_apply", "d2_apply"]


def shift_zero(psi: np.ndarray, k: int) -> np.ndarray:
    """Array whose entry i is psi[i + k], zero where i + k leaves the grid."""
    out = np.zeros_like(psi)
    if k == 0:
        out[:] = psi
    elif k > 0:
        out[:-k] = psi[k:]
    else:
        out[-k:] = psi[:k]
    return out


def d1_apply(psi: np.ndarray, h: float) -> np.ndarray:
    """(psi[i-2] - 8 psi[i-1] + 8 psi[i+1] - psi[i+2]) / (12 h)."""
    return (shift_zero(psi, -2) - 8.0 * shift_zero(psi, -1)
            + 8.0 * shift_zero(psi, 1) - shift_zero(psi, 2)) / (12.0 * h)


def d2_apply(psi: np.ndarray, h: float) -> np.ndarray:
    """(-psi[i-2] + 16 psi[i-1] - 30 psi[i] + 16 psi[i+1] - psi[i+2]) / (12 h^2)."""
    return (-shift_zero(psi, -2) + 16.0 * shift_zero(psi, -1) - 30.0 * psi
            + 16.0 * shift_zero(psi, 1) - shift_zero(psi, 2)) / (12.0 * h * h)
