"""Smoothness and monotonicity penalties on 4D lattices.

Both penalties walk adjacent grid-point pairs along each of the four axes
(the differenced index stops at size - 2 so no pair reads out of bounds):

    smooth:       sum of squared forward differences, plus an L2 term on
                  the fusion coefficients;
    monotonicity: sum of max(0, current - next), charging any decrease.

Sums use numpy reductions (pairwise summation), so results are
deterministic on a fixed platform.
"""

from __future__ import annotations

import numpy as np

from .fusion import FusionCoefficients
from .lattice import Lattice4D

_AXES = (1, 2, 3, 4)  # grid axes l, k, j, i; axis 0 is the channel


def smooth_lut(l4: Lattice4D) -> float:
    grid = l4.grid
    return float(sum(np.sum(np.diff(grid, axis=a) ** 2) for a in _AXES))


def smooth_coef(coef: FusionCoefficients) -> float:
    return float(np.sum(coef.weights**2) + np.sum(coef.biases**2))


def smooth_total(l4: Lattice4D, coef: FusionCoefficients) -> float:
    return smooth_lut(l4) + smooth_coef(coef)


def monotonicity(l4: Lattice4D) -> float:
    grid = l4.grid
    total = 0.0
    for a in _AXES:
        d = np.diff(grid, axis=a)  # next - current
        total += np.sum(np.maximum(0.0, -d))
    return float(total)


def _pair_slices(axis: int):
    cur = [slice(None)] * 5
    nxt = [slice(None)] * 5
    cur[axis] = slice(None, -1)
    nxt[axis] = slice(1, None)
    return tuple(cur), tuple(nxt)


def smooth_lut_grad(l4: Lattice4D) -> np.ndarray:
    """Grid-shaped gradient of smooth_lut."""
    grid = l4.grid
    g = np.zeros_like(grid)
    for a in _AXES:
        d = np.diff(grid, axis=a)
        cur, nxt = _pair_slices(a)
        g[cur] -= 2.0 * d
        g[nxt] += 2.0 * d
    return g


def monotonicity_grad(l4: Lattice4D) -> np.ndarray:
    """Grid-shaped subgradient of monotonicity; ties contribute zero."""
    grid = l4.grid
    g = np.zeros_like(grid)
    for a in _AXES:
        d = np.diff(grid, axis=a)
        mask = (d < 0.0).astype(np.float64)  # current > next
        cur, nxt = _pair_slices(a)
        g[cur] += mask
        g[nxt] -= mask
    return g


def regularizer_backward(l4: Lattice4D, coef: FusionCoefficients,
                         alpha_s: float, alpha_m: float):
    """Gradients of alpha_s * smooth_total + alpha_m * monotonicity.

    Returns (grid-shaped lattice gradient, FusionCoefficients gradient).
    """
    lattice_grad = alpha_s * smooth_lut_grad(l4) + alpha_m * monotonicity_grad(l4)
    coef_grad = FusionCoefficients(2.0 * alpha_s * coef.weights,
                                   2.0 * alpha_s * coef.biases)
    return lattice_grad, coef_grad
