"""Trilinear and quadrilinear lattice interpolation, forward and backward.

Coordinate convention: an input color component v in [0, 1] maps to the
lattice coordinate v * (size - 1); the context value c maps likewise along
its own axis. Inputs outside [0, 1] are clamped first. A coordinate sitting
exactly on the top node uses cell (size - 2) with offset 1.0, so the last
node is hit exactly without reading out of bounds.

The quadrilinear output is the 16-corner multilinear blend: for each axis
the corner factor is the offset (far corner) or one minus it (near corner),
and the 16 products of the four factors sum to one.

Everything here is pure; the image-level routines are vectorized over all
pixels and may be called concurrently on a read-only lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ShapeError
from .io import ContextMap, Image
from .lattice import CHANNELS, Lattice3D, Lattice4D

_CORNERS4 = tuple(product((0, 1), repeat=4))


def _cell(values: np.ndarray, size: int):
    """Clamp to [0, 1], map to lattice coords, split into cell index + offset."""
    coords = np.clip(values, 0.0, 1.0) * (size - 1)
    idx = np.minimum(np.floor(coords), size - 2).astype(np.intp)
    return idx, coords - idx


def trilinear(l3: Lattice3D, rgb) -> tuple[float, float, float]:
    """Interpolate one color triple through a 3D lattice (8-corner blend)."""
    n = l3.n_bin
    grid = l3.grid  # (ch, k, j, i)
    (i, ox), (j, oy), (k, oz) = (_cell(np.float64(v), n) for v in rgb)
    out = np.zeros(CHANNELS)
    for di, dj, dk in product((0, 1), repeat=3):
        w = ((ox if di else 1.0 - ox)
             * (oy if dj else 1.0 - oy)
             * (oz if dk else 1.0 - oz))
        out += w * grid[:, k + dk, j + dj, i + di]
    return tuple(float(v) for v in out)


def quadrilinear_planes(l4: Lattice4D, rgb: np.ndarray, ctx: np.ndarray) -> np.ndarray:
    """Vectorized 16-corner lookup.

    rgb has shape (3, ...) and ctx matches rgb.shape[1:]; returns the same
    shape as rgb.
    """
    grid = l4.grid  # (ch, l, k, j, i)
    i, ox = _cell(rgb[0], l4.n_bin)
    j, oy = _cell(rgb[1], l4.n_bin)
    k, oz = _cell(rgb[2], l4.n_bin)
    l, ou = _cell(ctx, l4.n_ctx)
    out = np.zeros_like(rgb, dtype=np.float64)
    for di, dj, dk, dl in _CORNERS4:
        w = ((ox if di else 1.0 - ox)
             * (oy if dj else 1.0 - oy)
             * (oz if dk else 1.0 - oz)
             * (ou if dl else 1.0 - ou))
        out += w[None] * grid[:, l + dl, k + dk, j + dj, i + di]
    return out


def quadrilinear(l4: Lattice4D, rgb, c: float) -> tuple[float, float, float]:
    """Interpolate one (color, context) sample through a 4D lattice."""
    rgb_arr = np.asarray(rgb, dtype=np.float64).reshape(CHANNELS, 1)
    out = quadrilinear_planes(l4, rgb_arr, np.asarray([c], dtype=np.float64))
    return tuple(float(v) for v in out[:, 0])


@dataclass
class InterpGrad:
    """Backward-pass result for one quadrilinear sample.

    lattice holds, per output channel, the 16 (flat buffer offset,
    upstream * corner weight) contributions. d_context is the derivative
    of upstream . output with respect to the [0, 1] context input, already
    chain-scaled by (n_ctx - 1); it is zero when the raw context value was
    clamped.
    """

    lattice: list[list[tuple[int, float]]]
    d_context: float


def quadrilinear_backward(l4: Lattice4D, rgb, c: float, upstream) -> InterpGrad:
    n, m = l4.n_bin, l4.n_ctx
    grid = l4.grid
    (i, ox), (j, oy), (k, oz) = (_cell(np.float64(v), n) for v in rgb)
    l, ou = _cell(np.float64(c), m)
    up = np.asarray(upstream, dtype=np.float64)
    contributions: list[list[tuple[int, float]]] = [[] for _ in range(CHANNELS)]
    d_u = 0.0
    for di, dj, dk, dl in _CORNERS4:
        wxyz = ((ox if di else 1.0 - ox)
                * (oy if dj else 1.0 - oy)
                * (oz if dk else 1.0 - oz))
        wu = ou if dl else 1.0 - ou
        w = wxyz * wu
        corner = grid[:, l + dl, k + dk, j + dj, i + di]
        for ch in range(CHANNELS):
            offset = l4.flat_offset(ch, i + di, j + dj, k + dk, l + dl)
            contributions[ch].append((offset, float(up[ch] * w)))
        d_u += wxyz * (1.0 if dl else -1.0) * float(up @ corner)
    if c < 0.0 or c > 1.0:
        d_context = 0.0  # clamped input: output is locally constant in c
    else:
        d_context = d_u * (m - 1)
    return InterpGrad(contributions, float(d_context))


def quadrilinear_planes_backward(l4: Lattice4D, rgb: np.ndarray, ctx: np.ndarray,
                                 upstream: np.ndarray):
    """Vectorized backward over all samples.

    Returns (d_grid, d_ctx): d_grid is lattice-grid-shaped (ch, l, k, j, i)
    and accumulates upstream * corner weight over every sample; d_ctx has
    ctx's shape and is the derivative with respect to the [0, 1] context
    values (zero where they were clamped).
    """
    grid = l4.grid
    n, m = l4.n_bin, l4.n_ctx
    i, ox = _cell(rgb[0], n)
    j, oy = _cell(rgb[1], n)
    k, oz = _cell(rgb[2], n)
    l, ou = _cell(ctx, m)
    d_grid = np.zeros_like(grid)
    d_u = np.zeros_like(ou)
    plane = m * n**3  # entries per channel
    for di, dj, dk, dl in _CORNERS4:
        wxyz = ((ox if di else 1.0 - ox)
                * (oy if dj else 1.0 - oy)
                * (oz if dk else 1.0 - oz))
        wu = ou if dl else 1.0 - ou
        offset = (((l + dl) * n + (k + dk)) * n + (j + dj)) * n + (i + di)
        w = (wxyz * wu).ravel()
        flat = offset.ravel()
        corner_dot_up = np.zeros(flat.shape)
        for ch in range(CHANNELS):
            np.add.at(d_grid.reshape(-1), ch * plane + flat, upstream[ch].ravel() * w)
            corner_dot_up += upstream[ch].ravel() * grid.reshape(-1)[ch * plane + flat]
        d_u += ((1.0 if dl else -1.0) * wxyz.ravel() * corner_dot_up).reshape(d_u.shape)
    d_ctx = d_u * (m - 1)
    d_ctx[(ctx < 0.0) | (ctx > 1.0)] = 0.0
    return d_grid, d_ctx


def apply_lut4(l4: Lattice4D, image: Image, context: ContextMap) -> Image:
    """Per-pixel quadrilinear lookup of an image against its context map."""
    if (image.height, image.width) != (context.height, context.width):
        raise ShapeError(
            f"image {image.height}x{image.width} vs context "
            f"{context.height}x{context.width}"
        )
    return Image(quadrilinear_planes(l4, image.planes, context.values))


def apply_lut4_backward(l4: Lattice4D, image: Image, context: ContextMap,
                        upstream: np.ndarray):
    """Gradients of apply_lut4: (lattice-grid gradient, context-map gradient)."""
    if upstream.shape != image.planes.shape:
        raise ShapeError(f"upstream {upstream.shape} vs image {image.planes.shape}")
    return quadrilinear_planes_backward(l4, image.planes, context.values, upstream)
