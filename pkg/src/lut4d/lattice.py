"""3D and 4D lookup-table lattices.

A lattice stores one output color triple per grid point. Values live in a
single flat float64 buffer whose layout is fixed and shared with the file
format and the interpolators:

    3D: offset(ch, i, j, k)    = ch*n**3            + k*n**2 + j*n + i
    4D: offset(ch, i, j, k, l) = ch*n**3*n_ctx + l*n**3 + k*n**2 + j*n + i

i.e. channel-major, then context index l (4D only), then k, j, i with the
red coordinate i running fastest. The ``grid`` views below expose the same
buffer as shaped arrays without copying.

All color and context coordinates are normalized to [0, 1]; grid point i
of an axis with ``size`` points sits at i/(size-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

CHANNELS = 3


def _check_axis(name: str, size: int) -> int:
    size = int(size)
    if size < 2:
        raise InvalidArgumentError(f"{name} must be >= 2, got {size}")
    return size


@dataclass
class Lattice3D:
    """RGB -> RGB lookup lattice with ``n_bin`` points per axis."""

    n_bin: int
    values: np.ndarray

    def __post_init__(self):
        self.n_bin = _check_axis("n_bin", self.n_bin)
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        expected = CHANNELS * self.n_bin**3
        if self.values.size != expected:
            raise InvalidArgumentError(
                f"buffer length {self.values.size} != {expected} for n_bin={self.n_bin}"
            )
        if not np.all(np.isfinite(self.values)):
            raise InvalidArgumentError("lattice values must be finite")

    @property
    def grid(self) -> np.ndarray:
        """View with axes (channel, k, j, i)."""
        n = self.n_bin
        return self.values.reshape(CHANNELS, n, n, n)

    def copy(self) -> "Lattice3D":
        return Lattice3D(self.n_bin, self.values.copy())


@dataclass
class Lattice4D:
    """RGB+Context -> RGB lookup lattice.

    ``n_bin`` points per color axis, ``n_ctx`` points along the context
    axis. Entry (i, j, k, l) maps the color (i, j, k)/(n_bin-1) seen at
    context l/(n_ctx-1).
    """

    n_bin: int
    n_ctx: int
    values: np.ndarray

    def __post_init__(self):
        self.n_bin = _check_axis("n_bin", self.n_bin)
        self.n_ctx = _check_axis("n_ctx", self.n_ctx)
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        expected = CHANNELS * self.n_bin**3 * self.n_ctx
        if self.values.size != expected:
            raise InvalidArgumentError(
                f"buffer length {self.values.size} != {expected} "
                f"for n_bin={self.n_bin}, n_ctx={self.n_ctx}"
            )
        if not np.all(np.isfinite(self.values)):
            raise InvalidArgumentError("lattice values must be finite")

    @property
    def grid(self) -> np.ndarray:
        """View with axes (channel, l, k, j, i)."""
        n, m = self.n_bin, self.n_ctx
        return self.values.reshape(CHANNELS, m, n, n, n)

    def copy(self) -> "Lattice4D":
        return Lattice4D(self.n_bin, self.n_ctx, self.values.copy())

    def flat_offset(self, channel: int, i: int, j: int, k: int, l: int) -> int:
        """Flat buffer offset of one entry; raises IndexError out of bounds."""
        n, m = self.n_bin, self.n_ctx
        for name, v, size in (("channel", channel, CHANNELS), ("i", i, n),
                              ("j", j, n), ("k", k, n), ("l", l, m)):
            if not 0 <= v < size:
                raise IndexError(f"{name}={v} out of range [0, {size})")
        return ((channel * m + l) * n**2 + k * n + j) * n + i


@dataclass(frozen=True)
class GridIndex4:
    """Integer grid coordinates (i, j, k, l) of one 4D lattice node."""

    i: int
    j: int
    k: int
    l: int = field(default=0)


def get_value(lattice: Lattice4D, index: GridIndex4, channel: int) -> float:
    return float(lattice.values[lattice.flat_offset(channel, index.i, index.j, index.k, index.l)])


def set_value(lattice: Lattice4D, index: GridIndex4, channel: int, value: float) -> None:
    lattice.values[lattice.flat_offset(channel, index.i, index.j, index.k, index.l)] = value


def identity_lattice3(n_bin: int) -> Lattice3D:
    """Lattice whose entry at (i, j, k) is its own coordinate triple."""
    n = _check_axis("n_bin", n_bin)
    axis = np.linspace(0.0, 1.0, n)
    grid = np.empty((CHANNELS, n, n, n))
    grid[0] = axis[None, None, :]   # red varies with i
    grid[1] = axis[None, :, None]   # green with j
    grid[2] = axis[:, None, None]   # blue with k
    return Lattice3D(n, grid.reshape(-1))


def constant_lattice3(n_bin: int, value) -> Lattice3D:
    n = _check_axis("n_bin", n_bin)
    r, g, b = (float(v) for v in value)
    grid = np.empty((CHANNELS, n, n, n))
    grid[0], grid[1], grid[2] = r, g, b
    return Lattice3D(n, grid.reshape(-1))


def identity_lattice4(n_bin: int, n_ctx: int) -> Lattice4D:
    """4D lattice realizing the identity color map at every context."""
    return replicate_3d_to_4d(identity_lattice3(n_bin), n_ctx)


def constant_lattice4(n_bin: int, n_ctx: int, value) -> Lattice4D:
    return replicate_3d_to_4d(constant_lattice3(n_bin, value), n_ctx)


def zero_lattice4(n_bin: int, n_ctx: int) -> Lattice4D:
    n = _check_axis("n_bin", n_bin)
    m = _check_axis("n_ctx", n_ctx)
    return Lattice4D(n, m, np.zeros(CHANNELS * n**3 * m))


def replicate_3d_to_4d(l3: Lattice3D, n_ctx: int) -> Lattice4D:
    """Stack a 3D lattice along a new context axis; constant in l."""
    m = _check_axis("n_ctx", n_ctx)
    grid = np.broadcast_to(l3.grid[:, None], (CHANNELS, m) + l3.grid.shape[1:])
    return Lattice4D(l3.n_bin, m, np.ascontiguousarray(grid).reshape(-1))


def slice_context(l4: Lattice4D, l: int) -> Lattice3D:
    """Extract the 3D lattice at a fixed context index."""
    if not 0 <= l < l4.n_ctx:
        raise IndexError(f"l={l} out of range [0, {l4.n_ctx})")
    return Lattice3D(l4.n_bin, np.ascontiguousarray(l4.grid[:, l]).reshape(-1))
