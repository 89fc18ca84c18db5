"""Shared fixtures and independent oracle implementations.

The oracles here deliberately avoid the library's vectorized paths: they
index the flat value buffers with explicit offset arithmetic and sum terms
in plain Python loops, so they can catch layout or weighting mistakes in
the fast implementations.
"""

import math

import numpy as np
import pytest

from lut4d.lattice import Lattice3D, Lattice4D


def rel_close(a, b, tol):
    """|a - b| within tol relative to the larger magnitude (floor 1)."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def naive_trilinear(l3: Lattice3D, rgb):
    """8-term reference: explicit offsets, no shared code with the library."""
    n = l3.n_bin
    out = []
    coords = [min(max(v, 0.0), 1.0) * (n - 1) for v in rgb]
    idx = [min(int(math.floor(c)), n - 2) for c in coords]
    offs = [c - t for c, t in zip(coords, idx)]
    for ch in range(3):
        acc = 0.0
        for di in (0, 1):
            for dj in (0, 1):
                for dk in (0, 1):
                    w = ((offs[0] if di else 1 - offs[0])
                         * (offs[1] if dj else 1 - offs[1])
                         * (offs[2] if dk else 1 - offs[2]))
                    flat = (ch * n**3 + (idx[2] + dk) * n**2
                            + (idx[1] + dj) * n + (idx[0] + di))
                    acc += w * float(l3.values[flat])
        out.append(acc)
    return tuple(out)


def naive_quadrilinear(l4: Lattice4D, rgb, c):
    """16-term reference with explicit offset arithmetic."""
    n, m = l4.n_bin, l4.n_ctx
    coords = [min(max(v, 0.0), 1.0) * (n - 1) for v in rgb]
    coords.append(min(max(c, 0.0), 1.0) * (m - 1))
    sizes = [n, n, n, m]
    idx = [min(int(math.floor(v)), s - 2) for v, s in zip(coords, sizes)]
    offs = [v - t for v, t in zip(coords, idx)]
    out = []
    for ch in range(3):
        acc = 0.0
        for di in (0, 1):
            for dj in (0, 1):
                for dk in (0, 1):
                    for dl in (0, 1):
                        w = ((offs[0] if di else 1 - offs[0])
                             * (offs[1] if dj else 1 - offs[1])
                             * (offs[2] if dk else 1 - offs[2])
                             * (offs[3] if dl else 1 - offs[3]))
                        flat = (ch * m * n**3 + (idx[3] + dl) * n**3
                                + (idx[2] + dk) * n**2 + (idx[1] + dj) * n
                                + (idx[0] + di))
                        acc += w * float(l4.values[flat])
        out.append(acc)
    return tuple(out)


def random_lattice3(rng, n_bin):
    return Lattice3D(n_bin, rng.random(3 * n_bin**3))


def random_lattice4(rng, n_bin, n_ctx):
    return Lattice4D(n_bin, n_ctx, rng.random(3 * n_bin**3 * n_ctx))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
