"""Blend a bank of basis 4D lattices into one lattice.

A bank of N basis lattices is fused with 3*N^2 weights and N biases. The
weight vector is three blocks of 3*N, one per output channel in r, g, b
order; within a block the first N weights multiply the basis red spaces,
the next N the green spaces, the last N the blue spaces. The N biases are
shared across output channels, each adding a flat offset per basis slot:

    fused[out] = sum_n ( W[out, r, n] * basis_n[r]
                       + W[out, g, n] * basis_n[g]
                       + W[out, b, n] * basis_n[b] + bias_n )

Fusion is linear in both the coefficients and the basis entries, so the
backward pass below is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, ShapeError
from .lattice import CHANNELS, Lattice4D, identity_lattice4, zero_lattice4


def weight_count(n_lut: int) -> int:
    return 3 * n_lut * n_lut


@dataclass
class FusionCoefficients:
    """Image-adaptive mixing weights (3*N^2) and biases (N) for N basis LUTs."""

    weights: np.ndarray
    biases: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        self.biases = np.asarray(self.biases, dtype=np.float64).reshape(-1)
        n = self.biases.size
        if n < 1:
            raise InvalidArgumentError("need at least one bias")
        if self.weights.size != weight_count(n):
            raise InvalidArgumentError(
                f"{self.weights.size} weights do not match {n} biases "
                f"(expected {weight_count(n)})"
            )
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.biases))):
            raise InvalidArgumentError("coefficients must be finite")

    @property
    def n_lut(self) -> int:
        return self.biases.size

    @property
    def weight_blocks(self) -> np.ndarray:
        """Weights viewed as [output channel, source channel, basis index]."""
        return self.weights.reshape(CHANNELS, CHANNELS, self.n_lut)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.weights, self.biases])

    @staticmethod
    def from_vector(vec: np.ndarray, n_lut: int) -> "FusionCoefficients":
        nw = weight_count(n_lut)
        vec = np.asarray(vec, dtype=np.float64).reshape(-1)
        if vec.size != nw + n_lut:
            raise ShapeError(f"coefficient vector length {vec.size} != {nw + n_lut}")
        return FusionCoefficients(vec[:nw], vec[nw:])


def identity_coefficients(n_lut: int) -> FusionCoefficients:
    """Coefficients that select basis 1's own channel everywhere: with an
    identity first basis this makes fusion the exact identity."""
    w = np.zeros((CHANNELS, CHANNELS, n_lut))
    for ch in range(CHANNELS):
        w[ch, ch, 0] = 1.0
    return FusionCoefficients(w.reshape(-1), np.zeros(n_lut))


@dataclass
class BasisBank:
    """N_lut basis lattices with identical axis sizes."""

    luts: list[Lattice4D]

    def __post_init__(self):
        if not self.luts:
            raise InvalidArgumentError("basis bank must not be empty")
        n, m = self.luts[0].n_bin, self.luts[0].n_ctx
        for q, lut in enumerate(self.luts):
            if (lut.n_bin, lut.n_ctx) != (n, m):
                raise ShapeError(
                    f"basis {q} has axes ({lut.n_bin}, {lut.n_ctx}), expected ({n}, {m})"
                )

    @property
    def n_lut(self) -> int:
        return len(self.luts)

    @property
    def n_bin(self) -> int:
        return self.luts[0].n_bin

    @property
    def n_ctx(self) -> int:
        return self.luts[0].n_ctx

    def stacked(self) -> np.ndarray:
        """Basis grids stacked as (basis, channel, l, k, j, i); copies views."""
        return np.stack([lut.grid for lut in self.luts])


def identity_bank(n_bin: int, n_ctx: int, n_lut: int) -> BasisBank:
    """Basis 1 is the identity lattice, the rest are zeros."""
    luts = [identity_lattice4(n_bin, n_ctx)]
    luts += [zero_lattice4(n_bin, n_ctx) for _ in range(n_lut - 1)]
    return BasisBank(luts)


def fuse(bank: BasisBank, coef: FusionCoefficients) -> Lattice4D:
    if coef.n_lut != bank.n_lut:
        raise InvalidArgumentError(
            f"coefficients are for {coef.n_lut} basis LUTs, bank has {bank.n_lut}"
        )
    stacked = bank.stacked()  # (n, s, l, k, j, i)
    fused = np.einsum("osn,nslkji->olkji", coef.weight_blocks, stacked)
    fused += coef.biases.sum()
    return Lattice4D(bank.n_bin, bank.n_ctx, fused.reshape(-1))


def fuse_backward(bank: BasisBank, coef: FusionCoefficients, upstream: np.ndarray):
    """Gradients of sum(upstream * fused) w.r.t. coefficients and basis entries.

    upstream is lattice-shaped (grid or flat). Returns (coefficient gradient
    as FusionCoefficients, list of per-basis grid-shaped gradients).
    """
    if coef.n_lut != bank.n_lut:
        raise InvalidArgumentError(
            f"coefficients are for {coef.n_lut} basis LUTs, bank has {bank.n_lut}"
        )
    n, m = bank.n_bin, bank.n_ctx
    grid_shape = (CHANNELS, m, n, n, n)
    upstream = np.asarray(upstream, dtype=np.float64)
    if upstream.size != CHANNELS * m * n**3:
        raise ShapeError(f"upstream size {upstream.size} does not match the bank's lattices")
    up = upstream.reshape(grid_shape)
    stacked = bank.stacked()
    d_weights = np.einsum("olkji,nslkji->osn", up, stacked)
    d_biases = np.full(bank.n_lut, up.sum())  # every bias feeds every entry
    d_basis = np.einsum("osn,olkji->nslkji", coef.weight_blocks, up)
    return (FusionCoefficients(d_weights.reshape(-1), d_biases),
            [d_basis[q] for q in range(bank.n_lut)])
