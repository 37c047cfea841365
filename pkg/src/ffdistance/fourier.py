"""Fourier transform on F_q^d.

Conventions (used by every identity downstream):

    forward   F^(m) = q^{-d} sum_x exp(-2 pi i x.m / q) F(x)
    inverse   F(x)  =        sum_m exp(+2 pi i x.m / q) F^(m)

The transform is applied one axis at a time, so the cost is d * q^{d+1}
rather than q^{2d}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .field import FieldCtx


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A complex function on F_q^d stored densely as an array of shape (q,)*d.

    Index order is row-major with the first coordinate slowest, i.e.
    ``values[x_1, ..., x_d]``.
    """

    ctx: FieldCtx
    d: int
    values: np.ndarray

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        shape = (self.ctx.q,) * self.d
        vals = np.asarray(self.values)
        if vals.size != self.ctx.q ** self.d:
            raise ValueError(f"expected {self.ctx.q ** self.d} values, got {vals.size}")
        object.__setattr__(self, "values", vals.reshape(shape))

    @classmethod
    def zeros(cls, ctx: FieldCtx, d: int) -> "GridFunction":
        return cls(ctx, d, np.zeros((ctx.q,) * d, dtype=complex))

    @classmethod
    def indicator(cls, ctx: FieldCtx, d: int, points) -> "GridFunction":
        vals = np.zeros((ctx.q,) * d, dtype=float)
        pts = np.asarray(points, dtype=np.int64).reshape(-1, d)
        vals[tuple(pts.T)] = 1.0
        return cls(ctx, d, vals)

    @property
    def size(self) -> int:
        return self.values.size

    def is_indicator(self) -> bool:
        v = self.values
        return bool(np.all((v == 0) | (v == 1)))

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._check_compatible(other)
        return GridFunction(self.ctx, self.d, self.values + other.values)

    def __rmul__(self, alpha) -> "GridFunction":
        return GridFunction(self.ctx, self.d, alpha * self.values)

    def _check_compatible(self, other: "GridFunction") -> None:
        if other.ctx != self.ctx or other.d != self.d:
            raise ValueError("grid functions live on different spaces")


def _axis_matrix(ctx: FieldCtx, sign: int) -> np.ndarray:
    t = np.arange(ctx.q)
    return ctx.roots[(sign * np.outer(t, t)) % ctx.q]


def _separable(values: np.ndarray, mat: np.ndarray) -> np.ndarray:
    out = values.astype(complex, copy=False)
    for axis in range(out.ndim):
        out = np.moveaxis(np.tensordot(mat, out, axes=([1], [axis])), 0, axis)
    return np.ascontiguousarray(out)


def dft(f: GridFunction) -> GridFunction:
    q, d = f.ctx.q, f.d
    mat = _axis_matrix(f.ctx, -1) / q
    return GridFunction(f.ctx, d, _separable(f.values, mat))


def idft(g: GridFunction) -> GridFunction:
    mat = _axis_matrix(g.ctx, +1)
    return GridFunction(g.ctx, g.d, _separable(g.values, mat))


def naive_dft(f: GridFunction) -> GridFunction:
    """Direct O(q^{2d}) evaluation of the forward transform (test oracle)."""
    q, d = f.ctx.q, f.d
    pts = np.array(list(itertools.product(range(q), repeat=d)), dtype=np.int64).reshape(-1, d)
    flat = f.values.reshape(-1)
    out = np.empty(len(pts), dtype=complex)
    for i, m in enumerate(pts):
        phases = f.ctx.roots[(-(pts @ m)) % q]
        out[i] = np.sum(phases * flat) / q ** d
    return GridFunction(f.ctx, d, out)


def power_sum(f: GridFunction) -> tuple[float, float]:
    """Both sides of Plancherel: (q^{-d} sum_x |F(x)|^2, sum_m |F^(m)|^2)."""
    spatial = float(np.sum(np.abs(f.values) ** 2)) / f.ctx.q ** f.d
    spectral = float(np.sum(np.abs(dft(f).values) ** 2))
    return spatial, spectral


def grid_points(ctx: FieldCtx, d: int) -> np.ndarray:
    """All q^d points of F_q^d in row-major order, shape (q^d, d)."""
    axes = np.indices((ctx.q,) * d).reshape(d, -1)
    return axes.T.astype(np.int64)


def norm_squared_grid(ctx: FieldCtx, d: int) -> np.ndarray:
    """Array of |m|^2 mod q over F_q^d, shape (q,)*d."""
    t = np.arange(ctx.q, dtype=np.int64)
    sq = (t * t) % ctx.q
    out = np.zeros((ctx.q,) * d, dtype=np.int64)
    for axis in range(d):
        shape = [1] * d
        shape[axis] = ctx.q
        out = out + sq.reshape(shape)
    return out % ctx.q


def write_spectrum_csv(spectrum: GridFunction, fh) -> None:
    """Dump a spectrum with columns m_1..m_d, re, im, abs2."""
    import csv

    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow([f"m_{i + 1}" for i in range(spectrum.d)] + ["re", "im", "abs2"])
    pts = grid_points(spectrum.ctx, spectrum.d)
    for m, v in zip(pts, spectrum.values.reshape(-1)):
        writer.writerow([*map(int, m), repr(float(v.real)), repr(float(v.imag)),
                         repr(float(abs(v) ** 2))])
