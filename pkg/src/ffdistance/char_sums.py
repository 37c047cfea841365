"""Gauss sums, Kloosterman sums, the difference-of-squares count and the
Fourier transform of spheres.

Every sum has a brute-force evaluator, which is the ground truth for phase
and sign conventions. Closed forms are cross-checked against it in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .field import FieldCtx, FieldError, legendre, legendre_table, mod_inverse
from .fourier import grid_points, norm_squared_grid

Method = Literal["brute", "closed"]

DEGENERATE_R0 = "degenerate_r0"


@dataclass(frozen=True)
class SumValue:
    value: complex
    terms: int
    method: str
    flags: tuple[str, ...] = ()

    def __abs__(self) -> float:
        return abs(self.value)


def weil_bound(q: int) -> float:
    """Explicit Weil constant for Kloosterman and Salie sums over F_q."""
    return 2.0 * math.sqrt(q)


def _check_method(method: str) -> None:
    if method not in ("brute", "closed"):
        raise ValueError(f"unknown method {method!r}")


def gauss_g(k: int, ctx: FieldCtx, method: Method = "brute") -> SumValue:
    """g(k) = sum_x e_q(k x^2).

    The closed form uses g(k) = legendre(k) g(1) with the classical sign
    g(1) = sqrt(q) for q = 1 mod 4 and i sqrt(q) for q = 3 mod 4.
    """
    _check_method(method)
    q = ctx.q
    k %= q
    if method == "brute":
        x = np.arange(q, dtype=np.int64)
        return SumValue(complex(np.sum(ctx.roots[(k * x * x) % q])), q, "brute")
    if k == 0:
        return SumValue(complex(q), 1, "closed")
    g1 = math.sqrt(q) if q % 4 == 1 else 1j * math.sqrt(q)
    return SumValue(complex(legendre(k, ctx) * g1), 1, "closed")


def gauss_G(m: Sequence[int], k: int, ctx: FieldCtx, d: int | None = None,
            method: Method = "brute") -> SumValue:
    """G(m, k) = sum_{x in F_q^d} e_q(x.m - k|x|^2).

    Completing the square in each coordinate gives
    -k x^2 + m x = -k (x - m/2k)^2 + m^2/4k, hence

        G(m, k) = e_q(|m|^2 (4k)^{-1}) * g(-k)^d.

    Note the Gauss sum is taken at -k; this was fixed against the brute path.
    """
    _check_method(method)
    q = ctx.q
    mv = np.asarray(m, dtype=np.int64).reshape(-1) % q
    d = len(mv) if d is None else d
    if len(mv) != d:
        raise ValueError(f"frequency has {len(mv)} coordinates, expected {d}")
    k %= q
    if method == "brute":
        pts = grid_points(ctx, d)
        norms = np.sum(pts * pts, axis=1)
        phases = (pts @ mv - k * norms) % q
        return SumValue(complex(np.sum(ctx.roots[phases])), q ** d, "brute")
    if k == 0:
        raise FieldError("closed form of G(m, k) requires k != 0")
    norm_m = int(np.sum(mv * mv)) % q
    phase = ctx.roots[(norm_m * mod_inverse(4 * k, ctx)) % q]
    g = gauss_g(-k, ctx).value
    return SumValue(complex(phase * g ** d), d * q, "closed")


def kloosterman(a: int, b: int, ctx: FieldCtx) -> SumValue:
    """K(a, b) = sum_{j != 0} e_q(a j + b j^{-1}).

    K(0, 0) = q - 1 is returned rather than treated as an error.
    """
    q = ctx.q
    j = np.arange(1, q, dtype=np.int64)
    phases = (a * j + b * ctx.inverses[1:]) % q
    return SumValue(complex(np.sum(ctx.roots[phases])), q - 1, "brute")


def twisted_kloosterman(a: int, b: int, ctx: FieldCtx, twist: int) -> SumValue:
    """sum_{j != 0} legendre(j)^twist e_q(a j + b j^{-1}).

    Even ``twist`` is the Kloosterman sum; odd ``twist`` is the Salie sum.
    """
    if twist % 2 == 0:
        return kloosterman(a, b, ctx)
    q = ctx.q
    j = np.arange(1, q, dtype=np.int64)
    chi = legendre_table(ctx)[1:]
    phases = (a * j + b * ctx.inverses[1:]) % q
    return SumValue(complex(np.sum(chi * ctx.roots[phases])), q - 1, "brute")


def diff_square_counts(ctx: FieldCtx) -> np.ndarray:
    """n(t) = #{(u, v): u^2 - v^2 = t} for every t, by full enumeration."""
    q = ctx.q
    sq = (np.arange(q, dtype=np.int64) ** 2) % q
    diffs = (sq[:, None] - sq[None, :]) % q
    return np.bincount(diffs.reshape(-1), minlength=q)


def count_diff_squares(t: int, ctx: FieldCtx) -> int:
    q = ctx.q
    sq = (np.arange(q, dtype=np.int64) ** 2) % q
    return int(np.count_nonzero((sq[:, None] - sq[None, :]) % q == t % q))


def sphere_points(ctx: FieldCtx, d: int, r: int) -> np.ndarray:
    """All x in F_q^d with |x|^2 = r, in row-major order."""
    pts = grid_points(ctx, d)
    return pts[np.sum(pts * pts, axis=1) % ctx.q == r % ctx.q]


def sphere_fourier(r: int, m: Sequence[int], ctx: FieldCtx, d: int | None = None,
                   method: Method = "closed") -> SumValue:
    """Fourier transform of the sphere indicator, q^{-d} sum_{|x|^2=r} e_q(-x.m).

    Closed path: write the sphere condition as q^{-1} sum_j e_q(j(|x|^2 - r)).
    The j = 0 term contributes q^{-1} at m = 0. For j != 0 the inner sum is
    G(-m, -j) = e_q(-|m|^2 (4j)^{-1}) g(1)^d legendre(j)^d, leaving

        q^{-d-1} g(1)^d sum_{j != 0} legendre(j)^d e_q(-r j - |m|^2 (4j)^{-1}),

    a Kloosterman sum for even d and a Salie sum for odd d. When |m|^2 = 0
    and d is even that sum collapses to the Ramanujan sum (q - 1 or -1).
    """
    _check_method(method)
    q = ctx.q
    mv = np.asarray(m, dtype=np.int64).reshape(-1) % q
    d = len(mv) if d is None else d
    if len(mv) != d:
        raise ValueError(f"frequency has {len(mv)} coordinates, expected {d}")
    r %= q
    flags = (DEGENERATE_R0,) if r == 0 else ()

    if method == "brute":
        pts = sphere_points(ctx, d, r)
        total = np.sum(ctx.roots[(-(pts @ mv)) % q]) if len(pts) else 0.0
        return SumValue(complex(total) / q ** d, len(pts), "brute", flags)

    norm_m = int(np.sum(mv * mv)) % q
    g1 = gauss_g(1, ctx, "closed").value
    if norm_m == 0 and d % 2 == 0:
        inner = complex(q - 1 if r == 0 else -1)
    else:
        b = (-norm_m * mod_inverse(4, ctx)) % q
        inner = twisted_kloosterman(-r, b, ctx, d).value
    value = g1 ** d * inner / q ** (d + 1)
    if not mv.any():
        value += 1.0 / q
    return SumValue(complex(value), q, "closed", flags)


def sphere_fourier_grid(r: int, ctx: FieldCtx, d: int) -> np.ndarray:
    """Closed-form sphere transform at every m, shape (q,)*d.

    The j != 0 part depends on m only through |m|^2, so one twisted
    Kloosterman sum per level t suffices.
    """
    q = ctx.q
    r %= q
    g1 = gauss_g(1, ctx, "closed").value
    inv4 = mod_inverse(4, ctx)
    per_level = np.array([
        twisted_kloosterman(-r, (-t * inv4) % q, ctx, d).value for t in range(q)
    ])
    out = g1 ** d * per_level[norm_squared_grid(ctx, d)] / q ** (d + 1)
    out[(0,) * d] += 1.0 / q
    return out
