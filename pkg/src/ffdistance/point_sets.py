"""Point sets in F_q^d, their distance statistics and the Salem diagnostic."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numba
import numpy as np

from .char_sums import DEGENERATE_R0, sphere_points
from .field import FieldCtx
from .fourier import GridFunction, dft, grid_points

FAMILIES = ("full", "paraboloid", "sphere", "diagonal", "random")


class SetFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PointSet:
    """A finite subset E of F_q^d.

    ``points`` is an (n, d) int64 array of distinct reduced coordinates.
    ``provenance`` records the generator and its parameters.
    """

    ctx: FieldCtx
    d: int
    points: np.ndarray
    provenance: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64)
        if pts.ndim == 1 and self.d == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[1] != self.d:
            raise ValueError(f"points must have shape (n, {self.d})")
        if len(pts) == 0:
            raise ValueError("point set is empty")
        pts = pts % self.ctx.q
        if len(np.unique(pts, axis=0)) != len(pts):
            raise ValueError("point set contains duplicates")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def card(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def indicator(self) -> GridFunction:
        return GridFunction.indicator(self.ctx, self.d, self.points)

    def spectrum(self) -> GridFunction:
        return dft(self.indicator())


def gen_full(ctx: FieldCtx, d: int) -> PointSet:
    return PointSet(ctx, d, grid_points(ctx, d), {"family": "full"})


def gen_paraboloid(ctx: FieldCtx, d: int) -> PointSet:
    """{(x, |x|^2) : x in F_q^{d-1}}."""
    if d < 2:
        raise ValueError("paraboloid needs d >= 2")
    base = grid_points(ctx, d - 1)
    last = np.sum(base * base, axis=1) % ctx.q
    return PointSet(ctx, d, np.column_stack([base, last]), {"family": "paraboloid"})


def gen_sphere(ctx: FieldCtx, d: int, r: int = 1) -> PointSet:
    if d < 2:
        raise ValueError("sphere needs d >= 2")
    r %= ctx.q
    pts = sphere_points(ctx, d, r)
    if len(pts) == 0:
        raise ValueError(f"sphere of radius {r} is empty over F_{ctx.q}^{d}")
    flags = (DEGENERATE_R0,) if r == 0 else ()
    return PointSet(ctx, d, pts, {"family": "sphere", "r": r}, flags)


def gen_diagonal(ctx: FieldCtx, d: int = 2) -> PointSet:
    if d != 2:
        raise ValueError("diagonal set is defined for d = 2 only")
    k = np.arange(ctx.q, dtype=np.int64)
    return PointSet(ctx, 2, np.column_stack([k, k]), {"family": "diagonal"})


def gen_random(ctx: FieldCtx, d: int, n: int, seed: int = 0) -> PointSet:
    """n distinct uniform points; reproducible from ``seed``."""
    total = ctx.q ** d
    if not 1 <= n <= total:
        raise ValueError(f"cardinality must lie in [1, {total}], got {n}")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(total, size=n, replace=False))
    pts = np.stack(np.unravel_index(idx, (ctx.q,) * d), axis=1).astype(np.int64)
    return PointSet(ctx, d, pts, {"family": "random", "n": n, "seed": seed})


def generate(family: str, ctx: FieldCtx, d: int, *, r: int = 1, n: int | None = None,
             seed: int = 0) -> PointSet:
    if family == "full":
        return gen_full(ctx, d)
    if family == "paraboloid":
        return gen_paraboloid(ctx, d)
    if family == "sphere":
        return gen_sphere(ctx, d, r)
    if family == "diagonal":
        return gen_diagonal(ctx, d)
    if family == "random":
        if n is None:
            raise ValueError("random family needs a cardinality n")
        return gen_random(ctx, d, n, seed)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def save_set(pset: PointSet, path) -> None:
    """Write the set file; provenance goes on a trailing ``#`` comment line."""
    lines = [f"{pset.q} {pset.d}"]
    lines += [" ".join(map(str, row)) for row in pset.points.tolist()]
    if pset.provenance:
        lines.append("# " + " ".join(f"{k}={v}" for k, v in pset.provenance.items()))
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_provenance(comments: list[str]) -> dict:
    prov = {}
    for text in comments:
        for item in text.split():
            key, sep, val = item.partition("=")
            if sep:
                prov[key] = int(val) if val.lstrip("-").isdigit() else val
    return prov


def load_set(path) -> PointSet:
    """Read the plain-text set format: header ``q d`` then one point per line.

    Lines starting with ``#`` are comments; ``key=value`` pairs in them are
    read back as provenance.
    """
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    comments = [ln[1:] for ln in lines if ln.startswith("#")]
    rows = [ln.split() for ln in lines if not ln.startswith("#")]
    if not rows:
        raise SetFormatError(f"{path}: empty file")
    try:
        q, d = (int(v) for v in rows[0])
    except ValueError:
        raise SetFormatError(f"{path}: header must be 'q d'") from None
    ctx = FieldCtx(q)
    pts = []
    seen = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != d:
            raise SetFormatError(f"{path}:{lineno}: expected {d} coordinates")
        try:
            pt = tuple(int(v) for v in row)
        except ValueError:
            raise SetFormatError(f"{path}:{lineno}: non-integer coordinate") from None
        if any(not 0 <= c < q for c in pt):
            raise SetFormatError(f"{path}:{lineno}: coordinate outside [0, {q})")
        if pt in seen:
            raise SetFormatError(f"{path}:{lineno}: duplicate point {pt}")
        seen.add(pt)
        pts.append(pt)
    if not pts:
        raise SetFormatError(f"{path}: no points")
    prov = {"family": "file"} | _parse_provenance(comments)
    flags = (DEGENERATE_R0,) if prov.get("family") == "sphere" and prov.get("r") == 0 else ()
    return PointSet(ctx, d, np.array(pts, dtype=np.int64), prov, flags)


@numba.njit(cache=True)
def _pair_histogram(pts, q, sqdiff):
    n, d = pts.shape
    hist = np.zeros(q, dtype=np.int64)
    hist[0] = n
    for a in range(n):
        for b in range(a + 1, n):
            s = 0
            for i in range(d):
                s += sqdiff[pts[a, i], pts[b, i]]
            hist[s % q] += 2
    return hist


def pair_histogram(pset: PointSet) -> list[int]:
    """hist[j] = #{(x, y) in E x E : |x - y|^2 = j} by direct enumeration."""
    q = pset.q
    t = np.arange(q, dtype=np.int64)
    sqdiff = ((t[:, None] - t[None, :]) ** 2) % q
    hist = _pair_histogram(np.ascontiguousarray(pset.points), q, sqdiff)
    return [int(h) for h in hist]


@dataclass(frozen=True)
class DistanceStats:
    q: int
    card: int
    hist: tuple[int, ...]

    @property
    def total_pairs(self) -> int:
        return self.card * self.card

    @property
    def nu(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(h, self.total_pairs) for h in self.hist)

    @property
    def delta_set(self) -> frozenset[int]:
        return frozenset(j for j, h in enumerate(self.hist) if h > 0)

    @property
    def card_delta(self) -> int:
        return sum(1 for h in self.hist if h > 0)

    def nu_squared_sum(self) -> Fraction:
        return Fraction(sum(h * h for h in self.hist), self.total_pairs ** 2)


def distance_stats(pset: PointSet) -> DistanceStats:
    hist = pair_histogram(pset)
    stats = DistanceStats(pset.q, pset.card, tuple(hist))
    assert sum(hist) == stats.total_pairs
    return stats


def nu_hat(stats: DistanceStats, k: int, ctx: FieldCtx | None = None) -> complex:
    """q^{-1} sum_j nu(j) e_q(-j k), evaluated from the integer histogram."""
    ctx = ctx or FieldCtx(stats.q)
    q = stats.q
    if k % q == 0:
        return complex(1.0 / q)
    j = np.arange(q, dtype=np.int64)
    hist = np.array(stats.hist, dtype=float)
    return complex(np.sum(hist * ctx.roots[(-j * k) % q])) / (q * stats.total_pairs)


def nu_hat_all(stats: DistanceStats, ctx: FieldCtx | None = None) -> np.ndarray:
    ctx = ctx or FieldCtx(stats.q)
    return np.array([nu_hat(stats, k, ctx) for k in range(stats.q)])


def salem_constant(pset: PointSet, spectrum: GridFunction | None = None) -> float:
    """max_{m != 0} |E^(m)| / (q^{-d} sqrt(#E)); about 1 for ideal Salem sets."""
    spec = spectrum if spectrum is not None else pset.spectrum()
    mags = np.abs(spec.values).reshape(-1)
    if mags.size == 1:
        return 0.0
    peak = float(np.max(mags[1:]))
    if peak < 1e-10 * mags[0]:
        peak = 0.0
    return peak / (pset.q ** -pset.d * math.sqrt(pset.card))
