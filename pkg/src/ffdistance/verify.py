"""The invariant suite behind ``ffdistance verify``.

Each check returns a :class:`CheckResult`; a failing check never raises so
that the whole suite always reports.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import char_sums as cs
from .field import FieldCtx, primes_between
from .fourier import GridFunction, dft, idft, norm_squared_grid, power_sum
from .mattila import mattila_exact, mattila_fourier
from .point_sets import (PointSet, distance_stats, gen_diagonal, gen_full, gen_paraboloid,
                         gen_random, gen_sphere, nu_hat_all, salem_constant)
from .sweep import ceil_root


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, do not abort the suite
        ok, detail = False, f"error: {exc!r}"
    return CheckResult(name, ok, detail, time.perf_counter() - t0)


def _random_grid(rng, ctx, d):
    shape = (ctx.q,) * d
    return GridFunction(ctx, d, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def check_plancherel(primes, dims, trials=20, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for q in primes:
        ctx = FieldCtx(q)
        for d in dims:
            if q ** d > 2 ** 16:
                continue
            for _ in range(trials):
                spatial, spectral = power_sum(_random_grid(rng, ctx, d))
                worst = max(worst, abs(spatial - spectral) / spatial)
    return worst <= 1e-9, f"max rel err {worst:.2e}"


def check_roundtrip(primes, dims, seed=1):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for q in primes:
        ctx = FieldCtx(q)
        for d in dims:
            if q ** d > 2 ** 16:
                continue
            f = _random_grid(rng, ctx, d)
            back = idft(dft(f)).values
            worst = max(worst, float(np.max(np.abs(back - f.values)) / np.max(np.abs(f.values))))
    return worst <= 1e-9, f"max rel dev {worst:.2e}"


def check_gauss_modulus(primes):
    worst = 0.0
    imag_worst = 0.0
    for q in primes:
        ctx = FieldCtx(q)
        for k in range(1, q):
            g = cs.gauss_g(k, ctx).value
            worst = max(worst, abs(abs(g) ** 2 - q) / q)
            if q % 4 == 3:
                imag_worst = max(imag_worst, abs(g.real))
    ok = worst <= 1e-8 and imag_worst <= 1e-9
    return ok, f"max rel err |g|^2 {worst:.2e}, max |Re g| (q=3 mod 4) {imag_worst:.2e}"


def check_gauss_closed(primes, dims):
    worst = 0.0
    for q in primes:
        ctx = FieldCtx(q)
        for d in dims:
            for k in range(1, q):
                for m in np.ndindex(*(q,) * d):
                    a = cs.gauss_G(m, k, ctx, d, "brute").value
                    b = cs.gauss_G(m, k, ctx, d, "closed").value
                    worst = max(worst, abs(a - b))
    return worst <= 1e-9, f"max abs diff {worst:.2e}"


def kloosterman_table(ctx: FieldCtx) -> np.ndarray:
    """|K(a, b)| for all (a, b), shape (q, q)."""
    q = ctx.q
    j = np.arange(1, q, dtype=np.int64)
    inv = ctx.inverses[1:]
    out = np.empty((q, q))
    b = np.arange(q, dtype=np.int64)[:, None]
    for a in range(q):
        phases = (a * j[None, :] + b * inv[None, :]) % q
        out[a] = np.abs(ctx.roots[phases].sum(axis=1))
    return out


def check_weil(primes):
    worst = 0.0
    for q in primes:
        tab = kloosterman_table(FieldCtx(q))
        tab[0, 0] = 0.0
        worst = max(worst, float(np.max(tab)) / cs.weil_bound(q))
    return worst <= 1.0, f"max |K|/(2 sqrt q) = {worst:.4f}"


def check_diff_squares(primes):
    bad = []
    for q in primes:
        n = cs.diff_square_counts(FieldCtx(q))
        expected = np.full(q, q - 1)
        expected[0] = 2 * q - 1
        if not np.array_equal(n, expected):
            bad.append(q)
    return not bad, "all exact" if not bad else f"mismatch at q={bad}"


def check_sphere_closed(primes, dims):
    worst = 0.0
    for q in primes:
        ctx = FieldCtx(q)
        for d in dims:
            for r in range(1, q):
                closed = cs.sphere_fourier_grid(r, ctx, d)
                direct = gen_sphere(ctx, d, r).spectrum().values
                worst = max(worst, float(np.max(np.abs(closed - direct))))
    return worst <= 1e-9, f"max abs diff {worst:.2e}"


def check_sphere_cardinality(primes, dims):
    worst = 0.0
    for q in primes:
        ctx = FieldCtx(q)
        for d in dims:
            counts = np.bincount(norm_squared_grid(ctx, d).reshape(-1), minlength=q)
            dev = np.abs(counts[1:] - q ** (d - 1)) / (2 * q ** ((d - 1) / 2))
            worst = max(worst, float(np.max(dev)))
    return worst <= 1.0, f"max |#S_r - q^(d-1)| / 2q^((d-1)/2) = {worst:.4f}"


def check_paraboloid_salem(primes, dims):
    worst = 0.0
    for q in primes:
        for d in dims:
            worst = max(worst, abs(salem_constant(gen_paraboloid(FieldCtx(q), d)) - 1.0))
    return worst <= 1e-9, f"max |C - 1| = {worst:.2e}"


def oracle_sets(primes, dims, seeds=(0,)) -> list[PointSet]:
    """Every generated family at desk scale."""
    sets = []
    for q in primes:
        ctx = FieldCtx(q)
        for d in dims:
            if q ** d > 3 * 10 ** 5:
                continue
            sets.append(gen_full(ctx, d))
            if d >= 2:
                sets.append(gen_paraboloid(ctx, d))
                sets.append(gen_sphere(ctx, d, 1))
            if d == 2:
                sets.append(gen_diagonal(ctx))
            for num in (d, d + 1):
                n = ceil_root(q, num, 2)
                if n <= q ** d:
                    for s in seeds:
                        sets.append(gen_random(ctx, d, n, s))
    return sets


def check_mattila_oracle(sets):
    worst = 0.0
    for E in sets:
        exact = mattila_exact(E)
        four = mattila_fourier(E)
        worst = max(worst, abs(four - float(exact)) / max(1.0, float(exact)))
    return worst <= 1e-6, f"{len(sets)} sets, max rel diff {worst:.2e}"


def check_nu_identity(sets):
    """q^2 sum_k |nu^(k)|^2 = 1 + M - q^d/(#E)^2."""
    worst = 0.0
    for E in sets:
        stats = distance_stats(E)
        lhs = E.q ** 2 * float(np.sum(np.abs(nu_hat_all(stats, E.ctx)) ** 2))
        rhs = 1 + mattila_fourier(E) - E.q ** E.d / E.card ** 2
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return worst <= 1e-8, f"{len(sets)} sets, max rel diff {worst:.2e}"


def check_cauchy_schwarz(sets):
    """#Delta(E) >= 1 / (q sum_k |nu^(k)|^2).

    The left side counts the histogram support; the right side comes from the
    spectrum of E alone, via q^2 sum |nu^|^2 = 1 + M - q^d/(#E)^2. Only
    binary64 round-off (1e-9 relative) is allowed for equality cases.
    """
    violations = 0
    for E in sets:
        card_delta = distance_stats(E).card_delta
        spec_nu = (1 + mattila_fourier(E) - E.q ** E.d / E.card ** 2) / E.q ** 2
        if card_delta < (1 - 1e-9) / (E.q * spec_nu):
            violations += 1
    return violations == 0, f"{len(sets)} sets, {violations} violations"


def run_suite(max_q: int = 31, dims=(2, 3)) -> list[CheckResult]:
    dims = tuple(dims)
    all_primes = primes_between(3, max_q)
    small = [q for q in all_primes if q <= 11]
    tiny = [q for q in all_primes if q <= 7]
    mid = [q for q in all_primes if q <= 13]
    sphere_dims = [d for d in dims if d >= 2]
    sets = oracle_sets(mid, dims)
    return [
        _timed("plancherel", lambda: check_plancherel(small, dims)),
        _timed("dft round-trip", lambda: check_roundtrip(small, dims)),
        _timed("|g(k)|^2 = q", lambda: check_gauss_modulus(all_primes)),
        _timed("G closed vs brute", lambda: check_gauss_closed(tiny, [d for d in dims if d <= 2] or [1])),
        _timed("Weil bound", lambda: check_weil(all_primes)),
        _timed("n(t) lemma", lambda: check_diff_squares(all_primes)),
        _timed("sphere closed vs DFT", lambda: check_sphere_closed(small, sphere_dims)),
        _timed("sphere cardinality window",
               lambda: check_sphere_cardinality(all_primes, sphere_dims)),
        _timed("paraboloid Salem equality", lambda: check_paraboloid_salem(mid, sphere_dims)),
        _timed("M(q) oracle equivalence", lambda: check_mattila_oracle(sets)),
        _timed("q^2 sum |nu^|^2 identity", lambda: check_nu_identity(sets)),
        _timed("Cauchy-Schwarz lower bound", lambda: check_cauchy_schwarz(sets)),
    ]
