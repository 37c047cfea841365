import math
from fractions import Fraction

import numpy as np
import pytest

from ffdistance.field import FieldCtx
from ffdistance.mattila import (SUBCRITICAL, InvariantViolation, bound_report, level_sums,
                                mattila_exact, mattila_fourier, quadruple_count,
                                salem_mattila_bound, sigma_bound_check)
from ffdistance.point_sets import (PointSet, distance_stats, gen_diagonal, gen_full,
                                   gen_paraboloid, gen_random, gen_sphere, nu_hat_all,
                                   salem_constant)
from ffdistance.sweep import ceil_root

from oracles import indicator_transform, mattila_double_sum, mattila_from_hist, pair_hist, points

# regression pin from the first run (random seed 0, q = 11, d = 2, #E = 37)
SIGMA_RATIO_Q11_SEED0 = 0.10668855245924985


def _pts(E):
    return [tuple(map(int, p)) for p in E.points]


def test_level_sums_full_space():
    levels = level_sums(gen_full(FieldCtx(5), 2))
    assert levels.S[0] == pytest.approx(1.0)
    assert np.all(levels.S[1:] == 0)


def test_level_sums_paraboloid_plancherel():
    levels = level_sums(gen_paraboloid(FieldCtx(3), 2))
    assert levels.total == pytest.approx(3 / 9, rel=1e-12)


def test_level_sums_sphere_oracle():
    q, d = 5, 2
    E = gen_sphere(FieldCtx(q), d, 1)
    levels = level_sums(E)
    S = _pts(E)
    for t in range(q):
        direct = sum(abs(indicator_transform(S, q, d, m)) ** 2
                     for m in points(q, d) if sum(c * c for c in m) % q == t)
        assert abs(levels.S[t] - direct) < 1e-9
        assert levels.S[t] >= 0
    assert levels.sigma((1, 2)) == levels.S[0]


@pytest.mark.parametrize("maker", [
    lambda: gen_random(FieldCtx(7), 3, 60, seed=0),
    lambda: gen_sphere(FieldCtx(11), 2, 4),
    lambda: gen_diagonal(FieldCtx(13)),
])
def test_level_sums_plancherel(maker):
    E = maker()
    assert level_sums(E).total == pytest.approx(E.card / E.q ** E.d, rel=1e-8)


def test_sigma_bound_check_examples():
    peak, threshold, ratio = sigma_bound_check(gen_full(FieldCtx(7), 2))
    assert peak == 0 and ratio == 0
    E = gen_random(FieldCtx(11), 2, ceil_root(11, 3, 2), seed=0)
    assert E.card == 37
    assert sigma_bound_check(E)[2] == pytest.approx(SIGMA_RATIO_Q11_SEED0, rel=1e-9)
    assert sigma_bound_check(gen_paraboloid(FieldCtx(7), 2))[2] <= 4


@pytest.mark.parametrize("q,d", [(3, 2), (5, 2), (3, 3), (7, 3)])
def test_mattila_full_space(q, d):
    E = gen_full(FieldCtx(q), d)
    assert mattila_exact(E) == Fraction(1, q ** (d - 1))
    assert mattila_fourier(E) == pytest.approx(q ** (1 - d), rel=1e-9)


def test_mattila_full_line():
    E = gen_full(FieldCtx(3), 1)
    assert distance_stats(E).nu == (Fraction(1, 3), Fraction(2, 3), Fraction(0))
    assert mattila_exact(E) == 1
    assert mattila_fourier(E) == pytest.approx(1.0)


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13, 101])
def test_mattila_diagonal(q):
    E = gen_diagonal(FieldCtx(q))
    assert mattila_exact(E) == Fraction(2 * q - 1, q)
    assert mattila_fourier(E) == pytest.approx((2 * q - 1) / q, rel=1e-9)


def test_mattila_single_point():
    q, d = 7, 2
    E = PointSet(FieldCtx(q), d, [[3, 4]])
    assert mattila_exact(E) == q ** d + q - 1
    assert mattila_fourier(E) == pytest.approx(q ** d + q - 1, rel=1e-9)


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_mattila_paraboloid_bounded(q):
    E = gen_paraboloid(FieldCtx(q), 2)
    M = float(mattila_exact(E))
    assert M <= salem_mattila_bound(E, 1.0) * (1 + 1e-12)


@pytest.mark.parametrize("maker", [
    lambda: gen_paraboloid(FieldCtx(3), 2),
    lambda: gen_sphere(FieldCtx(5), 2, 2),
    lambda: gen_random(FieldCtx(5), 2, 9, seed=3),
    lambda: gen_random(FieldCtx(3), 3, 6, seed=1),
])
def test_mattila_against_definitional_double_sum(maker):
    """O(q^{2d}) pair sum over (m, m') in pure Python vs both package paths."""
    E = maker()
    pts = _pts(E)
    direct = mattila_double_sum(pts, E.q, E.d)
    assert mattila_fourier(E) == pytest.approx(direct, rel=1e-9)
    assert float(mattila_from_hist(pair_hist(pts, E.q), E.q, E.d, E.card)) == pytest.approx(direct, rel=1e-9)
    assert float(mattila_exact(E)) == pytest.approx(direct, rel=1e-9)


def test_quadruple_count_examples():
    assert quadruple_count(distance_stats(PointSet(FieldCtx(5), 2, [[0, 0]]))) == 1
    assert quadruple_count(distance_stats(gen_diagonal(FieldCtx(5)))) == 225
    E = gen_full(FieldCtx(3), 2)
    assert quadruple_count(distance_stats(E)) == sum(h * h for h in pair_hist(_pts(E), 3))
    assert quadruple_count(distance_stats(E)) == 2673


@pytest.mark.parametrize("maker", [
    lambda: gen_random(FieldCtx(7), 2, 12, seed=5),
    lambda: gen_sphere(FieldCtx(13), 3, 1),
    lambda: gen_diagonal(FieldCtx(11)),
])
def test_quadruple_count_cauchy_schwarz(maker):
    E = maker()
    assert quadruple_count(distance_stats(E)) * E.q >= E.card ** 4


SETS = [
    lambda: gen_full(FieldCtx(5), 2),
    lambda: gen_paraboloid(FieldCtx(7), 3),
    lambda: gen_sphere(FieldCtx(11), 2, 3),
    lambda: gen_sphere(FieldCtx(5), 3, 0),
    lambda: gen_diagonal(FieldCtx(13)),
    lambda: gen_random(FieldCtx(13), 2, 13, seed=0),
    lambda: gen_random(FieldCtx(7), 3, 19, seed=4),
]


@pytest.mark.parametrize("maker", SETS)
def test_identities(maker):
    E = maker()
    q, d, n = E.q, E.d, E.card
    stats = distance_stats(E)
    spec_nu = float(np.sum(np.abs(nu_hat_all(stats)) ** 2))
    M = mattila_fourier(E)
    # q^2 sum |nu^|^2 = 1 + M - q^d / (#E)^2
    assert q * q * spec_nu == pytest.approx(1 + M - q ** d / n ** 2, rel=1e-8)
    # Plancherel for nu
    assert spec_nu == pytest.approx(float(stats.nu_squared_sum()) / q, rel=1e-10)
    assert M >= 0
    power = np.abs(E.spectrum().values) ** 2
    assert M >= q ** (3 * d + 1) / n ** 4 * float(np.sum(power ** 2)) * (1 - 1e-12)
    assert abs(M - float(mattila_exact(E, stats))) <= 1e-6 * max(1.0, float(mattila_exact(E, stats)))


@pytest.mark.parametrize("q,d", [(3, 2), (5, 2), (7, 2), (13, 2), (3, 3), (5, 3), (7, 3)])
def test_salem_implies_bounded_mattila(q, d):
    ctx = FieldCtx(q)
    for E in (gen_paraboloid(ctx, d), gen_sphere(ctx, d, 1)):
        if E.card < q ** (d / 2):
            continue
        C = salem_constant(E)
        assert mattila_fourier(E) <= salem_mattila_bound(E, C) * (1 + 1e-12)


def test_report_full_space():
    q, d = 7, 2
    r = bound_report(gen_full(FieldCtx(q), d))
    assert r.card_Delta == q
    assert r.falconer_ok is True
    assert r.ratio_trivial == pytest.approx(q / min(q, q ** d / q ** ((d - 1) / 2)))
    assert r.beta_measured == math.inf
    assert r.M_exact == Fraction(1, q)


def test_report_diagonal_q13():
    q = 13
    r = bound_report(gen_diagonal(FieldCtx(q)))
    assert r.card_Delta == 7
    assert r.M_exact == Fraction(2 * q - 1, q)
    assert r.ratio_mattila == pytest.approx(7 / (q / (2 - 1 / q)), rel=1e-9)
    assert r.ratio_mattila >= 1
    assert r.salem_const == pytest.approx(math.sqrt(q))
    assert r.card_Delta >= math.ceil(r.cs_lower_exact)


def test_report_falconer_random():
    r = bound_report(gen_random(FieldCtx(11), 2, 37, seed=0))
    assert r.card_Delta == 11
    assert r.falconer_ok is True
    row = r.row()
    assert row["family"] == "random:n=37" and row["seed"] == 0


def test_report_flags():
    r = bound_report(gen_sphere(FieldCtx(5), 2, 0))
    assert "degenerate_r0" in r.flags
    r = bound_report(gen_random(FieldCtx(11), 2, 5, seed=1))
    assert SUBCRITICAL in r.flags
    assert r.falconer_ok is None
    assert r.row()["flags"] == SUBCRITICAL


def test_report_raises_on_broken_oracle(monkeypatch):
    import ffdistance.mattila as mod

    monkeypatch.setattr(mod, "mattila_fourier", lambda E, levels=None: 123.0)
    with pytest.raises(InvariantViolation):
        bound_report(gen_diagonal(FieldCtx(5)))
