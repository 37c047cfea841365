import math

import numpy as np
import pytest

from ffdistance.field import FieldCtx
from ffdistance.fourier import GridFunction, idft
from ffdistance.point_sets import (PointSet, SetFormatError, distance_stats, gen_diagonal,
                                   gen_full, gen_paraboloid, gen_random, gen_sphere, generate,
                                   load_set, nu_hat, nu_hat_all, salem_constant, save_set)

from oracles import nu_hat_direct, pair_hist

as_set = lambda E: {tuple(map(int, p)) for p in E.points}  # noqa: E731


def test_full_space():
    E = gen_full(FieldCtx(5), 2)
    assert E.card == 25
    stats = distance_stats(E)
    assert stats.delta_set == frozenset(range(5))


def test_paraboloid_examples():
    assert as_set(gen_paraboloid(FieldCtx(3), 2)) == {(0, 0), (1, 1), (2, 1)}
    assert gen_paraboloid(FieldCtx(5), 3).card == 25
    with pytest.raises(ValueError):
        gen_paraboloid(FieldCtx(5), 1)


@pytest.mark.parametrize("q", [3, 5, 7])
@pytest.mark.parametrize("d", [2, 3])
def test_paraboloid_is_exactly_salem(q, d):
    assert abs(salem_constant(gen_paraboloid(FieldCtx(q), d)) - 1.0) < 1e-9


def test_sphere_examples():
    assert as_set(gen_sphere(FieldCtx(3), 2, 1)) == {(1, 0), (2, 0), (0, 1), (0, 2)}
    assert gen_sphere(FieldCtx(3), 2, 2).card == 4
    S0 = gen_sphere(FieldCtx(5), 2, 0)
    assert (0, 0) in as_set(S0)
    # -1 = 4 is a square mod 5, so S_0 holds the lines y = +-2x
    assert S0.card == 2 * 5 - 1
    assert "degenerate_r0" in S0.flags


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13, 31, 101])
@pytest.mark.parametrize("d", [2, 3])
def test_sphere_cardinality_window(q, d):
    if q ** d > 2 ** 21:
        pytest.skip("grid too large")
    ctx = FieldCtx(q)
    for r in range(1, q):
        n = gen_sphere(ctx, d, r).card
        assert abs(n - q ** (d - 1)) <= 2 * q ** ((d - 1) / 2)


@pytest.mark.parametrize("q", [5, 7, 13])
@pytest.mark.parametrize("d", [2, 3])
def test_sphere_salem_constant(q, d):
    ctx = FieldCtx(q)
    for r in range(1, q):
        assert salem_constant(gen_sphere(ctx, d, r)) <= 3


@pytest.mark.slow
@pytest.mark.parametrize("q,d", [(101, 2), (31, 3), (47, 3)])
def test_sphere_salem_constant_large(q, d):
    assert salem_constant(gen_sphere(FieldCtx(q), d, 1)) <= 3


def test_diagonal_examples():
    E = gen_diagonal(FieldCtx(5))
    assert as_set(E) == {(k, k) for k in range(5)}
    stats = distance_stats(E)
    assert stats.delta_set == frozenset({0, 2, 3})
    assert stats.hist == (5, 0, 10, 10, 0)
    spec = E.spectrum().values
    for m1 in range(5):
        for m2 in range(5):
            expected = 1 / 5 if (m1 + m2) % 5 == 0 else 0.0
            assert abs(spec[m1, m2] - expected) < 1e-14


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13, 17])
def test_diagonal_distance_count_and_salem(q):
    E = gen_diagonal(FieldCtx(q))
    assert distance_stats(E).card_delta == (q + 1) // 2
    assert salem_constant(E) == pytest.approx(math.sqrt(q), rel=1e-12)


def test_random_sets():
    ctx = FieldCtx(11)
    a, b = gen_random(ctx, 2, 30, seed=4), gen_random(ctx, 2, 30, seed=4)
    assert a.card == 30
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, gen_random(ctx, 2, 30, seed=5).points)
    assert gen_random(ctx, 2, 121, seed=0).card == 121
    with pytest.raises(ValueError):
        gen_random(ctx, 2, 122)


def test_point_set_validation():
    ctx = FieldCtx(5)
    with pytest.raises(ValueError, match="duplicates"):
        PointSet(ctx, 2, [[0, 1], [5, 6]])
    with pytest.raises(ValueError):
        PointSet(ctx, 2, np.zeros((0, 2)))
    assert as_set(PointSet(ctx, 2, [[7, -1]])) == {(2, 4)}
    with pytest.raises(ValueError):
        generate("cube", ctx, 2)


def test_single_point():
    stats = distance_stats(PointSet(FieldCtx(7), 3, [[1, 2, 3]]))
    assert stats.delta_set == frozenset({0})
    assert stats.nu[0] == 1


@pytest.mark.parametrize("maker", [
    lambda: gen_full(FieldCtx(3), 2),
    lambda: gen_paraboloid(FieldCtx(5), 3),
    lambda: gen_sphere(FieldCtx(7), 2, 3),
    lambda: gen_diagonal(FieldCtx(7)),
    lambda: gen_random(FieldCtx(7), 3, 40, seed=1),
])
def test_histogram_matches_oracle(maker):
    E = maker()
    stats = distance_stats(E)
    pts = [tuple(map(int, p)) for p in E.points]
    assert list(stats.hist) == pair_hist(pts, E.q)
    assert sum(stats.hist) == E.card ** 2
    assert sum(stats.nu) == 1
    assert stats.hist[0] >= E.card
    assert stats.delta_set == frozenset(j for j, v in enumerate(stats.nu) if v)


def test_nu_hat_examples():
    E = gen_diagonal(FieldCtx(5))
    stats = distance_stats(E)
    assert nu_hat(stats, 0) == pytest.approx(1 / 5)
    pts = [tuple(map(int, p)) for p in E.points]
    assert abs(nu_hat(stats, 1) - nu_hat_direct(pts, 5, 1)) < 1e-12
    full = distance_stats(gen_full(FieldCtx(3), 1))
    assert float(np.sum(np.abs(nu_hat_all(full)) ** 2)) == pytest.approx(5 / 27, rel=1e-12)


@pytest.mark.parametrize("q,d", [(3, 1), (3, 2), (5, 2), (7, 2), (5, 3)])
def test_nu_hat_on_full_space(q, d):
    stats = distance_stats(gen_full(FieldCtx(q), d))
    for k in range(1, q):
        assert abs(nu_hat(stats, k)) ** 2 == pytest.approx(q ** (-d - 2), rel=1e-9)


@pytest.mark.parametrize("maker", [
    lambda: gen_paraboloid(FieldCtx(7), 2),
    lambda: gen_sphere(FieldCtx(11), 3, 2),
    lambda: gen_random(FieldCtx(13), 2, 40, seed=9),
])
def test_histogram_reconstructed_from_nu_hat(maker):
    E = maker()
    stats = distance_stats(E)
    ctx = E.ctx
    nu = idft(GridFunction(ctx, 1, nu_hat_all(stats, ctx))).values.real
    assert np.max(np.abs(nu * E.card ** 2 - np.array(stats.hist))) < 1e-6


@pytest.mark.parametrize("maker", [
    lambda: gen_full(FieldCtx(5), 2),
    lambda: gen_paraboloid(FieldCtx(7), 3),
    lambda: gen_sphere(FieldCtx(5), 2, 0),
    lambda: gen_diagonal(FieldCtx(11)),
    lambda: gen_random(FieldCtx(11), 2, 11, seed=2),
    lambda: PointSet(FieldCtx(13), 2, [[0, 0]]),
])
def test_cauchy_schwarz_exact(maker):
    stats = distance_stats(maker())
    q = stats.q
    # right side from the complex nu^ values, compared with the exact rational form
    spec_sum = float(np.sum(np.abs(nu_hat_all(stats)) ** 2))
    assert spec_sum == pytest.approx(float(stats.nu_squared_sum() / q), rel=1e-10)
    assert stats.card_delta >= 1 / stats.nu_squared_sum()
    assert stats.card_delta >= math.ceil(1 / stats.nu_squared_sum())


def test_set_file_round_trip(tmp_path):
    E = gen_sphere(FieldCtx(7), 3, 2)
    path = tmp_path / "s.txt"
    save_set(E, path)
    F = load_set(path)
    assert F.q == 7 and F.d == 3
    assert np.array_equal(E.points, F.points)
    assert F.provenance["family"] == "sphere" and F.provenance["r"] == 2


def test_hand_written_file(tmp_path):
    path = tmp_path / "e.txt"
    path.write_text("5 2\n0 0\n1 1\n\n2 2\n")
    E = load_set(path)
    assert E.card == 3 and E.provenance["family"] == "file"


@pytest.mark.parametrize("text,msg", [
    ("", "empty"),
    ("5\n0 0\n", "header"),
    ("5 2\n0 0\n0 0\n", "duplicate"),
    ("5 2\n0 5\n", "outside"),
    ("5 2\n0 1 2\n", "expected 2"),
    ("5 2\n0 x\n", "non-integer"),
    ("5 2\n", "no points"),
])
def test_bad_files(tmp_path, text, msg):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(SetFormatError, match=msg):
        load_set(path)


def test_non_prime_file(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("9 2\n0 0\n")
    with pytest.raises(ValueError):
        load_set(path)
