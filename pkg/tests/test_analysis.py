import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltlrepair.analysis import a12, hypervolume, igd, kruskal_wallis, magnitude, mann_whitney
from oracles import brute_igd, grid_hypervolume

unit = st.floats(0, 1, allow_nan=False)
points = st.lists(st.tuples(unit, unit), min_size=1, max_size=12)


def test_hypervolume_examples():
    assert hypervolume([(1, 1)]) == 1.0
    assert hypervolume([(0.5, 0.5)]) == 0.25
    assert hypervolume([(0.8, 0.2), (0.2, 0.8)]) == pytest.approx(0.28)
    assert hypervolume([]) == 0.0


def test_hypervolume_rejects_points_outside_unit_square():
    with pytest.raises(ValueError):
        hypervolume([(1.2, 0.5)])


def test_hypervolume_matches_grid():
    rng = random.Random(0)
    for _ in range(100):
        front = [(rng.random(), rng.random()) for _ in range(rng.randint(1, 8))]
        assert abs(hypervolume(front) - grid_hypervolume(front)) <= 1e-3


@settings(max_examples=200, deadline=None)
@given(points, st.tuples(unit, unit))
def test_hypervolume_monotone(front, extra):
    before = hypervolume(front)
    assert hypervolume(front + [extra]) >= before - 1e-12
    x, y = front[0]
    assert hypervolume(front + [(x / 2, y / 2)]) == pytest.approx(before)


def test_hypervolume_is_one_only_with_ideal_point():
    assert hypervolume([(1, 0.999), (0.999, 1)]) < 1.0


def test_igd_examples():
    assert igd([(1, 1)]) == 0.0
    assert igd([(0, 0)]) == pytest.approx(math.sqrt(2))
    assert igd([(1, 0), (0, 1)], [(1, 1), (0.5, 0.5)]) == pytest.approx((1 + math.sqrt(0.5)) / 2)
    assert igd([]) == math.inf


@settings(max_examples=100, deadline=None)
@given(points, st.lists(st.tuples(unit, unit), min_size=1, max_size=5))
def test_igd_matches_brute_force(front, refs):
    assert igd(front, refs) == brute_igd(front, refs)


@settings(max_examples=200, deadline=None)
@given(points, st.tuples(unit, unit))
def test_igd_decreases_when_adding(front, extra):
    assert igd(front + [extra]) <= igd(front)


def test_kruskal_examples():
    assert kruskal_wallis([[1, 2, 3], [1, 2, 3]]).statistic == 0.0
    assert kruskal_wallis([[1, 2, 3], [10, 11, 12]]).statistic == pytest.approx(3.857, abs=1e-3)
    same = kruskal_wallis([[4, 4], [4, 4], [4]])
    assert (same.statistic, same.p_value) == (0.0, 1.0)
    with pytest.raises(ValueError):
        kruskal_wallis([[1, 2]])


def test_mann_whitney_examples():
    a = [1.0, 2.0, 3.0]
    res = mann_whitney(a, a)
    assert res.statistic == len(a) ** 2 / 2
    assert res.p_value == pytest.approx(1.0)
    assert mann_whitney([1, 2], [3, 4]).statistic == 4
    assert mann_whitney([3, 4], [1, 2]).statistic == 0
    assert mann_whitney([2, 4, 6], [1, 3, 5]).statistic == 3


def test_a12_examples():
    assert a12([5, 5], [5, 5]).effect_size == 0.5
    assert a12([2, 2], [1, 1]).effect_size == 1.0
    assert a12([1, 3, 5], [2, 4, 6]).effect_size == pytest.approx(3 / 9)


def _tie_free(rng, n, m):
    values = rng.sample(range(10_000), n + m)
    return [v / 10 for v in values[:n]], [v / 10 for v in values[n:]]


def test_a12_complement_identity():
    rng = random.Random(1)
    for _ in range(200):
        a, b = _tie_free(rng, rng.randint(1, 15), rng.randint(1, 15))
        assert a12(a, b).effect_size + a12(b, a).effect_size == pytest.approx(1.0)


def test_u_matches_a12_pair_count():
    rng = random.Random(2)
    for _ in range(200):
        a, b = _tie_free(rng, rng.randint(1, 15), rng.randint(1, 15))
        u = mann_whitney(a, b).statistic
        assert u == pytest.approx(len(a) * len(b) * (1 - a12(a, b).effect_size))


def test_kruskal_and_mann_whitney_agree():
    rng = random.Random(3)
    for _ in range(200):
        shift = rng.choice([0.0, 0.5, 1.0, 2.0])
        a = [rng.gauss(0, 1) for _ in range(rng.randint(5, 15))]
        b = [rng.gauss(shift, 1) for _ in range(rng.randint(5, 15))]
        kw = kruskal_wallis([a, b]).p_value < 0.05
        mw = mann_whitney(a, b).p_value < 0.05
        assert kw == mw


def test_p_values_in_range():
    rng = random.Random(4)
    for _ in range(50):
        a = [rng.randint(0, 3) for _ in range(8)]
        b = [rng.randint(0, 3) for _ in range(8)]
        for res in (kruskal_wallis([a, b]), mann_whitney(a, b)):
            assert 0.0 <= res.p_value <= 1.0


def test_magnitude_thresholds():
    assert magnitude(0.5) == "negligible"
    assert magnitude(0.6) == "small"
    assert magnitude(0.32) == "medium"
    assert magnitude(0.95) == "large"
