"""Quality indicators over 2-D similarity fronts and non-parametric tests.

Fronts are sets of ``(syntactic, semantic)`` points in the unit square,
both maximized. Hypervolume is measured from the nadir ``(0, 0)``; IGD
defaults to the ideal point ``(1, 1)`` as its reference set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from scipy import stats

Point = tuple[float, float]
IDEAL: tuple[Point, ...] = ((1.0, 1.0),)


@dataclass(frozen=True)
class StatResult:
    statistic: float
    p_value: float | None = None
    effect_size: float | None = None

    def to_json(self) -> dict:
        return {"statistic": self.statistic, "p_value": self.p_value, "effect_size": self.effect_size}


def _check_unit(points: Iterable[Point]) -> list[Point]:
    out = []
    for x, y in points:
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise ValueError(f"front point {(x, y)} lies outside the unit square")
        out.append((float(x), float(y)))
    return out


def hypervolume(front: Iterable[Point]) -> float:
    """Area of the union of ``[0, x] x [0, y]`` over the front."""
    pts = sorted(_check_unit(front), key=lambda p: (-p[0], -p[1]))
    xs = [p[0] for p in pts] + [0.0]
    area = 0.0
    best_y = 0.0
    # slab (xs[i+1], xs[i]] is covered up to the tallest point right of it
    for i, (x, y) in enumerate(pts):
        best_y = max(best_y, y)
        area += (x - xs[i + 1]) * best_y
    return area


def igd(front: Iterable[Point], reference: Iterable[Point] = IDEAL) -> float:
    """Mean distance from each reference point to its nearest front point."""
    pts = _check_unit(front)
    refs = list(reference)
    if not pts:
        return math.inf
    if not refs:
        raise ValueError("reference set must be nonempty")
    return sum(min(_distance(r, p) for p in pts) for r in refs) / len(refs)


def _distance(a: Point, b: Point) -> float:
    return math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2)


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> StatResult:
    """H test with tie correction; chi-square p-value with ``len(groups)-1`` df."""
    if len(groups) < 2 or any(len(g) == 0 for g in groups):
        raise ValueError("need at least two nonempty groups")
    flat = [x for g in groups for x in g]
    if all(x == flat[0] for x in flat):
        return StatResult(0.0, 1.0)
    h, p = stats.kruskal(*groups)
    return StatResult(float(h), float(p))


def mann_whitney(a: Sequence[float], b: Sequence[float]) -> StatResult:
    """U counts pairs with ``a_i < b_j`` (ties count one half), so that
    ``U == len(a) * len(b) * (1 - A12(a, b))``.

    Two-sided p-value from the tie-corrected normal approximation.
    """
    if not a or not b:
        raise ValueError("samples must be nonempty")
    u = sum((x < y) + 0.5 * (x == y) for x in a for y in b)
    flat = list(a) + list(b)
    if all(x == flat[0] for x in flat):
        return StatResult(float(u), 1.0, a12(a, b).effect_size)
    res = stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=False)
    return StatResult(float(u), float(res.pvalue), a12(a, b).effect_size)


def a12(a: Sequence[float], b: Sequence[float]) -> StatResult:
    """Vargha-Delaney probability that a draw from ``a`` beats one from ``b``."""
    if not a or not b:
        raise ValueError("samples must be nonempty")
    wins = sum((x > y) + 0.5 * (x == y) for x in a for y in b)
    value = wins / (len(a) * len(b))
    return StatResult(value, effect_size=value)


def magnitude(effect: float) -> str:
    """Conventional thresholds on ``|A12 - 0.5|``."""
    d = abs(effect - 0.5)
    if d < 0.06:
        return "negligible"
    if d < 0.14:
        return "small"
    if d < 0.21:
        return "medium"
    return "large"
