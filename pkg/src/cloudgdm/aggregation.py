"""Turn a panel of interval ratings into one aggregate.

The main aggregator is :func:`aggregate_clouds`. :func:`aggregate_type1` and
:func:`iaa_membership` are the baselines it is validated against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .cloud import GaussianRating, Interval, NormalCloud
from .errors import InvalidArgumentError, UndefinedCentroidError


def _mean(values: Sequence[float]) -> float:
    # identical inputs must give that value back exactly
    first = values[0]
    if all(v == first for v in values):
        return float(first)
    return math.fsum(values) / len(values)


def _require_panel(intervals: Sequence[Interval]) -> None:
    if len(intervals) == 0:
        raise InvalidArgumentError("need at least one interval")


def interval_to_gaussian(interval: Interval) -> GaussianRating:
    """Read ``[a, b]`` as a 3-sigma confidence interval."""
    return GaussianRating((interval.lower + interval.upper) / 2.0, (interval.upper - interval.lower) / 6.0)


def aggregate_clouds(intervals: Sequence[Interval]) -> NormalCloud:
    _require_panel(intervals)
    ratings = [interval_to_gaussian(iv) for iv in intervals]
    means = [r.mean for r in ratings]
    sigmas = [r.sigma for r in ratings]
    ex = _mean(means)
    spread = math.sqrt(_mean([(m - ex) ** 2 for m in means]))
    en = _mean(sigmas) + spread
    he = math.sqrt(_mean([(s - en) ** 2 for s in sigmas]))
    return NormalCloud(ex, en, he)


def aggregate_type1(intervals: Sequence[Interval]) -> GaussianRating:
    _require_panel(intervals)
    ratings = [interval_to_gaussian(iv) for iv in intervals]
    return GaussianRating(_mean([r.mean for r in ratings]), _mean([r.sigma for r in ratings]))


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous piecewise-constant membership.

    ``levels[i]`` holds on ``[breakpoints[i], breakpoints[i + 1])``; the last
    level is zero and extends to infinity, as does zero below the first
    breakpoint. ``panel_size`` is the number of intervals aggregated.
    """

    breakpoints: tuple[float, ...]
    levels: tuple[float, ...]
    panel_size: int

    def __post_init__(self):
        if len(self.breakpoints) != len(self.levels):
            raise InvalidArgumentError("breakpoints and levels must have equal length")
        if any(b >= a for a, b in zip(self.breakpoints[1:], self.breakpoints)):
            raise InvalidArgumentError("breakpoints must be strictly increasing")
        if self.levels and self.levels[-1] != 0:
            raise InvalidArgumentError("membership must return to zero after the last breakpoint")

    def __call__(self, x: float) -> float:
        k = int(np.searchsorted(self.breakpoints, x, side="right")) - 1
        return 0.0 if k < 0 else self.levels[k]

    def segments(self) -> list[tuple[float, float, float]]:
        """Finite segments as ``(start, end, level)``."""
        return list(zip(self.breakpoints[:-1], self.breakpoints[1:], self.levels[:-1]))

    def mass(self) -> float:
        return math.fsum(level * (b - a) for a, b, level in self.segments())


def iaa_membership(intervals: Sequence[Interval]) -> StepFunction:
    """Interval agreement membership: fraction of the panel covering each point."""
    _require_panel(intervals)
    n = len(intervals)
    lowers = np.array([iv.lower for iv in intervals], dtype=np.float64)
    uppers = np.array([iv.upper for iv in intervals], dtype=np.float64)
    breaks, counts = kernels.iaa_sweep(lowers, uppers)
    return StepFunction(tuple(breaks.tolist()), tuple(c / n for c in counts.tolist()), n)


def iaa_centroid(f: StepFunction) -> float:
    """Centroid of the membership, integrating each constant segment in closed form."""
    num = []
    den = []
    for a, b, level in f.segments():
        if level > 0:
            num.append(level * (b * b - a * a) / 2.0)
            den.append(level * (b - a))
    total = math.fsum(den)
    if total <= 0:
        raise UndefinedCentroidError("membership function is zero everywhere; centroid undefined")
    return math.fsum(num) / total


def iaa_sample(f: StepFunction, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` values with density proportional to the membership."""
    segs = [(a, b, level) for a, b, level in f.segments() if level > 0]
    if not segs:
        raise UndefinedCentroidError("membership function is zero everywhere; nothing to sample")
    starts = np.array([s[0] for s in segs])
    ends = np.array([s[1] for s in segs])
    weights = np.array([s[2] * (s[1] - s[0]) for s in segs])
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    k = np.searchsorted(cdf, rng.random(n), side="right")
    k = np.minimum(k, len(segs) - 1)
    return starts[k] + (ends[k] - starts[k]) * rng.random(n)


def overlap_similarity(p: Interval, c: Interval) -> float:
    """Smaller of the two overlap ratios ``|p & c| / |p|`` and ``|p & c| / |c|``."""
    if p.width <= 0 or c.width <= 0:
        raise InvalidArgumentError("overlap similarity needs intervals of positive width")
    inter = min(p.upper, c.upper) - max(p.lower, c.lower)
    if inter <= 0:
        return 0.0
    return min(inter / p.width, inter / c.width)
