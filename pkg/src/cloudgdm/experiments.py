"""Simulation harness that checks how well each aggregator preserves a panel's spread.

For each panel size ``d`` and problem ``p`` we draw ``d`` random intervals,
pool ``samples`` Gaussian draws per interval, aggregate the intervals with
each method, draw ``samples * d`` values from the aggregate, and compare
the two inter-quartile ranges with the overlap-ratio similarity.

Randomness is split into independent substreams keyed by
``(seed, d, p, stream)`` through :class:`numpy.random.SeedSequence`, where
stream 0 drives the intervals and the pool and stream ``k`` drives method
``k`` (see :data:`METHODS`). A cell's output therefore does not depend on
which other methods run, or on the order cells are executed in.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import special

from .aggregation import aggregate_clouds, aggregate_type1, iaa_membership, iaa_sample
from .cloud import Interval, NormalCloud, backward_generate, generate_drops, make_rng
from .errors import InvalidArgumentError, UndefinedCentroidError

# stream index of each method; 0 is reserved for intervals and the pool
METHODS = {"cloud": 1, "backward_cg": 2, "type1": 3, "iaa": 4}


@dataclass(frozen=True)
class Stats:
    mean: float
    q1: float
    q2: float
    q3: float

    def iqr(self) -> tuple[float, float]:
        return (self.q1, self.q3)


@dataclass(frozen=True)
class ExperimentConfig:
    d_max: int = 10
    problems: int = 100
    samples: int = 50
    seed: int = 0
    rating_domain: Interval = field(default_factory=lambda: Interval(0.0, 100.0))

    def __post_init__(self):
        if self.d_max < 2:
            raise InvalidArgumentError("d_max must be at least 2")
        if self.problems < 1 or self.samples < 1:
            raise InvalidArgumentError("problems and samples must be positive")
        if self.rating_domain.width <= 0:
            raise InvalidArgumentError("rating domain needs positive width")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class ProblemRecord:
    panel_size: int
    problem_index: int
    intervals: tuple[Interval, ...]
    pool_stats: Stats
    method_stats: dict[str, Stats]
    s_or: dict[str, float]


def quartiles(values) -> Stats:
    """Mean and quartiles; quartiles interpolate linearly at position ``1 + (n - 1) p``."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise InvalidArgumentError("quartiles of an empty sample")
    if np.all(v == v.flat[0]):
        c = float(v.flat[0])
        return Stats(c, c, c, c)
    q1, q2, q3 = np.quantile(v, [0.25, 0.5, 0.75], method="linear")
    return Stats(float(np.mean(v)), float(q1), float(q2), float(q3))


def iqr_similarity(p: Stats, c: Stats) -> float:
    """Overlap-ratio similarity of two inter-quartile ranges.

    Zero-width ranges score 1 against an identical point and 0 otherwise.
    """
    p_lo, p_hi = p.iqr()
    c_lo, c_hi = c.iqr()
    wp, wc = p_hi - p_lo, c_hi - c_lo
    if wp <= 0 or wc <= 0:
        return 1.0 if (wp <= 0 and wc <= 0 and p_lo == c_lo) else 0.0
    inter = min(p_hi, c_hi) - max(p_lo, c_lo)
    if inter <= 0:
        return 0.0
    return min(1.0, inter / wp, inter / wc)


def substream(seed: int, d: int, p: int, stream: int) -> np.random.Generator:
    return make_rng(seed, d, p, stream)


def random_intervals(rng: np.random.Generator, d: int, domain: Interval) -> list[Interval]:
    """``d`` intervals with two sorted uniform endpoints each; zero widths are redrawn."""
    out = []
    while len(out) < d:
        a, b = np.sort(rng.uniform(domain.lower, domain.upper, 2))
        if b > a:
            out.append(Interval(float(a), float(b)))
    return out


def make_pool(rng: np.random.Generator, intervals: Sequence[Interval], samples: int) -> np.ndarray:
    parts = []
    for iv in intervals:
        mean = (iv.lower + iv.upper) / 2.0
        sigma = (iv.upper - iv.lower) / 6.0
        parts.append(rng.normal(mean, sigma, samples))
    return np.concatenate(parts)


def backward_cg_aggregate(pool) -> NormalCloud:
    return backward_generate(pool)


def method_sample(method: str, intervals: Sequence[Interval], pool: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    if method == "cloud":
        return generate_drops(aggregate_clouds(intervals), n, rng=rng).x
    if method == "backward_cg":
        return generate_drops(backward_cg_aggregate(pool), n, rng=rng).x
    if method == "type1":
        g = aggregate_type1(intervals)
        return rng.normal(g.mean, g.sigma, n)
    if method == "iaa":
        try:
            return iaa_sample(iaa_membership(intervals), n, rng)
        except UndefinedCentroidError:
            # point-only panel: the density collapses onto the points
            points = np.array([(iv.lower + iv.upper) / 2.0 for iv in intervals])
            return points[rng.integers(0, len(points), n)]
    raise InvalidArgumentError(f"unknown method {method!r}")


def _check_methods(methods: Iterable[str]) -> list[str]:
    methods = list(dict.fromkeys(methods))
    if not methods:
        raise InvalidArgumentError("need at least one method")
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise InvalidArgumentError(f"unknown method(s) {unknown}; expected a subset of {sorted(METHODS)}")
    return sorted(methods, key=METHODS.get)


def run_problem(
    intervals: Sequence[Interval],
    samples: int,
    methods: Sequence[str],
    pool_rng: np.random.Generator,
    method_rngs: dict[str, np.random.Generator],
    *,
    d: int | None = None,
    p: int = 0,
) -> ProblemRecord:
    """One problem: pool, aggregate with each method, compare IQRs."""
    d = len(intervals) if d is None else d
    pool = make_pool(pool_rng, intervals, samples)
    pool_stats = quartiles(pool)
    stats, sims = {}, {}
    for m in methods:
        xs = method_sample(m, intervals, pool, samples * len(intervals), method_rngs[m])
        stats[m] = quartiles(xs)
        sims[m] = iqr_similarity(pool_stats, stats[m])
    return ProblemRecord(d, p, tuple(intervals), pool_stats, stats, sims)


def _run_cell(args) -> ProblemRecord:
    config, methods, d, p = args
    rng0 = substream(config.seed, d, p, 0)
    intervals = random_intervals(rng0, d, config.rating_domain)
    rngs = {m: substream(config.seed, d, p, METHODS[m]) for m in methods}
    return run_problem(intervals, config.samples, methods, rng0, rngs, d=d, p=p)


def run_experiment(config: ExperimentConfig, methods: Iterable[str] = ("cloud",), *, workers: int = 1) -> list[ProblemRecord]:
    """Records ordered by panel size, then problem index (problems are 1-based)."""
    methods = _check_methods(methods)
    cells = [(config, methods, d, p) for d in range(2, config.d_max + 1) for p in range(1, config.problems + 1)]
    if workers <= 1:
        return [_run_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_cell, cells, chunksize=max(1, len(cells) // (4 * workers))))


@dataclass(frozen=True)
class TTest:
    t: float
    p: float


def student_t_sf2(t: float, df: int) -> float:
    """Two-sided tail probability ``P(|T| >= |t|)`` via the regularized incomplete beta."""
    if math.isinf(t):
        return 0.0
    return float(special.betainc(df / 2.0, 0.5, df / (df + t * t)))


def paired_t_test(a, b) -> TTest:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidArgumentError("paired samples must be 1-D and of equal length")
    n = a.size
    if n < 2:
        raise InvalidArgumentError("paired t-test needs at least two pairs")
    diff = a - b
    mean = float(np.mean(diff))
    sd = float(np.std(diff, ddof=1))
    if sd == 0.0:
        if mean == 0.0:
            return TTest(0.0, 1.0)
        return TTest(math.copysign(math.inf, mean), 0.0)
    t = mean / (sd / math.sqrt(n))
    return TTest(t, student_t_sf2(t, n - 1))


@dataclass(frozen=True)
class SummaryRow:
    panel_size: int
    method: str
    mean_s_or: float
    sd_s_or: float
    t_test_mean: TTest | None
    t_test_q1: TTest | None
    t_test_q2: TTest | None
    t_test_q3: TTest | None


def summarize(records: Sequence[ProblemRecord]) -> list[SummaryRow]:
    """Per (panel size, method): S_OR mean and sd, and pool-vs-method paired t-tests."""
    groups: dict[tuple[int, str], list[ProblemRecord]] = {}
    for r in records:
        for m in sorted(r.s_or, key=METHODS.get):
            groups.setdefault((r.panel_size, m), []).append(r)
    rows = []
    for (d, m), recs in sorted(groups.items(), key=lambda kv: (kv[0][0], METHODS[kv[0][1]])):
        s = np.array([r.s_or[m] for r in recs])
        sd = float(np.std(s, ddof=1)) if s.size > 1 else 0.0
        tests = []
        for attr in ("mean", "q1", "q2", "q3"):
            if len(recs) < 2:
                tests.append(None)
                continue
            tests.append(
                paired_t_test(
                    [getattr(r.pool_stats, attr) for r in recs],
                    [getattr(r.method_stats[m], attr) for r in recs],
                )
            )
        rows.append(SummaryRow(d, m, float(np.mean(s)), sd, *tests))
    return rows
