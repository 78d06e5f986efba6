"""Normal cloud models: forward and backward generators, scaling, ordering, distance."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import InvalidArgumentError

SQRT_HALF_PI = math.sqrt(math.pi / 2.0)


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float

    def __post_init__(self):
        if not _finite(self.lower, self.upper):
            raise InvalidArgumentError(f"interval endpoints must be finite, got [{self.lower}, {self.upper}]")
        if self.lower > self.upper:
            raise InvalidArgumentError(f"inverted interval [{self.lower}, {self.upper}]")

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class GaussianRating:
    mean: float
    sigma: float

    def __post_init__(self):
        if not _finite(self.mean, self.sigma):
            raise InvalidArgumentError("gaussian rating must be finite")
        if self.sigma < 0:
            raise InvalidArgumentError(f"sigma must be non-negative, got {self.sigma}")


@dataclass(frozen=True)
class NormalCloud:
    """A normal cloud ``(ex, en, he)``: expectation, entropy, hyper-entropy."""

    ex: float
    en: float
    he: float

    def __post_init__(self):
        if not _finite(self.ex, self.en, self.he):
            raise InvalidArgumentError(f"cloud parameters must be finite, got {self.as_tuple()}")
        if self.en < 0 or self.he < 0:
            raise InvalidArgumentError(f"entropy and hyper-entropy must be non-negative, got {self.as_tuple()}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.ex, self.en, self.he)


class CloudDrop(NamedTuple):
    x: float
    y: float


class CloudDrops(NamedTuple):
    """Cloud drops held as parallel arrays; iterates as :class:`CloudDrop`."""

    x: np.ndarray
    y: np.ndarray

    def __len__(self) -> int:
        return int(self.x.shape[0])

    def __iter__(self) -> Iterator[CloudDrop]:  # type: ignore[override]
        for x, y in zip(self.x.tolist(), self.y.tolist()):
            yield CloudDrop(x, y)

    def __getitem__(self, k):  # type: ignore[override]
        return CloudDrop(float(self.x[k]), float(self.y[k]))


class Ordering(enum.Enum):
    GREATER = 1
    EQUAL = 0
    LESS = -1


class DistanceMeasure(str, enum.Enum):
    PAPER = "paper"
    EUCLIDEAN = "euclidean"
    HAMMING = "hamming"


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """PCG64 generator seeded through ``SeedSequence``.

    ``seed`` is a non-negative 64-bit integer; extra ``keys`` select an
    independent substream, so ``make_rng(s, i, j)`` is stable per ``(i, j)``.
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidArgumentError(f"seed must be an integer, got {seed!r}")
    if not 0 <= int(seed) < 2**64:
        raise InvalidArgumentError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
    entropy = [int(seed), *(int(k) for k in keys)] if keys else int(seed)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def certainty_degree(x: float, ex: float, en_prime: float) -> float:
    if not _finite(x, ex, en_prime):
        raise InvalidArgumentError("certainty_degree needs finite inputs")
    if en_prime == 0.0:
        return 1.0 if x == ex else 0.0
    dx = x - ex
    return math.exp(-(dx * dx) / (2.0 * en_prime * en_prime))


def generate_drops(
    cloud: NormalCloud,
    n: int,
    seed: int | None = None,
    *,
    rng: np.random.Generator | None = None,
) -> CloudDrops:
    """Forward normal cloud generator.

    Each drop samples ``En' ~ N(en, he**2)``, then ``x ~ N(ex, |En'|**2)``,
    and scores ``x`` with its certainty degree. Pass either ``seed`` or an
    existing ``rng``.
    """
    if n < 1:
        raise InvalidArgumentError(f"need at least one drop, got n={n}")
    if rng is None:
        if seed is None:
            raise InvalidArgumentError("generate_drops needs a seed or an rng")
        rng = make_rng(seed)
    en_prime = np.abs(rng.normal(cloud.en, cloud.he, n))
    x = rng.normal(cloud.ex, en_prime)
    return CloudDrops(x, kernels.certainty(x, cloud.ex, en_prime))


def backward_generate(xs: Sequence[float] | np.ndarray) -> NormalCloud:
    """Backward cloud generator from drop positions alone (no certainty degrees)."""
    xs = np.asarray(xs, dtype=np.float64)
    if xs.ndim != 1 or xs.size == 0:
        raise InvalidArgumentError("backward_generate needs a non-empty 1-D sample")
    if not np.all(np.isfinite(xs)):
        raise InvalidArgumentError("backward_generate needs finite samples")
    if np.all(xs == xs[0]):
        return NormalCloud(float(xs[0]), 0.0, 0.0)
    ex = float(np.mean(xs))
    dev = xs - ex
    en = SQRT_HALF_PI * float(np.mean(np.abs(dev)))
    s2 = float(np.mean(dev * dev))
    return NormalCloud(ex, en, math.sqrt(abs(s2 - en * en)))


def scale(cloud: NormalCloud, lam: float) -> NormalCloud:
    if not (math.isfinite(lam) and lam > 0):
        raise InvalidArgumentError(f"scale factor must be positive, got {lam}")
    root = math.sqrt(lam)
    return NormalCloud(lam * cloud.ex, root * cloud.en, root * cloud.he)


def to_interval(cloud: NormalCloud) -> Interval:
    return Interval(cloud.ex - 3.0 * cloud.en, cloud.ex + 3.0 * cloud.en)


def comparison_score(c1: NormalCloud, c2: NormalCloud) -> float:
    """Score ``2(a_hi - b_lo) - (a_hi - a_lo + b_hi - b_lo)`` on the 3-En intervals.

    Expanding the endpoints the entropy terms cancel and the score equals
    ``2 * (c1.ex - c2.ex)``; that form is used because it is exactly
    antisymmetric in floating point.
    """
    return 2.0 * (c1.ex - c2.ex)


def compare(c1: NormalCloud, c2: NormalCloud) -> Ordering:
    s = comparison_score(c1, c2)
    if s > 0:
        return Ordering.GREATER
    if s < 0:
        return Ordering.LESS
    # lower entropy, then lower hyper-entropy, is preferred
    if c1.en != c2.en:
        return Ordering.GREATER if c1.en < c2.en else Ordering.LESS
    if c1.he != c2.he:
        return Ordering.GREATER if c1.he < c2.he else Ordering.LESS
    return Ordering.EQUAL


def distance(c1: NormalCloud, c2: NormalCloud, measure: DistanceMeasure | str = DistanceMeasure.PAPER) -> float:
    """Distance between two clouds.

    ``paper``: ``sqrt(dEx**2 + |dEn| + |dHe|)``. ``euclidean`` and
    ``hamming`` treat the triple as a plain vector (L2 and L1); they are
    stand-ins for the literature measures used in sensitivity runs.
    """
    measure = parse_measure(measure)
    dex = abs(c1.ex - c2.ex)
    den = abs(c1.en - c2.en)
    dhe = abs(c1.he - c2.he)
    if measure is DistanceMeasure.PAPER:
        return math.sqrt(dex * dex + den + dhe)
    if measure is DistanceMeasure.EUCLIDEAN:
        return math.sqrt(dex * dex + den * den + dhe * dhe)
    return dex + den + dhe


def parse_measure(measure: DistanceMeasure | str) -> DistanceMeasure:
    if isinstance(measure, DistanceMeasure):
        return measure
    try:
        return DistanceMeasure(str(measure).strip().lower())
    except ValueError:
        known = ", ".join(m.value for m in DistanceMeasure)
        raise InvalidArgumentError(f"unknown distance measure {measure!r} (expected one of {known})") from None
