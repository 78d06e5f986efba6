"""Group decision pipeline: survey -> cloud matrix -> weights -> cloud TOPSIS ranking."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .aggregation import aggregate_clouds, iaa_centroid, iaa_membership
from .cloud import (
    DistanceMeasure,
    Interval,
    NormalCloud,
    Ordering,
    compare,
    distance,
    parse_measure,
    scale,
)
from .errors import (
    CloudGDMError,
    IncompleteSurveyError,
    InvalidArgumentError,
    UndefinedCentroidError,
    UndefinedCorrelationError,
)
from .weights import ReferencePolicy, WeightSolution, derive_weights


class Direction(str, enum.Enum):
    BENEFIT = "benefit"
    COST = "cost"

    @classmethod
    def parse(cls, value) -> "Direction":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower()
        aliases = {"higher-the-better": "benefit", "lower-the-better": "cost", "max": "benefit", "min": "cost"}
        try:
            return cls(aliases.get(text, text))
        except ValueError:
            raise InvalidArgumentError(f"unknown criterion direction {value!r}") from None

    def flipped(self) -> "Direction":
        return Direction.COST if self is Direction.BENEFIT else Direction.BENEFIT


@dataclass(frozen=True)
class CriterionSpec:
    id: str
    label: str = ""
    direction: Direction = Direction.BENEFIT

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction.parse(self.direction))
        if not self.label:
            object.__setattr__(self, "label", self.id)


@dataclass(frozen=True)
class SurveyData:
    """Interval ratings keyed by ``(expert, alternative, criterion)``.

    Not every expert has to rate every cell, but every
    ``(alternative, criterion)`` cell needs at least one rating.
    """

    experts: tuple[str, ...]
    alternatives: tuple[str, ...]
    criteria: tuple[CriterionSpec, ...]
    ratings: Mapping[tuple[str, str, str], Interval]

    def __post_init__(self):
        ids = [c.id for c in self.criteria]
        if len(set(ids)) != len(ids):
            raise InvalidArgumentError("criterion ids must be unique")
        if len(set(self.alternatives)) != len(self.alternatives):
            raise InvalidArgumentError("alternative ids must be unique")
        if not self.alternatives or not self.criteria:
            raise InvalidArgumentError("survey needs at least one alternative and one criterion")
        experts, alts, crits = set(self.experts), set(self.alternatives), set(ids)
        for (e, a, c) in self.ratings:
            if e not in experts or a not in alts or c not in crits:
                raise InvalidArgumentError(f"rating ({e}, {a}, {c}) refers to an unknown expert, alternative or criterion")
        missing = [(a, c) for a, c in self.cells() if not self.cell_ratings(a, c)]
        if missing:
            listed = ", ".join(f"({a}, {c})" for a, c in missing[:10])
            more = "" if len(missing) <= 10 else f" and {len(missing) - 10} more"
            raise IncompleteSurveyError(f"no ratings for cell(s) {listed}{more}", missing)

    @classmethod
    def from_ratings(
        cls,
        ratings: Mapping[tuple[str, str, str], Interval],
        criteria: Sequence[CriterionSpec] | None = None,
    ) -> "SurveyData":
        """Build a survey whose expert/alternative order is first appearance in ``ratings``."""
        experts: dict[str, None] = {}
        alts: dict[str, None] = {}
        crits: dict[str, None] = {}
        for e, a, c in ratings:
            experts.setdefault(e, None)
            alts.setdefault(a, None)
            crits.setdefault(c, None)
        if criteria is None:
            criteria = [CriterionSpec(c) for c in crits]
        return cls(tuple(experts), tuple(alts), tuple(criteria), dict(ratings))

    @property
    def criterion_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.criteria)

    def cells(self):
        for a in self.alternatives:
            for c in self.criterion_ids:
                yield a, c

    def cell_ratings(self, alternative: str, criterion: str) -> list[Interval]:
        index = self._index()
        return index.get((alternative, criterion), [])

    def _index(self) -> dict[tuple[str, str], list[Interval]]:
        cached = self.__dict__.get("_cell_index")
        if cached is None:
            cached = {}
            order = {e: k for k, e in enumerate(self.experts)}
            keys = sorted(self.ratings, key=lambda key: order[key[0]])
            for e, a, c in keys:
                cached.setdefault((a, c), []).append(self.ratings[(e, a, c)])
            object.__setattr__(self, "_cell_index", cached)
        return cached

    def with_criteria(self, criteria: Sequence[CriterionSpec]) -> "SurveyData":
        return SurveyData(self.experts, self.alternatives, tuple(criteria), self.ratings)


@dataclass(frozen=True)
class DecisionMatrix:
    cells: tuple[tuple[NormalCloud, ...], ...]
    weighted: bool = False

    def __post_init__(self):
        if not self.cells or not self.cells[0]:
            raise InvalidArgumentError("decision matrix must be non-empty")
        m = len(self.cells[0])
        if any(len(row) != m for row in self.cells):
            raise InvalidArgumentError("decision matrix rows must all have the same length")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.cells), len(self.cells[0])

    def column(self, j: int) -> list[NormalCloud]:
        return [row[j] for row in self.cells]

    def component(self, name: str) -> np.ndarray:
        return np.array([[getattr(c, name) for c in row] for row in self.cells], dtype=np.float64)

    @property
    def he(self) -> np.ndarray:
        return self.component("he")


@dataclass(frozen=True)
class IdealSolutions:
    positive: tuple[NormalCloud, ...]
    negative: tuple[NormalCloud, ...]


@dataclass(frozen=True)
class RankingResult:
    d_plus: tuple[float, ...]
    d_minus: tuple[float, ...]
    rs: tuple[float, ...]
    ranks: tuple[int, ...]


@dataclass(frozen=True)
class PipelineOptions:
    policy: ReferencePolicy = field(default_factory=ReferencePolicy)
    measure: DistanceMeasure = DistanceMeasure.PAPER


@dataclass(frozen=True)
class PipelineReport:
    survey: SurveyData
    options: PipelineOptions
    matrix: DecisionMatrix
    weights: WeightSolution
    weighted_matrix: DecisionMatrix
    ideals: IdealSolutions
    ranking: RankingResult

    @property
    def xi(self) -> float:
        return self.weights.xi


def build_decision_matrix(survey: SurveyData) -> DecisionMatrix:
    rows = []
    for a in survey.alternatives:
        row = []
        for c in survey.criterion_ids:
            intervals = survey.cell_ratings(a, c)
            if not intervals:
                raise IncompleteSurveyError(f"no ratings for cell ({a}, {c})", [(a, c)])
            row.append(aggregate_clouds(intervals))
        rows.append(tuple(row))
    return DecisionMatrix(tuple(rows), weighted=False)


def weight_matrix(matrix: DecisionMatrix, weights: Sequence[float], *, allow_zero: bool = False) -> DecisionMatrix:
    """Scale column ``j`` by ``weights[j]``.

    Cloud scaling needs a positive factor. With ``allow_zero`` a zero weight
    maps the column to ``(0, 0, 0)``, the limit of scaling as the factor
    goes to zero, which removes that criterion from every distance.
    """
    if matrix.weighted:
        raise InvalidArgumentError("matrix is already weighted")
    n, m = matrix.shape
    w = [float(v) for v in weights]
    if len(w) != m:
        raise InvalidArgumentError(f"expected {m} weights, got {len(w)}")
    if abs(math.fsum(w) - 1.0) > 1e-9:
        raise InvalidArgumentError(f"weights must sum to 1, got {math.fsum(w)!r}")
    for j, v in enumerate(w):
        if v < 0 or (v == 0 and not allow_zero) or not math.isfinite(v):
            raise InvalidArgumentError(f"weight for criterion {j} must be positive, got {v}")
    zero = NormalCloud(0.0, 0.0, 0.0)
    cells = tuple(
        tuple(scale(cell, w[j]) if w[j] > 0 else zero for j, cell in enumerate(row)) for row in matrix.cells
    )
    return DecisionMatrix(cells, weighted=True)


def column_extremes(column: Sequence[NormalCloud]) -> tuple[int, int]:
    """Indices of the greatest and least cloud in one pass, first occurrence on ties."""
    hi = lo = 0
    for i in range(1, len(column)):
        if compare(column[i], column[hi]) is Ordering.GREATER:
            hi = i
        elif compare(column[i], column[lo]) is Ordering.LESS:
            lo = i
    return hi, lo


def ideal_solutions(matrix: DecisionMatrix, criteria: Sequence[CriterionSpec]) -> IdealSolutions:
    n, m = matrix.shape
    if len(criteria) != m:
        raise InvalidArgumentError(f"expected {m} criteria, got {len(criteria)}")
    pos, neg = [], []
    for j, crit in enumerate(criteria):
        column = matrix.column(j)
        hi, lo = column_extremes(column)
        if crit.direction is Direction.COST:
            hi, lo = lo, hi
        pos.append(column[hi])
        neg.append(column[lo])
    return IdealSolutions(tuple(pos), tuple(neg))


def distances_to_ideals(
    matrix: DecisionMatrix, ideals: IdealSolutions, measure: DistanceMeasure | str = DistanceMeasure.PAPER
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    measure = parse_measure(measure)
    n, m = matrix.shape
    if len(ideals.positive) != m or len(ideals.negative) != m:
        raise InvalidArgumentError("ideal solutions do not match the matrix width")
    d_plus = tuple(math.fsum(distance(row[j], ideals.positive[j], measure) for j in range(m)) for row in matrix.cells)
    d_minus = tuple(math.fsum(distance(row[j], ideals.negative[j], measure) for j in range(m)) for row in matrix.cells)
    return d_plus, d_minus


def ranking_scores(d_plus: Sequence[float], d_minus: Sequence[float]) -> tuple[float, ...]:
    if len(d_plus) != len(d_minus):
        raise InvalidArgumentError("distance vectors differ in length")
    out = []
    for dp, dm in zip(d_plus, d_minus):
        if dp < 0 or dm < 0:
            raise InvalidArgumentError(f"distances must be non-negative, got d+={dp}, d-={dm}")
        total = dp + dm
        out.append(0.5 if total == 0 else dm / total)
    return tuple(out)


def rank(scores: Sequence[float]) -> tuple[int, ...]:
    """Rank 1 for the largest score; ties go to the lower index."""
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    ranks = [0] * len(scores)
    for position, i in enumerate(order, start=1):
        ranks[i] = position
    return tuple(ranks)


def _midranks(values: Sequence[float]) -> list[int]:
    """Twice the average rank of each value, so ties stay integral."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    doubled = [0] * len(values)
    k = 0
    while k < len(order):
        end = k
        while end + 1 < len(order) and values[order[end + 1]] == values[order[k]]:
            end += 1
        # ranks k+1 .. end+1 averaged, doubled
        for idx in order[k : end + 1]:
            doubled[idx] = k + end + 2
        k = end + 1
    return doubled


def spearman(rank_x: Sequence[float], rank_y: Sequence[float]) -> float:
    """Pearson correlation of the (mid)ranks of two rankings.

    Runs in exact integer arithmetic up to one final division, so rankings
    without ties give exactly the correctly rounded classical value.
    """
    if len(rank_x) != len(rank_y):
        raise InvalidArgumentError("rankings differ in length")
    n = len(rank_x)
    if n < 2:
        raise InvalidArgumentError("need at least two ranked items")
    x = _midranks(rank_x)
    y = _midranks(rank_y)
    sx, sy = sum(x), sum(y)
    sxy = n * sum(a * b for a, b in zip(x, y)) - sx * sy
    sxx = n * sum(a * a for a in x) - sx * sx
    syy = n * sum(b * b for b in y) - sy * sy
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelationError("a ranking with no variation has no correlation")
    prod = sxx * syy
    root = math.isqrt(prod)
    if root * root == prod:
        return sxy / root
    return sxy / math.sqrt(prod)


def _staged(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except CloudGDMError as err:
        raise type(err)(f"[{stage}] {err}") from err


def run_pipeline(survey: SurveyData, options: PipelineOptions | None = None, *, weights: WeightSolution | None = None) -> PipelineReport:
    """Aggregate, weight, and rank.

    Pass ``weights`` to reuse a weight solution (as the sensitivity runs do)
    instead of re-solving the LP.
    """
    options = options or PipelineOptions()
    matrix = _staged("aggregation", build_decision_matrix, survey)
    if weights is None:
        if matrix.shape[1] == 1:
            weights = WeightSolution((1.0,), 0.0, options.policy)
        else:
            weights = _staged("weights", derive_weights, matrix.he, options.policy)
    if any(w == 0 for w in weights.weights):
        warnings.warn(
            "some criteria received zero weight and drop out of the ranking",
            RuntimeWarning,
            stacklevel=2,
        )
    weighted = _staged("weighting", weight_matrix, matrix, weights.weights, allow_zero=True)
    ideals = _staged("ideal solutions", ideal_solutions, weighted, survey.criteria)
    d_plus, d_minus = _staged("distances", distances_to_ideals, weighted, ideals, options.measure)
    rs = _staged("ranking", ranking_scores, d_plus, d_minus)
    ranking = RankingResult(d_plus, d_minus, rs, rank(rs))
    return PipelineReport(survey, options, matrix, weights, weighted, ideals, ranking)


def cell_centroid(intervals: Sequence[Interval]) -> float:
    """IAA centroid of one cell; a panel of point ratings falls back to their mean."""
    try:
        return iaa_centroid(iaa_membership(intervals))
    except UndefinedCentroidError:
        return math.fsum((iv.lower + iv.upper) / 2.0 for iv in intervals) / len(intervals)


def iaa_scores(survey: SurveyData, weights: Sequence[float]) -> tuple[float, ...]:
    m = len(survey.criteria)
    if len(weights) != m:
        raise InvalidArgumentError(f"expected {m} weights, got {len(weights)}")
    scores = []
    for a in survey.alternatives:
        terms = []
        for j, crit in enumerate(survey.criteria):
            centroid = cell_centroid(survey.cell_ratings(a, crit.id))
            sign = -1.0 if crit.direction is Direction.COST else 1.0
            terms.append(weights[j] * sign * centroid)
        scores.append(math.fsum(terms))
    return tuple(scores)


def rank_iaa_baseline(survey: SurveyData, weights: Sequence[float]) -> tuple[int, ...]:
    """Rank by the weighted sum of IAA centroids (cost criteria negated)."""
    return rank(iaa_scores(survey, weights))


@dataclass(frozen=True)
class SensitivityResult:
    labels: tuple[str, ...]
    rankings: tuple[tuple[int, ...], ...]
    correlations: tuple[tuple[float, ...], ...]


def sensitivity(
    survey: SurveyData,
    measures: Sequence[DistanceMeasure | str] = tuple(DistanceMeasure),
    policy: ReferencePolicy | None = None,
    *,
    include_iaa_baseline: bool = False,
) -> SensitivityResult:
    """Rankings under several distance measures and their pairwise Spearman matrix.

    Weights are derived once and shared. With ``include_iaa_baseline`` the
    IAA-centroid ranking is appended as one more row.
    """
    policy = policy or ReferencePolicy()
    measures = [parse_measure(m) for m in measures]
    if not measures:
        raise InvalidArgumentError("need at least one distance measure")
    first = run_pipeline(survey, PipelineOptions(policy, measures[0]))
    labels = [measures[0].value]
    rankings = [first.ranking.ranks]
    for measure in measures[1:]:
        report = run_pipeline(survey, PipelineOptions(policy, measure), weights=first.weights)
        labels.append(measure.value)
        rankings.append(report.ranking.ranks)
    if include_iaa_baseline:
        labels.append("iaa_centroid")
        rankings.append(rank_iaa_baseline(survey, first.weights.weights))
    k = len(rankings)
    corr = [[1.0] * k for _ in range(k)]
    if len(survey.alternatives) >= 2:
        for i in range(k):
            for j in range(i + 1, k):
                corr[i][j] = corr[j][i] = spearman(rankings[i], rankings[j])
    return SensitivityResult(tuple(labels), tuple(rankings), tuple(tuple(r) for r in corr))
