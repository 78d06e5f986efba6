from __future__ import annotations

import itertools
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cloudgdm.cloud import DistanceMeasure, Interval, NormalCloud
from cloudgdm.errors import IncompleteSurveyError, InvalidArgumentError, UndefinedCorrelationError
from cloudgdm.pipeline import (
    CriterionSpec,
    DecisionMatrix,
    Direction,
    PipelineOptions,
    SurveyData,
    build_decision_matrix,
    cell_centroid,
    column_extremes,
    ideal_solutions,
    rank,
    rank_iaa_baseline,
    ranking_scores,
    run_pipeline,
    sensitivity,
    spearman,
    weight_matrix,
)
from cloudgdm.weights import WeightSolution

from oracles import spearman_classical


def random_survey(rng, n_alt=4, n_crit=3, n_exp=3, directions=None):
    ratings = {}
    for e in range(n_exp):
        for a in range(n_alt):
            for c in range(n_crit):
                lo, hi = np.sort(rng.uniform(0, 100, 2))
                ratings[(f"e{e}", f"a{a}", f"c{c}")] = Interval(float(lo), float(hi))
    directions = directions or ["benefit"] * n_crit
    crits = [CriterionSpec(f"c{c}", direction=d) for c, d in enumerate(directions)]
    return SurveyData.from_ratings(ratings, crits)


def test_direction_parse():
    assert Direction.parse("Lower-the-better") is Direction.COST
    assert Direction.parse("max") is Direction.BENEFIT
    assert Direction.BENEFIT.flipped() is Direction.COST
    with pytest.raises(InvalidArgumentError):
        Direction.parse("sideways")


def test_survey_missing_cell():
    ratings = {("e1", "a1", "c1"): Interval(1, 2), ("e1", "a2", "c2"): Interval(1, 2)}
    with pytest.raises(IncompleteSurveyError) as info:
        SurveyData.from_ratings(ratings)
    assert ("a1", "c2") in info.value.missing


def test_survey_duplicate_ids():
    with pytest.raises(InvalidArgumentError):
        SurveyData(("e",), ("a",), (CriterionSpec("c"), CriterionSpec("c")), {("e", "a", "c"): Interval(0, 1)})


def test_cell_ratings_follow_expert_order():
    ratings = {("e2", "a", "c"): Interval(5, 6), ("e1", "a", "c"): Interval(1, 2)}
    s = SurveyData(("e1", "e2"), ("a",), (CriterionSpec("c"),), ratings)
    assert s.cell_ratings("a", "c") == [Interval(1, 2), Interval(5, 6)]


def test_decision_matrix_example():
    s = SurveyData.from_ratings(
        {("e1", "a", "c"): Interval(3, 4), ("e2", "a", "c"): Interval(1, 6), ("e3", "a", "c"): Interval(2, 5)}
    )
    m = build_decision_matrix(s)
    assert m.shape == (1, 1)
    assert m.cells[0][0].ex == 3.5 and m.cells[0][0].en == 0.5


def test_weight_matrix_scales_columns():
    m = DecisionMatrix(((NormalCloud(2, 4, 1), NormalCloud(1, 1, 1)),), weighted=False)
    w = weight_matrix(m, [0.25, 0.75])
    assert w.cells[0][0] == NormalCloud(0.5, 2.0, 0.5)
    assert w.weighted
    with pytest.raises(InvalidArgumentError):
        weight_matrix(w, [0.5, 0.5])
    with pytest.raises(InvalidArgumentError):
        weight_matrix(m, [0.5, 0.6])
    with pytest.raises(InvalidArgumentError):
        weight_matrix(m, [1.0, 0.0])
    z = weight_matrix(m, [1.0, 0.0], allow_zero=True)
    assert z.cells[0][1] == NormalCloud(0, 0, 0)


def test_column_extremes_single_pass():
    col = [NormalCloud(2, 1, 0), NormalCloud(5, 1, 0), NormalCloud(1, 1, 0), NormalCloud(5, 1, 0)]
    assert column_extremes(col) == (1, 2)


def test_ideals_respect_direction():
    m = DecisionMatrix(((NormalCloud(1, 1, 0),), (NormalCloud(3, 1, 0),)), weighted=True)
    ben = ideal_solutions(m, [CriterionSpec("c")])
    cost = ideal_solutions(m, [CriterionSpec("c", direction="cost")])
    assert ben.positive[0].ex == 3 and ben.negative[0].ex == 1
    assert cost.positive[0].ex == 1 and cost.negative[0].ex == 3


def test_ranking_scores_and_rank():
    assert ranking_scores([0.0, 1.0, 0.0], [1.0, 1.0, 0.0]) == (1.0, 0.5, 0.5)
    assert rank([0.2, 0.9, 0.2]) == (2, 1, 3)
    with pytest.raises(InvalidArgumentError):
        ranking_scores([-1.0], [1.0])


def test_spearman_examples():
    assert spearman([1, 2, 3], [1, 2, 3]) == 1.0
    assert spearman([1, 2, 3], [3, 2, 1]) == -1.0
    # ties: midranks (1.5, 1.5, 3) vs (1, 2, 3)
    assert spearman([1, 1, 2], [1, 2, 3]) == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
    with pytest.raises(UndefinedCorrelationError):
        spearman([1, 1], [1, 2])
    with pytest.raises(InvalidArgumentError):
        spearman([1], [1])


def test_spearman_exact_on_all_small_permutations():
    for n in range(2, 7):
        base = list(range(1, n + 1))
        for perm in itertools.permutations(base):
            assert spearman(base, perm) == float(spearman_classical(base, perm))


def dominated_survey(rng, n_alt, n_crit):
    """Random survey plus an alternative ``top`` that beats every other on every criterion."""
    ratings = {}
    for e in range(3):
        for a in range(n_alt):
            for c in range(n_crit):
                lo, hi = np.sort(rng.uniform(0, 50, 2))
                ratings[(f"e{e}", f"a{a}", f"c{c}")] = Interval(float(lo), float(hi))
            # same interval from every expert, so the cloud has zero spread variance
        for c in range(n_crit):
            ratings[(f"e{e}", "top", f"c{c}")] = Interval(90.0, 100.0)
    return SurveyData.from_ratings(ratings)


def test_dominating_alternative_ranks_first():
    rng = np.random.default_rng(5)
    for _ in range(50):
        s = dominated_survey(rng, int(rng.integers(1, 5)), int(rng.integers(1, 4)))
        r = run_pipeline(s)
        top = s.alternatives.index("top")
        assert r.ranking.ranks[top] == 1
        assert r.ranking.rs[top] == 1.0


def test_flipping_directions_reverses_order():
    rng = np.random.default_rng(6)
    for _ in range(20):
        s = random_survey(rng, n_alt=5, n_crit=3)
        flipped = s.with_criteria([CriterionSpec(c.id, c.label, c.direction.flipped()) for c in s.criteria])
        a, b = run_pipeline(s).ranking, run_pipeline(flipped).ranking
        # ideals swap, so d+ and d- swap and RS becomes 1 - RS
        assert np.allclose(a.rs, 1 - np.array(b.rs), atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.randoms(use_true_random=False))
def test_permutation_equivariant(seed, rnd):
    s = random_survey(np.random.default_rng(seed), n_alt=4, n_crit=2)
    order = list(s.alternatives)
    rnd.shuffle(order)
    t = SurveyData(s.experts, tuple(order), s.criteria, s.ratings)
    a, b = run_pipeline(s).ranking, run_pipeline(t).ranking
    by_a = dict(zip(s.alternatives, a.rs))
    by_b = dict(zip(t.alternatives, b.rs))
    for alt in s.alternatives:
        assert by_a[alt] == pytest.approx(by_b[alt], abs=1e-12)


def test_run_pipeline_report_shape():
    s = random_survey(np.random.default_rng(1), n_alt=4, n_crit=3)
    r = run_pipeline(s, PipelineOptions(measure=DistanceMeasure.EUCLIDEAN))
    assert sorted(r.ranking.ranks) == [1, 2, 3, 4]
    assert sum(r.weights.weights) == pytest.approx(1.0)
    assert r.xi == r.weights.xi
    assert all(0 <= v <= 1 for v in r.ranking.rs)


def test_single_criterion_weight_one():
    s = random_survey(np.random.default_rng(2), n_alt=3, n_crit=1)
    r = run_pipeline(s)
    assert r.weights.weights == (1.0,) and r.xi == 0.0


def test_zero_weight_warns():
    s = random_survey(np.random.default_rng(2), n_alt=3, n_crit=2)
    with pytest.warns(RuntimeWarning):
        run_pipeline(s, weights=WeightSolution((1.0, 0.0), 0.0))


def test_stage_named_error():
    s = random_survey(np.random.default_rng(2), n_alt=3, n_crit=2)
    with pytest.raises(InvalidArgumentError, match=r"^\[weighting\]"):
        run_pipeline(s, weights=WeightSolution((0.5, 0.6), 0.0))


def test_iaa_baseline():
    ratings = {
        ("e1", "a", "c"): Interval(0, 2),
        ("e2", "a", "c"): Interval(1, 3),
        ("e1", "b", "c"): Interval(5, 5),
        ("e2", "b", "c"): Interval(7, 7),
    }
    s = SurveyData.from_ratings(ratings)
    assert cell_centroid(s.cell_ratings("a", "c")) == 1.5
    assert cell_centroid(s.cell_ratings("b", "c")) == 6.0
    assert rank_iaa_baseline(s, [1.0]) == (2, 1)
    cost = s.with_criteria([CriterionSpec("c", direction="cost")])
    assert rank_iaa_baseline(cost, [1.0]) == (1, 2)


def test_sensitivity_matrix():
    s = random_survey(np.random.default_rng(4), n_alt=6, n_crit=3)
    res = sensitivity(s, ["paper", "euclidean", "hamming"], include_iaa_baseline=True)
    assert res.labels == ("paper", "euclidean", "hamming", "iaa_centroid")
    k = len(res.labels)
    corr = np.array(res.correlations)
    assert corr.shape == (k, k)
    assert np.allclose(np.diag(corr), 1.0)
    assert np.allclose(corr, corr.T)
    for i, j in itertools.product(range(k), repeat=2):
        assert corr[i, j] == spearman(res.rankings[i], res.rankings[j])
