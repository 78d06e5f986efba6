"""Group decision-making with interval ratings aggregated into normal cloud models."""

from .aggregation import (
    StepFunction,
    aggregate_clouds,
    aggregate_type1,
    iaa_centroid,
    iaa_membership,
    interval_to_gaussian,
    overlap_similarity,
)
from .cloud import (
    CloudDrop,
    DistanceMeasure,
    GaussianRating,
    Interval,
    NormalCloud,
    Ordering,
    backward_generate,
    certainty_degree,
    compare,
    distance,
    generate_drops,
    scale,
    to_interval,
)
from .errors import CloudGDMError
from .kernels import BACKEND
from .pipeline import (
    CriterionSpec,
    DecisionMatrix,
    Direction,
    PipelineOptions,
    SurveyData,
    rank,
    rank_iaa_baseline,
    run_pipeline,
    spearman,
)
from .weights import ReferencePolicy, WeightSolution, derive_weights

__all__ = [
    "BACKEND",
    "CloudDrop",
    "CloudGDMError",
    "CriterionSpec",
    "DecisionMatrix",
    "Direction",
    "DistanceMeasure",
    "GaussianRating",
    "Interval",
    "NormalCloud",
    "Ordering",
    "PipelineOptions",
    "ReferencePolicy",
    "StepFunction",
    "SurveyData",
    "WeightSolution",
    "aggregate_clouds",
    "aggregate_type1",
    "backward_generate",
    "certainty_degree",
    "compare",
    "derive_weights",
    "distance",
    "generate_drops",
    "iaa_centroid",
    "iaa_membership",
    "interval_to_gaussian",
    "overlap_similarity",
    "rank",
    "rank_iaa_baseline",
    "run_pipeline",
    "scale",
    "spearman",
    "to_interval",
]
