"""Flat-file formats: ratings CSV in, report JSON and plot CSVs out."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .aggregation import StepFunction
from .cloud import CloudDrops, DistanceMeasure, Interval, NormalCloud, parse_measure
from .errors import InvalidArgumentError, ParseError, ValidationError
from .experiments import METHODS, ProblemRecord, SummaryRow
from .pipeline import CriterionSpec, DecisionMatrix, PipelineReport, SurveyData
from .weights import ReferencePolicy

RATINGS_HEADER = ["expert_id", "alternative_id", "criterion_id", "lower", "upper"]


@dataclass(frozen=True)
class RunConfig:
    criteria: tuple[CriterionSpec, ...] = ()
    rating_scale: Interval = field(default_factory=lambda: Interval(0.0, 100.0))
    reference: str | None = None  # criterion id for the fixed-reference policy
    distance_measure: DistanceMeasure = DistanceMeasure.PAPER
    seed: int = 0
    drops: int = 5000

    def __post_init__(self):
        ids = [c.id for c in self.criteria]
        if len(set(ids)) != len(ids):
            raise ValidationError("config: criterion ids must be unique")
        if self.rating_scale.width <= 0:
            raise ValidationError("config: rating_scale needs positive width")
        if self.drops < 1:
            raise ValidationError("config: drops must be positive")

    def policy_for(self, survey: SurveyData) -> ReferencePolicy:
        if self.reference is None:
            return ReferencePolicy.all_pairs()
        ids = survey.criterion_ids
        if self.reference not in ids:
            raise ValidationError(f"config: reference criterion {self.reference!r} is not in the survey")
        return ReferencePolicy.fixed(ids.index(self.reference))

    @property
    def policy_label(self) -> str:
        return "all-pairs" if self.reference is None else f"fixed({self.reference})"


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg})", exc.lineno) from exc
    if not isinstance(raw, dict):
        raise ValidationError(f"{path}: config must be a JSON object")
    return config_from_dict(raw, source=str(path))


def config_from_dict(raw: dict, source: str = "config") -> RunConfig:
    known = {"criteria", "rating_scale", "reference_policy", "distance_measure", "seed", "drops"}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ValidationError(f"{source}: unknown key(s) {unknown}")
    try:
        criteria = tuple(
            CriterionSpec(str(c["id"]), str(c.get("label", "")), c.get("direction", "benefit"))
            for c in raw.get("criteria", [])
        )
        scale = raw.get("rating_scale", [0, 100])
        rating_scale = Interval(float(scale[0]), float(scale[1]))
        policy = raw.get("reference_policy", "all-pairs")
        if policy == "all-pairs":
            reference = None
        elif isinstance(policy, dict) and set(policy) == {"fixed"}:
            reference = str(policy["fixed"])
        else:
            raise ValidationError(f"{source}: reference_policy must be \"all-pairs\" or {{\"fixed\": <criterion id>}}")
        return RunConfig(
            criteria=criteria,
            rating_scale=rating_scale,
            reference=reference,
            distance_measure=parse_measure(raw.get("distance_measure", "paper")),
            seed=int(raw.get("seed", 0)),
            drops=int(raw.get("drops", 5000)),
        )
    except (KeyError, TypeError, IndexError, InvalidArgumentError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"{source}: {exc}") from exc


def parse_ratings(
    path: str | Path,
    criteria: Sequence[CriterionSpec] | None = None,
    rating_scale: Interval = Interval(0.0, 100.0),
) -> SurveyData:
    """Read a ratings CSV with header ``expert_id,alternative_id,criterion_id,lower,upper``.

    When ``criteria`` is given it fixes criterion order and directions and
    every CSV criterion must appear in it; otherwise criteria are all
    benefit criteria in order of first appearance.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        return parse_ratings_text(fh.read(), criteria, rating_scale, source=str(path))


def parse_ratings_text(
    text: str,
    criteria: Sequence[CriterionSpec] | None = None,
    rating_scale: Interval = Interval(0.0, 100.0),
    source: str = "<ratings>",
) -> SurveyData:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(f"{source}: empty file", 1) from None
    if [h.strip() for h in header] != RATINGS_HEADER:
        raise ParseError(f"{source}: header must be {','.join(RATINGS_HEADER)}", 1)
    known = None if criteria is None else {c.id for c in criteria}
    ratings: dict[tuple[str, str, str], Interval] = {}
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 5:
            raise ParseError(f"{source}: expected 5 fields, got {len(row)}", line)
        e, a, c = (cell.strip() for cell in row[:3])
        if not (e and a and c):
            raise ParseError(f"{source}: empty identifier", line)
        try:
            lo, hi = float(row[3]), float(row[4])
        except ValueError:
            raise ParseError(f"{source}: lower/upper must be numbers, got {row[3]!r}, {row[4]!r}", line) from None
        where = f"{source} line {line} ({e}, {a}, {c})"
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValidationError(f"{where}: non-finite rating")
        if lo > hi:
            raise ValidationError(f"{where}: inverted interval [{lo}, {hi}]")
        if lo < rating_scale.lower or hi > rating_scale.upper:
            raise ValidationError(
                f"{where}: interval [{lo}, {hi}] outside rating scale [{rating_scale.lower}, {rating_scale.upper}]"
            )
        if known is not None and c not in known:
            raise ValidationError(f"{where}: criterion {c!r} is not in the config")
        key = (e, a, c)
        if key in ratings:
            raise ValidationError(f"{where}: duplicate rating")
        ratings[key] = Interval(lo, hi)
    if not ratings:
        raise ParseError(f"{source}: no rating rows", 2)
    return SurveyData.from_ratings(ratings, criteria)


def write_ratings(survey: SurveyData, path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RATINGS_HEADER)
        for (e, a, c), iv in survey.ratings.items():
            w.writerow([e, a, c, repr(iv.lower), repr(iv.upper)])


def sig6(x: float) -> float:
    """Round to 6 significant digits for stable, diff-friendly JSON."""
    if x == 0 or not math.isfinite(x):
        return 0.0 if x == 0 else x
    return float(f"{x:.6g}")


def _cloud_json(cloud: NormalCloud) -> dict:
    return {"ex": sig6(cloud.ex), "en": sig6(cloud.en), "he": sig6(cloud.he)}


def clouds_json(survey: SurveyData, matrix: DecisionMatrix) -> list[dict]:
    out = []
    for i, a in enumerate(survey.alternatives):
        for j, c in enumerate(survey.criterion_ids):
            out.append({"alternative": a, "criterion": c, **_cloud_json(matrix.cells[i][j])})
    return out


def report_json(report: PipelineReport, policy_label: str | None = None) -> dict:
    survey = report.survey
    crit_ids = survey.criterion_ids
    rk = report.ranking
    return {
        "alternatives": list(survey.alternatives),
        "criteria": [{"id": c.id, "label": c.label, "direction": c.direction.value} for c in survey.criteria],
        "clouds": clouds_json(survey, report.matrix),
        "weights": {
            "policy": policy_label or report.weights.policy.describe(),
            "values": [{"criterion": c, "weight": sig6(w)} for c, w in zip(crit_ids, report.weights.weights)],
            "xi": sig6(report.weights.xi),
        },
        "weighted_clouds": clouds_json(survey, report.weighted_matrix),
        "ideals": {
            "positive": [{"criterion": c, **_cloud_json(y)} for c, y in zip(crit_ids, report.ideals.positive)],
            "negative": [{"criterion": c, **_cloud_json(y)} for c, y in zip(crit_ids, report.ideals.negative)],
        },
        "distance_measure": report.options.measure.value,
        "distances": [
            {"alternative": a, "d_plus": sig6(dp), "d_minus": sig6(dm)}
            for a, dp, dm in zip(survey.alternatives, rk.d_plus, rk.d_minus)
        ],
        "ranking_scores": [sig6(v) for v in rk.rs],
        "ranks": list(rk.ranks),
    }


def write_json(doc, path: str | Path) -> None:
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    Path(path).write_text(text)


def emit_report(report: PipelineReport, path: str | Path, policy_label: str | None = None) -> None:
    write_json(report_json(report, policy_label), path)


def _write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _num(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def write_drops(drops: CloudDrops, path: str | Path) -> None:
    _write_csv(path, ["x", "y"], ((_num(x), _num(y)) for x, y in zip(drops.x.tolist(), drops.y.tolist())))


def write_membership(f: StepFunction, path: str | Path) -> None:
    _write_csv(path, ["start", "end", "level"], ((_num(a), _num(b), _num(lv)) for a, b, lv in f.segments()))


def write_records(records: Sequence[ProblemRecord], path: str | Path) -> None:
    header = ["d", "p", "method", "pool_mean", "pool_q1", "pool_q2", "pool_q3", "m_mean", "m_q1", "m_q2", "m_q3", "s_or"]
    rows = []
    for r in records:
        ps = r.pool_stats
        for m in sorted(r.s_or, key=METHODS.get):
            ms = r.method_stats[m]
            rows.append(
                [r.panel_size, r.problem_index, m]
                + [_num(v) for v in (ps.mean, ps.q1, ps.q2, ps.q3, ms.mean, ms.q1, ms.q2, ms.q3, r.s_or[m])]
            )
    _write_csv(path, header, rows)


def write_summary(rows: Sequence[SummaryRow], path: str | Path) -> None:
    header = ["d", "method", "mean_s_or", "sd_s_or"]
    for stat in ("mean", "q1", "q2", "q3"):
        header += [f"t_{stat}", f"p_{stat}"]
    out = []
    for r in rows:
        line = [r.panel_size, r.method, _num(r.mean_s_or), _num(r.sd_s_or)]
        for tt in (r.t_test_mean, r.t_test_q1, r.t_test_q2, r.t_test_q3):
            line += ["", ""] if tt is None else [_num(tt.t), _num(tt.p)]
        out.append(line)
    _write_csv(path, header, out)


def write_method_comparison(rows: Sequence[SummaryRow], path: str | Path) -> None:
    """Wide table: one row per panel size, one mean-S_OR column per method."""
    methods = sorted({r.method for r in rows}, key=METHODS.get)
    table: dict[int, dict[str, float]] = {}
    for r in rows:
        table.setdefault(r.panel_size, {})[r.method] = r.mean_s_or
    _write_csv(
        path,
        ["d"] + methods,
        ([d] + [_num(table[d].get(m)) for m in methods] for d in sorted(table)),
    )


def emit_plot_data(kind: str, source, path: str | Path) -> None:
    """Write plot-ready CSV for ``drops``, ``membership`` or ``experiment-summary``."""
    if kind == "drops":
        write_drops(source, path)
    elif kind == "membership":
        write_membership(source, path)
    elif kind == "experiment-summary":
        _write_csv(
            path,
            ["d", "method", "mean_s_or", "sd_s_or"],
            ([r.panel_size, r.method, _num(r.mean_s_or), _num(r.sd_s_or)] for r in source),
        )
    else:
        raise InvalidArgumentError(f"unknown plot data kind {kind!r}")
