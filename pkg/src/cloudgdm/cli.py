"""Command-line entry point: ``cloudgdm <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import io as fio
from .aggregation import iaa_membership
from .cloud import Interval, generate_drops, make_rng, parse_measure
from .errors import CloudGDMError
from .experiments import METHODS, ExperimentConfig, run_experiment, summarize
from .pipeline import PipelineOptions, build_decision_matrix, run_pipeline, sensitivity


def _load_survey(args):
    config = fio.load_config(args.config)
    criteria = config.criteria or None
    survey = fio.parse_ratings(args.input, criteria, config.rating_scale)
    return config, survey


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in name)


def cmd_aggregate(args) -> int:
    config, survey = _load_survey(args)
    matrix = build_decision_matrix(survey)
    doc = {"alternatives": list(survey.alternatives), "criteria": list(survey.criterion_ids), "clouds": fio.clouds_json(survey, matrix)}
    fio.write_json(doc, args.out)
    if args.plot_dir:
        out = Path(args.plot_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, a in enumerate(survey.alternatives):
            for j, c in enumerate(survey.criterion_ids):
                stem = f"{_safe(a)}__{_safe(c)}"
                drops = generate_drops(matrix.cells[i][j], config.drops, rng=make_rng(config.seed, i, j))
                fio.emit_plot_data("drops", drops, out / f"drops__{stem}.csv")
                fio.emit_plot_data("membership", iaa_membership(survey.cell_ratings(a, c)), out / f"membership__{stem}.csv")
    return 0


def _options(config, survey, args) -> PipelineOptions:
    measure = parse_measure(args.measure) if getattr(args, "measure", None) else config.distance_measure
    return PipelineOptions(config.policy_for(survey), measure)


def cmd_rank(args) -> int:
    config, survey = _load_survey(args)
    report = run_pipeline(survey, _options(config, survey, args))
    fio.emit_report(report, args.out, config.policy_label)
    return 0


def cmd_sensitivity(args) -> int:
    config, survey = _load_survey(args)
    measures = [parse_measure(m) for m in args.measures.split(",") if m.strip()]
    res = sensitivity(survey, measures, config.policy_for(survey), include_iaa_baseline=args.baseline)
    doc = {
        "alternatives": list(survey.alternatives),
        "policy": config.policy_label,
        "rankings": {label: list(r) for label, r in zip(res.labels, res.rankings)},
        "spearman": {
            "labels": list(res.labels),
            "matrix": [[fio.sig6(v) for v in row] for row in res.correlations],
        },
    }
    fio.write_json(doc, args.out)
    return 0


def _experiment_config(args) -> ExperimentConfig:
    lo, hi = (float(v) for v in args.domain.split(","))
    return ExperimentConfig(args.d_max, args.problems, args.samples, args.seed, Interval(lo, hi))


def cmd_experiment(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    records = run_experiment(_experiment_config(args), methods, workers=args.workers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fio.write_records(records, out / "records.csv")
    rows = summarize(records)
    fio.write_summary(rows, out / "summary.csv")
    fio.emit_plot_data("experiment-summary", rows, out / "plot_summary.csv")
    return 0


def cmd_compare_methods(args) -> int:
    records = run_experiment(_experiment_config(args), list(METHODS), workers=args.workers)
    rows = summarize(records)
    fio.write_method_comparison(rows, args.out)
    if args.summary:
        fio.write_summary(rows, args.summary)
    return 0


def _experiment_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d-max", type=int, default=10, help="largest panel size (default 10)")
    p.add_argument("--problems", type=int, default=100)
    p.add_argument("--samples", type=int, default=50, help="random values per interval")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--domain", default="0,100", help="rating domain for random intervals, 'lo,hi'")
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cloudgdm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def survey_cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", required=True, help="ratings CSV")
        p.add_argument("--config", help="run config JSON")
        p.add_argument("--out", required=True)
        return p

    p = survey_cmd("aggregate", "aggregate ratings into a cloud per cell")
    p.add_argument("--plot-dir", help="also write drop and membership CSVs per cell here")
    p.set_defaults(func=cmd_aggregate)

    p = survey_cmd("rank", "full pipeline report")
    p.add_argument("--measure", help="override the config's distance measure")
    p.set_defaults(func=cmd_rank)

    p = survey_cmd("sensitivity", "rankings and Spearman matrix across distance measures")
    p.add_argument("--measures", default="paper,euclidean,hamming")
    p.add_argument("--baseline", action="store_true", help="include the IAA-centroid ranking")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("experiment", help="aggregation validation experiment")
    _experiment_args(p)
    p.add_argument("--methods", default="cloud", help=f"comma list from {','.join(METHODS)}")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("compare-methods", help="mean S_OR per panel size for every method")
    _experiment_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--summary", help="also write the full summary CSV here")
    p.set_defaults(func=cmd_compare_methods)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except CloudGDMError as exc:
        print(f"cloudgdm {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"cloudgdm {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
