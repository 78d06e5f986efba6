from __future__ import annotations

import csv
import json

import pytest

from cloudgdm import io as fio
from cloudgdm.cli import main
from cloudgdm.cloud import Interval
from cloudgdm.errors import ParseError, ValidationError
from cloudgdm.pipeline import CriterionSpec, Direction

HEADER = "expert_id,alternative_id,criterion_id,lower,upper\n"
EXAMPLE = HEADER + "e1,a1,c1,3,4\ne2,a1,c1,1,6\ne3,a1,c1,2,5\n"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def big_survey_text(n_exp=3, n_alt=14, n_crit=7):
    import numpy as np

    rng = np.random.default_rng(12)
    lines = [HEADER.strip()]
    for e in range(n_exp):
        for a in range(n_alt):
            for c in range(n_crit):
                lo, hi = sorted(rng.integers(0, 101, 2).tolist())
                lines.append(f"e{e},A{a + 1},C{c + 1},{lo},{hi}")
    return "\n".join(lines) + "\n"


def test_parse_example():
    s = fio.parse_ratings_text(EXAMPLE)
    assert s.experts == ("e1", "e2", "e3")
    assert s.cell_ratings("a1", "c1") == [Interval(3, 4), Interval(1, 6), Interval(2, 5)]


@pytest.mark.parametrize(
    "body, exc, line",
    [
        ("e1,a1,c1,3\n", ParseError, 2),
        ("e1,a1,c1,x,4\n", ParseError, 2),
        ("e1,a1,c1,1,2\ne1,,c1,1,2\n", ParseError, 3),
    ],
)
def test_parse_errors_carry_line(body, exc, line):
    with pytest.raises(exc) as info:
        fio.parse_ratings_text(HEADER + body)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


@pytest.mark.parametrize(
    "body, needle",
    [
        ("e1,a1,c1,5,4\n", "inverted"),
        ("e1,a1,c1,5,140\n", "outside rating scale"),
        ("e1,a1,c1,1,2\ne1,a1,c1,1,3\n", "duplicate"),
    ],
)
def test_validation_errors(body, needle):
    with pytest.raises(ValidationError, match=needle):
        fio.parse_ratings_text(HEADER + body)


def test_header_and_empty():
    with pytest.raises(ParseError):
        fio.parse_ratings_text("")
    with pytest.raises(ParseError):
        fio.parse_ratings_text("a,b,c,d,e\n")
    with pytest.raises(ParseError):
        fio.parse_ratings_text(HEADER)


def test_unknown_criterion_with_config():
    with pytest.raises(ValidationError, match="not in the config"):
        fio.parse_ratings_text(EXAMPLE, [CriterionSpec("c9")])


def test_round_trip(tmp_path):
    s = fio.parse_ratings_text(big_survey_text(2, 3, 2) + "e9,A1,C1,0.1,0.30000000000000004\n")
    out = tmp_path / "r.csv"
    fio.write_ratings(s, out)
    assert fio.parse_ratings(out) == s


def test_config_parsing(tmp_path):
    cfg = fio.config_from_dict(
        {
            "criteria": [{"id": "c1", "direction": "cost"}],
            "rating_scale": [0, 10],
            "reference_policy": {"fixed": "c1"},
            "distance_measure": "hamming",
            "seed": 4,
        }
    )
    assert cfg.criteria[0].direction is Direction.COST
    assert cfg.policy_label == "fixed(c1)"
    with pytest.raises(ValidationError, match="unknown key"):
        fio.config_from_dict({"colour": 1})
    with pytest.raises(ValidationError):
        fio.config_from_dict({"reference_policy": "some"})
    bad = write(tmp_path, "bad.json", "{ nope")
    with pytest.raises(ParseError):
        fio.load_config(bad)


def test_sig6():
    assert fio.sig6(0.27216552697590868) == 0.272166
    assert fio.sig6(0.0) == 0.0


def test_cli_aggregate_example(tmp_path, capsys):
    src = write(tmp_path, "r.csv", EXAMPLE)
    out = tmp_path / "clouds.json"
    assert main(["aggregate", "--input", str(src), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    cell = doc["clouds"][0]
    assert (cell["ex"], cell["en"], cell["he"]) == (3.5, 0.5, 0.272166)


def test_cli_aggregate_plot_data(tmp_path):
    src = write(tmp_path, "r.csv", HEADER + "e1,a1,c1,0,2\ne2,a1,c1,1,3\n")
    out = tmp_path / "clouds.json"
    plots = tmp_path / "plots"
    assert main(["aggregate", "--input", str(src), "--out", str(out), "--plot-dir", str(plots)]) == 0
    with open(plots / "drops__a1__c1.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "y"] and len(rows) == 5001
    with open(plots / "membership__a1__c1.csv") as fh:
        rows = list(csv.reader(fh))
    assert [float(r[2]) for r in rows[1:]] == [0.5, 1.0, 0.5]


def test_cli_rank_report(tmp_path):
    src = write(tmp_path, "r.csv", big_survey_text())
    cfg = write(tmp_path, "c.json", json.dumps({"criteria": [{"id": f"C{k}", "direction": "cost" if k == 2 else "benefit"} for k in range(1, 8)]}))
    out = tmp_path / "report.json"
    assert main(["rank", "--input", str(src), "--config", str(cfg), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert list(doc) == [
        "alternatives",
        "criteria",
        "clouds",
        "weights",
        "weighted_clouds",
        "ideals",
        "distance_measure",
        "distances",
        "ranking_scores",
        "ranks",
    ]
    assert sorted(doc["ranks"]) == list(range(1, 15))
    assert len(doc["weights"]["values"]) == 7
    assert sum(w["weight"] for w in doc["weights"]["values"]) == pytest.approx(1.0, abs=1e-5)
    first = out.read_bytes()
    assert main(["rank", "--input", str(src), "--config", str(cfg), "--out", str(out)]) == 0
    assert out.read_bytes() == first


def test_cli_sensitivity(tmp_path):
    src = write(tmp_path, "r.csv", big_survey_text(3, 6, 3))
    out = tmp_path / "sens.json"
    assert main(["sensitivity", "--input", str(src), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["rankings"]) == 3
    m = doc["spearman"]["matrix"]
    assert len(m) == 3 and all(len(r) == 3 for r in m)
    assert main(["sensitivity", "--input", str(src), "--out", str(out), "--baseline"]) == 0
    assert "iaa_centroid" in json.loads(out.read_text())["rankings"]


def test_cli_experiment_and_compare(tmp_path):
    out = tmp_path / "exp"
    args = ["--d-max", "4", "--problems", "3", "--samples", "10", "--seed", "42"]
    assert main(["experiment", *args, "--methods", "cloud,type1", "--out-dir", str(out)]) == 0
    with open(out / "records.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["d", "p", "method", "pool_mean", "pool_q1", "pool_q2", "pool_q3", "m_mean", "m_q1", "m_q2", "m_q3", "s_or"]
    assert len(rows) - 1 == 3 * 3 * 2
    with open(out / "plot_summary.csv") as fh:
        rows = list(csv.reader(fh))
    assert sum(r[1] == "cloud" for r in rows[1:]) == 3
    comp = tmp_path / "comp.csv"
    assert main(["compare-methods", *args, "--out", str(comp), "--summary", str(tmp_path / "s.csv")]) == 0
    with open(comp) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["d", "cloud", "backward_cg", "type1", "iaa"] and len(rows) == 4


def test_cli_exit_codes(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["rank", "--input", "x.csv", "--out", "y.json", "--bogus"])
    assert info.value.code == 2
    bad = write(tmp_path, "bad.csv", HEADER + "e1,a1,c1,5,4\n")
    assert main(["rank", "--input", str(bad), "--out", str(tmp_path / "o.json")]) == 1
    assert "inverted" in capsys.readouterr().err
    assert main(["rank", "--input", str(tmp_path / "missing.csv"), "--out", str(tmp_path / "o.json")]) == 1
