import dataclasses
import json

import pytest

from inducedpath.graph_core import cycle_graph, path_graph
from inducedpath.harness import (COLUMNS, SCHEMA_VERSION, BaselineError, ExperimentConfig, GridPoint, Report,
                                 path_is_induced_by_pairs, read_report, regression_check, run_experiment,
                                 write_baseline)


def small_config(tmp_path=None, **kw):
    out = str(tmp_path / "report.csv") if tmp_path is not None else None
    return ExperimentConfig((GridPoint(2000, 16, 0.25),), seeds=3, base_seed=5, output=out, **kw)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig((), seeds=1)
    with pytest.raises(ValueError):
        ExperimentConfig((GridPoint(100, 4, 0.25),), seeds=0)
    with pytest.raises(ValueError):
        ExperimentConfig((GridPoint(100, 4, 0.25, "other"),))
    cfg = ExperimentConfig.product([100, 200], [4, 8], [0.25])
    assert len(cfg.grid) == 4 and cfg.seed_list() == [0]


def test_rows_and_summary():
    report = run_experiment(small_config())
    assert [r.seed for r in report.rows] == [5, 6, 7]
    assert all(r.certified for r in report.rows)
    assert len(report.summary) == 1
    s = report.summary[0]
    vals = [r.normalized_constant for r in report.rows]
    assert s["min_normalized_constant"] == min(vals) and s["max_normalized_constant"] == max(vals)
    assert s["mean_normalized_constant"] == pytest.approx(sum(vals) / 3)


def test_rerun_is_byte_identical(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    a.mkdir()
    b.mkdir()
    run_experiment(small_config(a))
    run_experiment(small_config(b))
    assert (a / "report.csv").read_bytes() == (b / "report.csv").read_bytes()


def test_csv_schema_and_roundtrip(tmp_path):
    report = run_experiment(small_config(tmp_path))
    text = (tmp_path / "report.csv").read_text()
    header = text.splitlines()[0].split(",")
    assert header == COLUMNS
    assert header[:14] == ["seed", "n", "d", "eps", "L", "m", "N_components", "forest_order", "aux_edge_count",
                           "admissible_edge_length", "final_vertex_length", "normalized_constant", "certified",
                           "runtime_ms"]
    assert header[-1] == "schema_version"
    back = read_report(tmp_path / "report.csv")
    assert [r.final_vertex_length for r in back.rows] == [r.final_vertex_length for r in report.rows]
    for r, s in zip(back.rows, report.rows):
        assert r.normalized_constant == pytest.approx(s.normalized_constant, rel=1e-8)


def test_json_report(tmp_path):
    cfg = dataclasses.replace(small_config(), output=str(tmp_path / "r.json"), fmt="json")
    run_experiment(cfg)
    data = json.loads((tmp_path / "r.json").read_text())
    assert data["schema_version"] == SCHEMA_VERSION and len(data["rows"]) == 3
    assert len(read_report(tmp_path / "r.json").rows) == 3


def test_parallel_matches_serial():
    serial = run_experiment(small_config())
    parallel = run_experiment(small_config(workers=2))
    assert serial.to_csv() == parallel.to_csv()


def test_timing_is_opt_in():
    assert all(r.runtime_ms == 0.0 for r in run_experiment(small_config()).rows)
    assert all(r.runtime_ms > 0 for r in run_experiment(small_config(record_timing=True)).rows)


def test_independent_validator():
    assert path_is_induced_by_pairs(cycle_graph(5), [0, 1, 2, 3])
    assert not path_is_induced_by_pairs(cycle_graph(5), [0, 1, 2, 3, 4])
    assert not path_is_induced_by_pairs(path_graph(3), [0, 2])
    assert not path_is_induced_by_pairs(path_graph(3), [0, 1, 0])
    assert path_is_induced_by_pairs(path_graph(3), [])


# regression checks

@pytest.fixture
def report_and_baseline(tmp_path):
    report = run_experiment(small_config())
    base = tmp_path / "baseline.json"
    write_baseline(report, base)
    return report, base


def test_equal_report_passes(report_and_baseline):
    report, base = report_and_baseline
    res = regression_check(report, base)
    assert res.passed and not res.diffs


def test_uncertified_row_fails(report_and_baseline):
    report, base = report_and_baseline
    rows = list(report.rows)
    rows[1] = dataclasses.replace(rows[1], certified=False)
    res = regression_check(Report(rows), base)
    assert not res.passed
    assert any("uncertified" in d for d in res.diffs)


def test_drift_fails_with_named_point(report_and_baseline):
    report, base = report_and_baseline
    rows = [dataclasses.replace(r, normalized_constant=r.normalized_constant * 1.10) for r in report.rows]
    res = regression_check(Report(rows), base, tolerance=0.05)
    assert not res.passed
    assert len(res.diffs) == 1 and "n=2000 d=16 eps=0.25" in res.diffs[0]
    assert regression_check(Report(rows), base, tolerance=0.15).passed


def test_missing_point_fails(report_and_baseline, tmp_path):
    report, base = report_and_baseline
    data = json.loads(base.read_text())
    data["points"].append(dict(data["points"][0], d=32.0))
    base.write_text(json.dumps(data))
    res = regression_check(report, base)
    assert not res.passed and "missing" in res.diffs[0]


def test_missing_or_corrupt_baseline(report_and_baseline, tmp_path):
    report, _ = report_and_baseline
    with pytest.raises(BaselineError):
        regression_check(report, tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(BaselineError):
        regression_check(report, bad)
    bad.write_text(json.dumps({"schema_version": 99, "points": []}))
    with pytest.raises(BaselineError):
        regression_check(report, bad)
    bad.write_text(json.dumps({"schema_version": SCHEMA_VERSION, "points": [{"n": 1}]}))
    with pytest.raises(BaselineError):
        regression_check(report, bad)
