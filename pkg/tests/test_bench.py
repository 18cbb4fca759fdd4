import csv
import json

import numpy as np
import pytest

from csatool.bench import (
    BenchReport,
    PairRow,
    run_benchmark,
    run_benchmark_from_dir,
    save_suite,
)
from csatool.synth import generate_sphere_pair, generate_suite


@pytest.fixture(scope="module")
def small_suite():
    return generate_suite(3, subdiv=2)


@pytest.fixture(scope="module")
def small_report(small_suite):
    return run_benchmark(small_suite)


def test_rows_ordered_and_complete(small_suite, small_report):
    assert [r.pair_id for r in small_report.rows] == list(range(len(small_suite)))
    for row, pair in zip(small_report.rows, small_suite):
        assert row.ground_truth == pair.ground_truth_csa


def test_aggregates_recomputable(small_report):
    errs = small_report.percent_errors
    agg = small_report.aggregates()
    assert agg["median"] == float(np.median(errs))
    assert agg["q1"] == float(np.percentile(errs, 25))
    assert agg["q3"] == float(np.percentile(errs, 75))
    iqr = agg["q3"] - agg["q1"]
    for r in small_report.rows:
        if r.percent_error is None:
            continue
        inside = agg["q1"] - 1.5 * iqr <= r.percent_error <= agg["q3"] + 1.5 * iqr
        assert (r.pair_id in agg["outliers"]) == (not inside)


def test_empty_report_aggregates():
    agg = BenchReport([]).aggregates()
    assert agg == {"median": None, "q1": None, "q3": None, "outliers": []}


def test_failure_recorded_not_raised():
    import dataclasses

    pair = generate_sphere_pair(10.0, 5.0, 2)
    far = pair.tumor.transformed(np.eye(3), np.array([500.0, 0.0, 0.0]))
    broken = dataclasses.replace(pair, tumor=far)
    report = run_benchmark([pair, broken])
    assert report.rows[0].computed is not None
    row = report.rows[1]
    assert row.pair_id == 1
    # separated meshes yield either a recorded failure or a zero-area result
    assert row.computed in (None, 0.0)


def test_csv_and_json_output(tmp_path, small_report):
    csv_path = tmp_path / "report.csv"
    json_path = tmp_path / "report.json"
    small_report.write_csv(csv_path)
    small_report.write_json(json_path)

    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["id", "truth", "computed", "percent_error"]
    assert len(rows) == len(small_report.rows) + 1
    assert float(rows[1][1]) == small_report.rows[0].ground_truth

    data = json.loads(json_path.read_text())
    assert len(data["pairs"]) == len(small_report.rows)
    assert data["aggregates"] == small_report.aggregates()


def test_save_and_rerun_round_trip(tmp_path, small_suite, small_report):
    suite_dir = tmp_path / "suite"
    manifest_path = save_suite(small_suite, suite_dir)
    manifest = json.loads(manifest_path.read_text())
    assert len(manifest) == len(small_suite)
    for entry in manifest:
        assert (suite_dir / entry["organ_stl"]).exists()
        assert (suite_dir / entry["tumor_stl"]).exists()

    reloaded = run_benchmark_from_dir(suite_dir)
    for a, b in zip(reloaded.rows, small_report.rows):
        assert a.ground_truth == pytest.approx(b.ground_truth)
        # STL stores float32, so reloaded geometry can flip a few faces
        # near the threshold
        assert a.computed == pytest.approx(b.computed, rel=0.02)
