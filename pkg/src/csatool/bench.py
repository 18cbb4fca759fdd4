"""Benchmark harness: run the pipeline over a synthetic suite, report errors."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .mesh import weld_vertices
from .meshio import load_stl, serialize_stl
from .pipeline import PipelineConfig, compute_csa
from .synth import SyntheticPair, generate_suite

DEFAULT_WELD_EPSILON_MM = 1e-5


@dataclass(frozen=True)
class PairRow:
    pair_id: int
    ground_truth: float
    computed: float | None
    percent_error: float | None
    error_message: str | None = None


@dataclass(frozen=True)
class BenchReport:
    rows: list[PairRow]

    @property
    def percent_errors(self) -> np.ndarray:
        return np.asarray([r.percent_error for r in self.rows if r.percent_error is not None])

    def aggregates(self) -> dict:
        errs = self.percent_errors
        if len(errs) == 0:
            return {"median": None, "q1": None, "q3": None, "outliers": []}
        q1, med, q3 = (float(v) for v in np.percentile(errs, [25, 50, 75]))
        iqr = q3 - q1
        lo, hi = q1 - 1.5 * iqr, q3 + 1.5 * iqr
        outliers = [
            r.pair_id
            for r in self.rows
            if r.percent_error is not None and not (lo <= r.percent_error <= hi)
        ]
        return {"median": med, "q1": q1, "q3": q3, "outliers": outliers}

    def to_json_dict(self) -> dict:
        return {
            "pairs": [
                {
                    "id": r.pair_id,
                    "truth": r.ground_truth,
                    "computed": r.computed,
                    "percent_error": r.percent_error,
                    "error": r.error_message,
                }
                for r in self.rows
            ],
            "aggregates": self.aggregates(),
        }

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "truth", "computed", "percent_error"])
            for r in self.rows:
                writer.writerow([r.pair_id, r.ground_truth, r.computed, r.percent_error])

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2) + "\n")


def save_suite(pairs: list[SyntheticPair], directory: str | Path) -> Path:
    """Write suite STLs plus the ground-truth manifest."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = []
    for i, pair in enumerate(pairs):
        organ_name = f"organ_{i:02d}.stl"
        tumor_name = f"tumor_{i:02d}.stl"
        (directory / organ_name).write_bytes(serialize_stl(pair.organ))
        (directory / tumor_name).write_bytes(serialize_stl(pair.tumor))
        manifest.append(
            {
                "id": i,
                "organ_stl": organ_name,
                "tumor_stl": tumor_name,
                "ground_truth_csa_mm2": pair.ground_truth_csa,
                "shape": pair.descriptor["shape"],
                "params": pair.descriptor["params"],
            }
        )
    manifest_path = directory / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest_path


def run_benchmark(
    pairs: list[SyntheticPair], config: PipelineConfig | None = None
) -> BenchReport:
    """Evaluate every pair; per-pair failures are recorded, not raised."""
    rows = []
    for i, pair in enumerate(pairs):
        try:
            result = compute_csa(pair.organ, pair.tumor, config)
            err = 100.0 * (result.csa_area - pair.ground_truth_csa) / pair.ground_truth_csa
            rows.append(PairRow(i, pair.ground_truth_csa, result.csa_area, err))
        except Exception as exc:  # pipeline errors must not abort the suite
            rows.append(PairRow(i, pair.ground_truth_csa, None, None, str(exc)))
    return BenchReport(rows)


def run_benchmark_from_dir(
    directory: str | Path, config: PipelineConfig | None = None
) -> BenchReport:
    """Evaluate a previously saved suite from its manifest."""
    directory = Path(directory)
    manifest = json.loads((directory / "manifest.json").read_text())
    rows = []
    for entry in manifest:
        try:
            organ, _ = weld_vertices(load_stl(directory / entry["organ_stl"]), DEFAULT_WELD_EPSILON_MM)
            tumor, _ = weld_vertices(load_stl(directory / entry["tumor_stl"]), DEFAULT_WELD_EPSILON_MM)
            result = compute_csa(organ, tumor, config)
            truth = entry["ground_truth_csa_mm2"]
            err = 100.0 * (result.csa_area - truth) / truth
            rows.append(PairRow(entry["id"], truth, result.csa_area, err))
        except Exception as exc:
            rows.append(PairRow(entry["id"], entry["ground_truth_csa_mm2"], None, None, str(exc)))
    return BenchReport(rows)


def generate_and_save(seed: int, directory: str | Path, subdiv: int = 4) -> list[SyntheticPair]:
    pairs = generate_suite(seed, subdiv=subdiv)
    save_suite(pairs, directory)
    return pairs
