"""Command-line interface: `csatool compute` and `csatool bench`."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import (
    DEFAULT_WELD_EPSILON_MM,
    generate_and_save,
    run_benchmark,
    run_benchmark_from_dir,
)
from .errors import CsaError
from .mesh import TriMesh, weld_vertices
from .meshio import export_ply_colored, load_stl
from .pipeline import CsaResult, PipelineConfig, compute_csa
from .threshold import DEFAULT_CAP_MM

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_CONTACT = 2


def _load_mesh(path: str, unit_scale: float, weld_epsilon: float) -> TriMesh:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"mesh file not found: {path}")
    mesh = load_stl(p, unit_scale=unit_scale)
    welded, _ = weld_vertices(mesh, weld_epsilon)
    return welded


def _result_as_csv(report: dict) -> str:
    scalar_keys = [
        "csa_area_mm2", "tumor_total_area_mm2", "tumor_volume_mm3",
        "threshold_mm", "split_index", "face_count_tumor", "face_count_organ",
        "refinement_applied", "insufficient_contact", "unit_scale",
    ]
    lines = [",".join(scalar_keys)]
    lines.append(",".join("" if report[k] is None else str(report[k]) for k in scalar_keys))
    return "\n".join(lines) + "\n"


def cmd_compute(args: argparse.Namespace) -> int:
    try:
        organ = _load_mesh(args.organ, args.unit_scale, args.weld_epsilon)
        tumor = _load_mesh(args.tumor, args.unit_scale, args.weld_epsilon)
    except (OSError, CsaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR

    config = PipelineConfig(
        cap_mm=args.cap_mm,
        threshold_override_mm=args.threshold_override,
        refine=not args.no_refine,
        unit_scale=args.unit_scale,
    )
    result = compute_csa(organ, tumor, config)
    report = result.to_json_dict()
    payload = (
        json.dumps(report, indent=2) + "\n"
        if args.format == "json"
        else _result_as_csv(report)
    )
    if args.out:
        Path(args.out).write_text(payload)
    else:
        sys.stdout.write(payload)

    if args.vis:
        vis_dir = Path(args.vis)
        vis_dir.mkdir(parents=True, exist_ok=True)
        smaller = organ if result.small_is_first else tumor
        larger = tumor if result.small_is_first else organ
        export_ply_colored(smaller, result.csa_face_ids, vis_dir / "tumor_csa.ply")
        export_ply_colored(larger, set(), vis_dir / "organ.ply")

    if result.insufficient_contact or not result.csa_face_ids:
        return EXIT_NO_CONTACT
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    config = PipelineConfig(cap_mm=args.cap_mm)
    if args.generate:
        pairs = generate_and_save(args.seed, out_dir / "suite", subdiv=args.subdiv)
        report = run_benchmark(pairs, config)
    elif args.suite:
        suite_dir = Path(args.suite)
        if not (suite_dir / "manifest.json").is_file():
            print(f"error: no manifest.json in {args.suite}", file=sys.stderr)
            return EXIT_ERROR
        report = run_benchmark_from_dir(suite_dir, config)
    else:
        print("error: pass --generate or --suite DIR", file=sys.stderr)
        return EXIT_ERROR

    report.write_csv(out_dir / "report.csv")
    report.write_json(out_dir / "report.json")
    rows_ok = sum(1 for r in report.rows if r.computed is not None)
    agg = report.aggregates()
    print(f"{rows_ok}/{len(report.rows)} pairs computed; median error "
          f"{agg['median']:+.3f}%" if agg["median"] is not None else "no pairs computed")
    if rows_ok == 0:
        return EXIT_ERROR
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csatool",
                                     description="Contact surface area between two watertight meshes")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compute", help="compute the CSA for an organ/tumor STL pair")
    pc.add_argument("organ")
    pc.add_argument("tumor")
    pc.add_argument("--out", help="write the report here instead of stdout")
    pc.add_argument("--vis", metavar="DIR", help="write colored PLY meshes here")
    pc.add_argument("--unit-scale", type=float, default=1.0, help="mm per model unit")
    pc.add_argument("--cap-mm", type=float, default=DEFAULT_CAP_MM)
    pc.add_argument("--weld-epsilon", type=float, default=DEFAULT_WELD_EPSILON_MM)
    pc.add_argument("--threshold-override", type=float, default=None)
    pc.add_argument("--no-refine", action="store_true")
    pc.add_argument("--format", choices=("json", "csv"), default="json")
    pc.set_defaults(func=cmd_compute)

    pb = sub.add_parser("bench", help="run the synthetic benchmark")
    pb.add_argument("--generate", action="store_true", help="generate a fresh suite")
    pb.add_argument("--seed", type=int, default=7)
    pb.add_argument("--suite", metavar="DIR", help="run a previously generated suite")
    pb.add_argument("--subdiv", type=int, default=4)
    pb.add_argument("--cap-mm", type=float, default=DEFAULT_CAP_MM)
    pb.add_argument("--out", metavar="DIR", default="bench_out")
    pb.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
