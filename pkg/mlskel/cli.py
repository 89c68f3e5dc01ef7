"""Command-line front end.

    mlskel skeletonize INPUT [-o OUT] [--report REPORT.json] [run flags]
    mlskel compare CANDIDATE REFERENCE INPUT [--json OUT.json] [--csv OUT.csv]
    mlskel bench CORPUS_DIR [--sweep alpha|dyncon|refine] [--csv OUT.csv] [run flags]
    mlskel coarsen INPUT OUT_DIR [run flags]
    mlskel serve [--host HOST] [--port PORT]

Exit codes: 0 success, 2 user error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from mlskel import __version__, configure_logging
from mlskel.domain.exceptions import SkeletonError
from mlskel.schemas.run_schema import RunConfig, build_bench_sweep, build_run_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USER_ERROR = 2
EXIT_INTERNAL = 3


def _run_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("run configuration")
    group.add_argument("--alpha", type=int, help="Separator size budget and coarsening target (default 64)")
    group.add_argument("--seed", type=int, help="Random seed (default 0)")
    group.add_argument("--threads", type=int, help="Search worker threads (default 1)")
    group.add_argument("--batch-size", type=int, help="Start vertices merged per sampling tick (default 8)")
    group.add_argument("--refine", choices=["lem", "lemts"], help="Refinement after projection (default lem)")
    group.add_argument("--baseline", action="store_true", default=None,
                       help="Single level with unrestricted searches")
    group.add_argument("--dyncon-threshold", type=int, help="Connectivity level threshold (default n)")
    group.add_argument("--voxel-connectivity", type=int, choices=[6, 26], help="Voxel adjacency (default 26)")
    group.add_argument("--out-format", choices=["ply", "obj"], help="Skeleton file format (default ply)")
    group.add_argument("--max-rounds", type=int, help="Matching rounds per coarsening level (default 10)")
    return parent


def _config_from(args: argparse.Namespace) -> RunConfig:
    return build_run_config(
        alpha=args.alpha,
        seed=args.seed,
        threads=args.threads,
        batch_size=args.batch_size,
        refine_mode=args.refine,
        baseline=args.baseline,
        dyncon_threshold=args.dyncon_threshold,
        voxel_connectivity=args.voxel_connectivity,
        out_format=args.out_format,
        max_rounds=args.max_rounds,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlskel",
        description="Curve skeletons of embedded graphs via multilevel local separators.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ... (default MLSKEL_LOG_LEVEL or INFO)")
    sub = parser.add_subparsers(dest="command", required=True)
    run_flags = _run_flags()

    p = sub.add_parser("skeletonize", parents=[run_flags], help="Compute a skeleton")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, help="Skeleton file (default INPUT.skel.<format>)")
    p.add_argument("--report", type=Path, help="Write the JSON run report here")
    p.set_defaults(handler=_cmd_skeletonize)

    p = sub.add_parser("compare", help="Compare a skeleton against a reference")
    p.add_argument("candidate", type=Path)
    p.add_argument("reference", type=Path)
    p.add_argument("input", type=Path, help="Input the skeletons were computed from (normalizer)")
    p.add_argument("--json", type=Path, help="Write the metrics row as JSON")
    p.add_argument("--csv", type=Path, help="Write the metrics row as CSV")
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("bench", parents=[run_flags], help="Run a parameter sweep over a corpus")
    p.add_argument("corpus", type=Path)
    p.add_argument("--sweep", choices=["alpha", "dyncon", "refine"], default="alpha")
    p.add_argument("--alphas", type=int, nargs="+")
    p.add_argument("--thresholds", type=int, nargs="+")
    p.add_argument("--subdivisions", type=int, help="Extra subdivision levels per mesh input")
    p.add_argument("--repeats", type=int, help="Runs per row; the median is reported (default 3)")
    p.add_argument("--csv", type=Path, help="Write the table here instead of stdout")
    p.set_defaults(handler=_cmd_bench)

    p = sub.add_parser("coarsen", parents=[run_flags], help="Dump every coarsening level as a graph file")
    p.add_argument("input", type=Path)
    p.add_argument("out_dir", type=Path)
    p.set_defaults(handler=_cmd_coarsen)

    p = sub.add_parser("serve", help="Run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=5000)
    p.add_argument("--env", default=None, help="development, testing or production")
    p.set_defaults(handler=_cmd_serve)
    return parser


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------
def _cmd_skeletonize(args: argparse.Namespace) -> int:
    from mlskel.services.skeleton_service import SkeletonService

    config = _config_from(args)
    report = SkeletonService().cmd_skeletonize(args.input, config, args.output, args.report)
    print(
        f"nodes={report.metrics.vertices} leafs={report.metrics.leafs} "
        f"branches={report.metrics.branches} genus={report.metrics.genus_estimate} "
        f"levels={report.num_levels} total={report.timings.total:.3f}s"
    )
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    from mlskel.services.compare_service import CompareService, rows_to_csv

    row = CompareService().cmd_compare(args.candidate, args.reference, args.input)
    text = rows_to_csv([row])
    if args.csv:
        args.csv.write_text(text, encoding="utf-8")
    if args.json:
        args.json.write_text(json.dumps(row.model_dump(), indent=2) + "\n", encoding="utf-8")
    if not args.csv and not args.json:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    from mlskel.services.bench_service import BenchService, rows_to_csv

    sweep = build_bench_sweep(
        kind=args.sweep,
        alphas=args.alphas,
        thresholds=args.thresholds,
        subdivisions=args.subdivisions,
        repeats=args.repeats,
    )
    rows = BenchService().cmd_bench(args.corpus, sweep, _config_from(args), args.csv)
    if not args.csv:
        sys.stdout.write(rows_to_csv(rows))
    return EXIT_OK


def _cmd_coarsen(args: argparse.Namespace) -> int:
    from mlskel.services.skeleton_service import SkeletonService

    paths = SkeletonService().cmd_coarsen(args.input, args.out_dir, _config_from(args))
    for path in paths:
        print(path)
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from mlskel.api import create_app

    app = create_app(args.env)
    app.run(host=args.host, port=args.port)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except SkeletonError as e:
        logger.error("%s: %s", e.error_code, e.message)
        return e.exit_code
    except Exception:
        logger.exception("Unexpected failure")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
