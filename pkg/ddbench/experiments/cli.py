# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import argparse
import logging
import os
from collections import Counter
from typing import List, Optional

import pandas as pd

from .. import get_version_string
from .config import ConfigError, load_config, NUM_WORKERS_ENV, with_output_dir
from .report import EmptyResultError, load_runs, report
from .sweep import run_sweep

logger = logging.getLogger(__name__)

LOG_LEVEL_ENV = "DDBENCH_LOG_LEVEL"

EXIT_OK = 0
EXIT_CELL_FAILED = 1
EXIT_BAD_INPUT = 2

INSPECT_COLUMNS = [
    "device",
    "n_qubits",
    "style",
    "preset",
    "instance",
    "sequence",
    "engine",
    "tau_dt",
    "fq",
    "r",
    "sp",
]


def create_argparser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddbench",
        description="Dynamical-decoupling benchmark sweeps for QAOA on simulated chain devices",
    )
    parser.add_argument(
        "--log-level",
        default=os.environ.get(LOG_LEVEL_ENV, "INFO"),
        help=f"Logging level (default from {LOG_LEVEL_ENV}, else INFO)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run a sweep from a JSON config")
    run.add_argument("config", help="Path to the experiment config")
    run.add_argument("--output-dir", default=None, help="Overrides the config's output_dir")
    run.add_argument(
        "--workers",
        type=int,
        default=None,
        help=f"Worker processes (overrides the config and {NUM_WORKERS_ENV})",
    )
    run.add_argument("--quiet", action="store_true", help="Skip the progress bar and per-cell lines")

    rep = sub.add_parser("report", help="Rebuild the analysis tables of a result directory")
    rep.add_argument("result_dir")

    insp = sub.add_parser("inspect", help="Print the runs of a runs.jsonl file")
    insp.add_argument("runs")
    return parser


def _run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.output_dir is not None:
        config = with_output_dir(config, args.output_dir)
    if args.workers is not None:
        os.environ[NUM_WORKERS_ENV] = str(args.workers)
    outcome = run_sweep(config, quiet=args.quiet)
    logger.info(
        "%d runs over %d cells in %s, %d failed",
        outcome.num_runs,
        outcome.num_cells,
        outcome.output_dir,
        len(outcome.failed),
    )
    return EXIT_OK if outcome.ok else EXIT_CELL_FAILED


def _report(args: argparse.Namespace) -> int:
    tables = report(args.result_dir)
    with pd.option_context("display.width", 200, "display.max_columns", None):
        print(tables.summary.to_string(index=False))
    return EXIT_OK


def _inspect(args: argparse.Namespace) -> int:
    runs = load_runs(args.runs)
    rows = [{**run, **run["result"]} for run in runs]
    frame = pd.DataFrame(rows, columns=INSPECT_COLUMNS)
    with pd.option_context("display.width", 200, "display.max_rows", None):
        print(frame.to_string(index=False))

    features = {
        "runs": str(len(runs)),
        "ddbench.version": get_version_string(),
    }
    for key in ("config_sha256", "version"):
        seen = Counter(run["provenance"][key] for run in runs)
        for value, count in sorted(seen.items()):
            features[f"provenance.{key}.{value[:16]}"] = f"{count} runs"
    print("")
    for name, status in features.items():
        print("{:<50} {}".format(f"{name}:", status))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = create_argparser().parse_args(argv)
    logging.basicConfig(
        level=str(args.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    handlers = {"run": _run, "report": _report, "inspect": _inspect}
    try:
        return handlers[args.command](args)
    except (ConfigError, EmptyResultError) as e:
        logger.error("%s", e)
        return EXIT_BAD_INPUT
