# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import argparse
import csv
import glob
import itertools
import os
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple

import tqdm
from torch.utils import benchmark

CACHE_ENV = "DDBENCH_BENCHMARKS_CACHE"

# (label, sub_label, description) -> mean seconds
MeasurementKey = Tuple[str, str, str]


def product_dict(**kwargs) -> Iterator[Dict[str, Any]]:
    keys = kwargs.keys()
    for instance in itertools.product(*kwargs.values()):
        yield dict(zip(keys, instance))


def pretty_print(results: Dict[str, Dict[str, Any]], title: str, units: str) -> None:
    """Prints a {row: {column: value}} dict as a Markdown table"""
    print(title)
    header = " Units: {:<45}".format(units)
    columns = list(dict.fromkeys(k for row in results.values() for k in row))
    print("| " + header + "|" + "".join("{0:<20}|".format(c) for c in columns))
    print("|-{}|".format("-" * len(header)) + "".join("{}|".format("-" * 20) for _ in columns))
    for name, row in results.items():
        print(
            "| {0:<{offset}}|".format(name, offset=len(header))
            + "".join("{:<20}|".format(row.get(c, "")) for c in columns)
        )
    print("")


def _key(m: benchmark.Measurement) -> MeasurementKey:
    spec = m.task_spec
    return (spec.label, spec.sub_label or "", spec.description or "")


def _results_to_csv(filename: str, results: List[benchmark.Measurement]) -> None:
    with open(filename, "w+", newline="") as csvfile:
        writer = csv.DictWriter(
            csvfile, fieldnames=["label", "sub_label", "description", "num_threads", "runtime_us"]
        )
        writer.writeheader()
        for m in results:
            label, sub_label, description = _key(m)
            writer.writerow(
                {
                    "label": label,
                    "sub_label": sub_label,
                    "description": description,
                    "num_threads": m.task_spec.num_threads,
                    "runtime_us": int(1e6 * m.mean),
                }
            )


def _results_from_csv(filename: str) -> Dict[MeasurementKey, float]:
    with open(filename, "r") as csvfile:
        return {
            (row["label"], row["sub_label"], row["description"]): float(row["runtime_us"]) / 1e6
            for row in csv.DictReader(csvfile)
        }


def _print_comparison(
    results: List[benchmark.Measurement], reference: Dict[MeasurementKey, float], name: str
) -> None:
    table: Dict[str, Dict[str, Any]] = {}
    for m in results:
        key = _key(m)
        if key not in reference:
            continue
        row = f"{key[1]} [{key[2]}]"
        table[row] = {
            "now (ms)": f"{1e3 * m.mean:.2f}",
            f"{name} (ms)": f"{1e3 * reference[key]:.2f}",
            "speedup": f"{reference[key] / m.mean:.2f}x",
        }
    if table:
        pretty_print(table, title=f"--- compared to {name} ---", units="ms")


def create_argparser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser()
    parser.add_argument("--fn", default=None, type=str, help="Only benchmark this function")
    parser.add_argument("--label", default=None, type=str, help="Store results under this name")
    parser.add_argument(
        "--compare",
        default=None,
        type=str,
        help="Compare to previously stored results (comma separated labels)",
    )
    parser.add_argument("--quiet", action="store_true", help="Skip intermediate results and progress bar")
    parser.add_argument("--min-run-time", default=1.0, type=float)
    return parser


def benchmark_run_and_compare(
    benchmark_fn: Callable[..., Iterator[benchmark.Timer]],
    cases: List[Dict[str, Any]],
    compare: List[str],
    quiet: bool = False,
    label: Optional[str] = None,
    min_run_time: float = 1.0,
) -> List[benchmark.Measurement]:
    store_results_folder = os.path.expanduser(
        os.path.join(
            os.environ.get(CACHE_ENV, os.path.join("~", ".cache", "ddbench", "benchmarks")),
            benchmark_fn.__name__,
        )
    )
    os.makedirs(store_results_folder, exist_ok=True)

    results: List[benchmark.Measurement] = []
    pbar = tqdm.tqdm(cases, leave=False, disable=quiet)
    for case in pbar:
        if not quiet:
            pbar.write(f"====== {case} ======")
        for timer in benchmark_fn(**case):
            measurement = timer.blocked_autorange(min_run_time=min_run_time)
            results.append(measurement)
            if not quiet:
                pbar.write(f"{_key(measurement)}: {1e3 * measurement.mean:.2f} ms")
    benchmark.Compare(results).print()

    for name in compare:
        for filename in glob.glob(os.path.join(store_results_folder, f"{name}.csv")):
            _print_comparison(results, _results_from_csv(filename), name)

    if results and label is not None:
        assert "." not in label, f"label=`{label}` should not contain dots"
        path = os.path.join(store_results_folder, f"{label}.csv")
        _results_to_csv(path, results)
        print(f"Saved results to {path}")
    return results


def benchmark_main_helper(
    benchmark_fn: Callable[..., Iterator[benchmark.Timer]],
    cases: List[Dict[str, Any]],
    arg_parser: Optional[argparse.ArgumentParser] = None,
) -> None:
    """Parses the command line, then runs and optionally stores/compares ``cases``."""
    args = (arg_parser or create_argparser()).parse_args()
    if args.fn is not None and args.fn != benchmark_fn.__name__:
        print(f'Skipping benchmark "{benchmark_fn.__name__}"')
        return
    benchmark_run_and_compare(
        benchmark_fn,
        cases,
        compare=args.compare.split(",") if args.compare is not None else [],
        quiet=args.quiet,
        label=args.label,
        min_run_time=args.min_run_time,
    )
