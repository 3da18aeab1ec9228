# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import json
import logging
import math
import os
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import pandas as pd

from ..metrics import emsr, metrics_record, MetricsRecord, ZeroBaselineError
from ..passes import DDSequence
from ..stats import DegenerateFitError, format_p_value, linear_fit

logger = logging.getLogger(__name__)

RUNS_FILE = "runs.jsonl"
METRICS_FILE = "metrics.csv"
FITS_FILE = "fits.csv"
EMSR_FILE = "emsr.csv"
SUMMARY_FILE = "summary.csv"
FLOAT_FORMAT = "%.10g"

RATIO_METRICS = ("nar_b", "nar_dd", "nsp_b", "nsp_dd", "delta_nar", "delta_nsp")
CIRCUIT_METRICS = ("fq", "log_tau")
POOLED_AXES = ("fq", "log_tau")
FACTORS = ("device", "style", "sequence", "preset")
INVERSE_PAIRS = (("delta_nar", "nar_b"), ("delta_nsp", "nsp_b"))
ALL = "all"

FIT_COLUMNS = [
    "factor",
    "level",
    "metric",
    "axis",
    "mean",
    "slope",
    "intercept",
    "c_r",
    "p_value",
    "p_value_display",
    "strength",
    "n_points",
]


class EmptyResultError(ValueError):
    pass


@dataclass
class ReportTables:
    metrics: pd.DataFrame
    fits: pd.DataFrame
    emsr: pd.DataFrame
    summary: pd.DataFrame


def load_runs(path: Union[str, os.PathLike]) -> List[Dict[str, Any]]:
    path = Path(path)
    if path.is_dir():
        path = path / RUNS_FILE
    if not path.is_file():
        raise EmptyResultError(f"no {RUNS_FILE} at {path}")
    runs = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                runs.append(json.loads(line))
            except json.JSONDecodeError as e:
                raise EmptyResultError(f"{path}:{lineno}: not valid JSON ({e})") from e
    if not runs:
        raise EmptyResultError(f"{path} holds no runs")
    return runs


def _cell_key(run: Dict[str, Any]) -> Tuple:
    return (run["device"], run["n_qubits"], run["style"], run["preset"], run["instance"])


def pair_runs(runs: Iterable[Dict[str, Any]]) -> List[MetricsRecord]:
    """
    Pairs each DD run with the NONE run of the same cell. The DD arm's
    circuit fidelity and duration describe the record.
    """
    cells: Dict[Tuple, Dict[str, Dict[str, Any]]] = defaultdict(dict)
    for run in runs:
        cells[_cell_key(run)][run["sequence"]] = run
    records = []
    for key in sorted(cells):
        arms = cells[key]
        base = arms.get(DDSequence.NONE.value)
        if base is None:
            logger.warning("Cell %s has no NONE baseline, skipped", key)
            continue
        for seq in sorted(arms):
            if seq == DDSequence.NONE.value:
                continue
            run = arms[seq]
            try:
                records.append(
                    metrics_record(
                        r_b=base["result"]["r"],
                        p_b=base["result"]["sp"],
                        r_dd=run["result"]["r"],
                        p_dd=run["result"]["sp"],
                        r0=run["r0"],
                        p0=run["p0"],
                        fq=run["result"]["fq"],
                        tau_dt=run["result"]["tau_dt"],
                        n_qubits=run["n_qubits"],
                        device=run["device"],
                        style=run["style"],
                        sequence=seq,
                        preset=run["preset"],
                        instance=run["instance"],
                    )
                )
            except ZeroBaselineError as e:
                logger.warning("Cell %s %s skipped: %s", key, seq, e)
    return records


def _fit_row(frame: pd.DataFrame, factor: str, level: str, metric: str, axis: str) -> Dict[str, Any]:
    row: Dict[str, Any] = {
        "factor": factor,
        "level": level,
        "metric": metric,
        "axis": axis,
        "mean": float(frame[metric].mean()),
        "n_points": len(frame),
    }
    try:
        fit = linear_fit(frame[axis].tolist(), frame[metric].tolist())
    except DegenerateFitError as e:
        logger.debug("No fit for %s vs %s at %s=%s: %s", metric, axis, factor, level, e)
        row.update(
            slope=math.nan,
            intercept=math.nan,
            c_r=math.nan,
            p_value=math.nan,
            p_value_display=math.nan,
            strength="",
        )
        return row
    row.update(
        slope=fit.slope,
        intercept=fit.intercept,
        c_r=fit.c_r,
        p_value=fit.p_value,
        p_value_display=format_p_value(fit.p_value),
        strength=fit.strength,
    )
    return row


def _levels(frame: pd.DataFrame) -> List[Tuple[str, str, pd.DataFrame]]:
    out = [(ALL, ALL, frame)]
    for factor in FACTORS:
        for level, sub in frame.groupby(factor, sort=True):
            out.append((factor, str(level), sub))
    return out


def fits_table(metrics: pd.DataFrame) -> pd.DataFrame:
    rows = []
    for axis in POOLED_AXES:
        for metric in RATIO_METRICS:
            rows.append(_fit_row(metrics, ALL, ALL, metric, axis))
    for metric, axis in INVERSE_PAIRS:
        rows.append(_fit_row(metrics, ALL, ALL, metric, axis))
    for factor, level, sub in _levels(metrics)[1:]:
        for metric in RATIO_METRICS + CIRCUIT_METRICS:
            rows.append(_fit_row(sub, factor, level, metric, "n_qubits"))
    return pd.DataFrame(rows, columns=FIT_COLUMNS)


def emsr_table(metrics: pd.DataFrame) -> pd.DataFrame:
    rows = [
        {
            "factor": factor,
            "level": level,
            "emsr_ar": emsr(sub["delta_nar"].tolist()),
            "emsr_sp": emsr(sub["delta_nsp"].tolist()),
            "n_trials": len(sub),
        }
        for factor, level, sub in _levels(metrics)
    ]
    return pd.DataFrame(rows, columns=["factor", "level", "emsr_ar", "emsr_sp", "n_trials"])


def _slope(frame: pd.DataFrame, metric: str, axis: str) -> float:
    try:
        return linear_fit(frame[axis].tolist(), frame[metric].tolist()).slope
    except DegenerateFitError:
        return math.nan


def summary_table(metrics: pd.DataFrame) -> pd.DataFrame:
    """One row per factor level: means, Δ slopes against each axis and EMSR."""
    rows = []
    for factor, level, sub in _levels(metrics):
        row: Dict[str, Any] = {"factor": factor, "level": level}
        for metric in ("nar_b", "delta_nar", "nsp_b", "delta_nsp"):
            row[metric] = float(sub[metric].mean())
        for axis in POOLED_AXES + ("n_qubits",):
            row[f"slope_delta_nar_{axis}"] = _slope(sub, "delta_nar", axis)
            row[f"slope_delta_nsp_{axis}"] = _slope(sub, "delta_nsp", axis)
        row["emsr_ar"] = emsr(sub["delta_nar"].tolist())
        row["emsr_sp"] = emsr(sub["delta_nsp"].tolist())
        row["n_trials"] = len(sub)
        rows.append(row)
    return pd.DataFrame(rows)


def build_tables(runs: Iterable[Dict[str, Any]]) -> ReportTables:
    records = pair_runs(runs)
    if not records:
        raise EmptyResultError("no NONE/DD run pairs to report on")
    metrics = pd.DataFrame([r.to_dict() for r in records])
    return ReportTables(
        metrics=metrics,
        fits=fits_table(metrics),
        emsr=emsr_table(metrics),
        summary=summary_table(metrics),
    )


def report(result_dir: Union[str, os.PathLike], output_dir: Optional[Union[str, os.PathLike]] = None) -> ReportTables:
    """Reads ``runs.jsonl`` from ``result_dir`` and writes the analysis CSVs."""
    result_dir = Path(result_dir)
    tables = build_tables(load_runs(result_dir))
    out = Path(output_dir) if output_dir is not None else result_dir
    out.mkdir(parents=True, exist_ok=True)
    for frame, name in (
        (tables.metrics, METRICS_FILE),
        (tables.fits, FITS_FILE),
        (tables.emsr, EMSR_FILE),
        (tables.summary, SUMMARY_FILE),
    ):
        frame.to_csv(out / name, index=False, float_format=FLOAT_FORMAT)
    logger.info("Report on %d DD/baseline pairs written to %s", len(tables.metrics), out)
    return tables
