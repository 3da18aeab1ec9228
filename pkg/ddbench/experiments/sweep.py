# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import concurrent.futures
import json
import logging
import multiprocessing
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
import tqdm

from .. import get_version_string
from ..device import DeviceModel, resolve_device
from ..noisesim import ideal_distribution, sample_counts, simulate_noisy
from ..passes import (
    alap_schedule,
    DDSequence,
    DecompositionStyle,
    insert_dd,
    lower_to_basis,
    optimize,
    OptPreset,
)
from ..qaoa import (
    approximation_ratio,
    build_qaoa,
    cost_spec,
    CostSpec,
    expectation,
    grid_search_params,
    random_instance,
    success_probability,
    swap_network_map,
)
from .config import config_hash, config_to_dict, ExperimentConfig
from .report import report, RUNS_FILE

logger = logging.getLogger(__name__)

CONFIG_FILE = "config.json"


@dataclass(frozen=True)
class GridCell:
    device: str
    two_qubit_fidelity: Optional[float]
    n_qubits: int
    style: DecompositionStyle
    preset: OptPreset
    instance: int

    def __str__(self) -> str:
        device = self.device
        if self.two_qubit_fidelity is not None:
            device += f"@f2q={self.two_qubit_fidelity:g}"
        return f"{device} n={self.n_qubits} {self.style.value} {self.preset.value} #{self.instance}"


@dataclass
class SweepOutcome:
    output_dir: Path
    num_cells: int
    num_runs: int
    failed: List[GridCell] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed


def derive_seed(*entropy: int) -> int:
    return int(np.random.SeedSequence([int(e) for e in entropy]).generate_state(1)[0])


def grid_cells(config: ExperimentConfig) -> List[GridCell]:
    """All sweep cells in their canonical order."""
    fidelities: Tuple[Optional[float], ...] = config.two_qubit_fidelities or (None,)
    return [
        GridCell(device, f2q, n, style, preset, idx)
        for device in config.devices
        for f2q in fidelities
        for n in config.qubit_counts
        for style in config.styles
        for preset in config.presets
        for idx in range(config.instances)
    ]


def _figures(weights: Mapping[str, float], spec: CostSpec) -> Tuple[float, float]:
    F = expectation(weights, spec)
    return approximation_ratio(F, spec.f0, spec.fmax), success_probability(weights, spec)


def _cell_device(cell: GridCell) -> DeviceModel:
    device = resolve_device(cell.device)
    if cell.two_qubit_fidelity is not None:
        device = device.with_two_qubit_fidelity(cell.two_qubit_fidelity)
    return device


def run_cell(cell: GridCell, config: ExperimentConfig) -> List[Dict[str, Any]]:
    """
    One grid cell end to end: instance, angles, compiled circuit, schedule,
    then one noisy run for the NONE baseline and one per DD sequence.

    Every arm shares the compiled schedule, the detuning draws and the shot
    seed, so the arms differ only by the inserted pulses.
    """
    device = _cell_device(cell)
    inst_seed = derive_seed(config.instance_seed, cell.n_qubits, cell.instance)
    inst = random_instance(cell.n_qubits, inst_seed)
    spec = cost_spec(inst)
    params = grid_search_params(spec, config.grid_resolution)

    circuit = build_qaoa(inst, params, cell.style)
    circuit = swap_network_map(circuit, device, cell.style)
    circuit = lower_to_basis(circuit, device, cell.style)
    circuit = optimize(circuit, cell.preset)

    noise = replace(config.noise, rng_seed=derive_seed(config.noise.rng_seed, inst_seed))
    shot_seed = derive_seed(config.noise.rng_seed, inst_seed, 1)

    ideal = ideal_distribution(circuit)
    if config.exact_metrics:
        weights: Mapping[str, float] = {
            format(i, f"0{cell.n_qubits}b"): float(p) for i, p in enumerate(ideal) if p > 0
        }
    else:
        weights = sample_counts(ideal, config.shots, shot_seed)
    r0, p0 = _figures(weights, spec)

    schedule = alap_schedule(circuit, device)
    provenance = {
        "config_sha256": config_hash(config),
        "device_ref": cell.device,
        "instance_seed": inst_seed,
        "noise_seed": noise.rng_seed,
        "shot_seed": shot_seed,
        "version": get_version_string(),
    }
    records = []
    for arm, seq in enumerate((DDSequence.NONE,) + config.dd_sequences):
        padded = schedule if seq == DDSequence.NONE else insert_dd(schedule, seq, device)
        result = simulate_noisy(
            padded,
            device,
            noise,
            config.shots,
            shot_seed,
            spec=spec,
            exact=config.exact_metrics,
        )
        records.append(
            {
                "arm": arm,
                "device": device.name,
                "two_qubit_fidelity": cell.two_qubit_fidelity,
                "n_qubits": cell.n_qubits,
                "style": cell.style.value,
                "preset": cell.preset.value,
                "instance": cell.instance,
                "sequence": seq.value,
                "label": padded.label,
                "params": {"gammas": list(params.gammas), "betas": list(params.betas)},
                "f0": spec.f0,
                "fmax": spec.fmax,
                "r0": r0,
                "p0": p0,
                "result": result.to_dict(),
                "provenance": provenance,
            }
        )
    return records


def _summarize(cell: GridCell, records: List[Dict[str, Any]]) -> str:
    arms = " ".join(f"r({rec['sequence']})={rec['result']['r']:.4f}" for rec in records)
    return f"{cell}: r0={records[0]['r0']:.4f} {arms}"


def _write_runs(path: Path, records: List[Dict[str, Any]]) -> None:
    tmp = path.with_suffix(".jsonl.tmp")
    with open(tmp, "w") as f:
        for rec in records:
            f.write(json.dumps(rec, sort_keys=True) + "\n")
    os.replace(tmp, path)


def execute_sweep(config: ExperimentConfig, quiet: bool = False) -> SweepOutcome:
    """
    Runs every grid cell and writes ``runs.jsonl``. A failing cell is logged
    and skipped. Records are ordered by cell then arm, so the file does not
    depend on the worker count.
    """
    cells = grid_cells(config)
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    (output_dir / CONFIG_FILE).write_text(json.dumps(config_to_dict(config), indent=2, sort_keys=True))

    workers = config.effective_num_workers()
    logger.info(
        "Sweep of %d cells into %s with %d worker(s), config %s",
        len(cells),
        output_dir,
        workers,
        config_hash(config)[:12],
    )
    by_cell: Dict[int, List[Dict[str, Any]]] = {}
    failed: List[int] = []
    pbar = tqdm.tqdm(total=len(cells), leave=False, disable=quiet)

    def collect(index: int, get_records) -> None:
        cell = cells[index]
        try:
            records = get_records()
        except Exception:
            logger.error("Cell %s failed", cell, exc_info=True)
            failed.append(index)
        else:
            by_cell[index] = records
            if not quiet:
                pbar.write(_summarize(cell, records))
        pbar.update(1)

    try:
        if workers == 1:
            for index, cell in enumerate(cells):
                collect(index, lambda cell=cell: run_cell(cell, config))
        else:
            ctx = multiprocessing.get_context("spawn")
            with concurrent.futures.ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
                futures = {pool.submit(run_cell, cell, config): i for i, cell in enumerate(cells)}
                for future in concurrent.futures.as_completed(futures):
                    collect(futures[future], future.result)
    finally:
        pbar.close()

    records = [rec for index in sorted(by_cell) for rec in by_cell[index]]
    _write_runs(output_dir / RUNS_FILE, records)
    if failed:
        logger.warning("%d of %d cells failed", len(failed), len(cells))
    return SweepOutcome(
        output_dir=output_dir,
        num_cells=len(cells),
        num_runs=len(records),
        failed=[cells[i] for i in sorted(failed)],
    )


def run_sweep(config: ExperimentConfig, quiet: bool = False) -> SweepOutcome:
    """Sweep plus the analysis tables next to ``runs.jsonl``."""
    outcome = execute_sweep(config, quiet=quiet)
    if outcome.num_runs == 0:
        logger.error("No run succeeded, skipping the report")
        return outcome
    report(outcome.output_dir)
    return outcome
