# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import logging
from typing import Sequence

import numpy as np
import torch

from ..device import DeviceModel
from ..passes import Schedule
from .engine import (
    apply_operator,
    decay_kraus,
    DTYPE,
    gate_error_probability,
    gate_kraus,
    GateStep,
    initial_statevector,
    qubit_signs,
    timeline,
)

logger = logging.getLogger(__name__)


def _unravel(
    psi: torch.Tensor,
    ops: Sequence[np.ndarray],
    qubits: Sequence[int],
    num_qubits: int,
    rng: np.random.Generator,
) -> torch.Tensor:
    """Picks one Kraus branch per trajectory with the Born weights and renormalises."""
    if len(ops) == 1:
        return apply_operator(psi, torch.from_numpy(ops[0]).to(DTYPE), qubits, num_qubits)
    tensors = [torch.from_numpy(k).to(DTYPE) for k in ops]
    weights = torch.stack(
        [apply_operator(psi, k, qubits, num_qubits).abs().pow(2).sum(-1) for k in tensors],
        dim=1,
    )
    cumulative = weights.cumsum(dim=1)
    draws = torch.from_numpy(rng.random(psi.shape[0])) * cumulative[:, -1]
    choice = (cumulative < draws[:, None]).sum(dim=1).clamp(max=len(ops) - 1)
    out = torch.empty_like(psi)
    for k, op in enumerate(tensors):
        mask = choice == k
        if not bool(mask.any()):
            continue
        branch = apply_operator(psi[mask], op, qubits, num_qubits)
        out[mask] = branch / weights[mask, k].sqrt()[:, None]
    return out


def evolve_trajectories(
    schedule: Schedule,
    device: DeviceModel,
    detunings: torch.Tensor,
    rng: np.random.Generator,
    enable_t1t2: bool = True,
    enable_gate_error: bool = True,
) -> np.ndarray:
    """
    Kraus unravelling of the density-matrix model: one statevector per row of
    ``detunings`` (shape (T, n)). Returns the mean physical-order distribution.
    """
    n = schedule.num_qubits
    psi = initial_statevector(n, detunings.shape[0])
    detunings = detunings.to(torch.float64)
    for step in timeline(schedule):
        if isinstance(step, GateStep):
            gate = step.gate
            p = gate_error_probability(gate, device) if enable_gate_error else 0.0
            psi = _unravel(psi, gate_kraus(gate, p), gate.qubits, n, rng)
            continue
        q = step.qubit
        phase = detunings[:, q] * step.span_dt
        if bool((phase != 0).any()):
            psi = psi * torch.exp(-0.5j * phase[:, None] * qubit_signs(q, n)[None, :])
        if enable_t1t2:
            for ops in decay_kraus(step.span_dt, device.dt_ns, device.t1_ns[q], device.t2_ns[q]):
                psi = _unravel(psi, ops, (q,), n, rng)
    probs = psi.abs().pow(2).mean(dim=0)
    logger.debug("%d trajectories on %d qubits", psi.shape[0], n)
    return probs.numpy()
