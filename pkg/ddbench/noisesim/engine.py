# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import functools
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Union

import numpy as np
import torch

from ..circuit import Gate, gate_matrix, GateKind
from ..device import DeviceModel
from ..passes import Schedule, TimedInstruction
from .channels import (
    amplitude_damping_probability,
    ChannelKind,
    dephasing_probability,
    depolarizing_probability,
    kraus_channels,
    superoperator,
    unitary_superoperator,
)

DTYPE = torch.complex128


@dataclass(frozen=True)
class IdleStep:
    qubit: int
    span_dt: int


@dataclass(frozen=True)
class GateStep:
    instruction: TimedInstruction

    @property
    def gate(self) -> Gate:
        return self.instruction.gate


def timeline(schedule: Schedule) -> Iterator[Union[IdleStep, GateStep]]:
    """
    Walks the schedule in execution order, emitting the idle stretch each
    qubit spends before its next gate. DELAYs are idle time; every qubit idles
    until MEASURE starts (or until ``total_dt`` without a MEASURE).
    """
    last_end = [0] * schedule.num_qubits
    horizon = schedule.total_dt
    for inst in schedule.instructions:
        kind = inst.gate.kind
        if kind == GateKind.MEASURE:
            horizon = inst.start_dt
            break
        if kind == GateKind.DELAY:
            continue
        for q in inst.qubits:
            if inst.start_dt > last_end[q]:
                yield IdleStep(q, inst.start_dt - last_end[q])
        yield GateStep(inst)
        for q in inst.qubits:
            last_end[q] = max(last_end[q], inst.end_dt)
    for q in range(schedule.num_qubits):
        if horizon > last_end[q]:
            yield IdleStep(q, horizon - last_end[q])


def gate_error_probability(gate: Gate, device: DeviceModel) -> float:
    """Depolarizing strength of a native gate; virtual gates are exact."""
    kind = gate.kind
    if kind in (GateKind.X, GateKind.SX):
        return depolarizing_probability(device.f_1q[gate.qubits[0]], 2)
    if kind == device.native_2q:
        return depolarizing_probability(device.fidelity_2q(*gate.qubits), 4)
    return 0.0


def gate_kraus(gate: Gate, p_depol: float) -> List[np.ndarray]:
    """Kraus form of the gate followed by its depolarizing error."""
    u = gate_matrix(gate)
    if p_depol == 0:
        return [u]
    kind = ChannelKind.DEPOL1 if gate.num_qubits == 1 else ChannelKind.DEPOL2
    return [k @ u for k in kraus_channels(kind, p_depol)]


@functools.lru_cache(maxsize=4096)
def gate_superoperator(gate: Gate, p_depol: float) -> torch.Tensor:
    if p_depol == 0:
        s = unitary_superoperator(gate_matrix(gate))
    else:
        s = superoperator(gate_kraus(gate, p_depol))
    return torch.from_numpy(s).to(DTYPE)


def decay_kraus(span_dt: int, dt_ns: float, t1_ns: float, t2_ns: float) -> List[List[np.ndarray]]:
    """Amplitude damping then pure dephasing over ``span_dt``; empty when both vanish."""
    tau_ns = span_dt * dt_ns
    p_ad = amplitude_damping_probability(tau_ns, t1_ns)
    p_pd = dephasing_probability(tau_ns, t1_ns, t2_ns)
    stages = []
    if p_ad > 0:
        stages.append(kraus_channels(ChannelKind.AD, p_ad))
    if p_pd > 0:
        stages.append(kraus_channels(ChannelKind.PD, p_pd))
    return stages


@functools.lru_cache(maxsize=4096)
def decay_superoperator(
    span_dt: int, dt_ns: float, t1_ns: float, t2_ns: float
) -> Optional[torch.Tensor]:
    s = np.eye(4, dtype=np.complex128)
    stages = decay_kraus(span_dt, dt_ns, t1_ns, t2_ns)
    if not stages:
        return None
    for ops in stages:
        s = superoperator(ops) @ s
    return torch.from_numpy(s).to(DTYPE)


def initial_density_matrix(num_qubits: int, batch: int) -> torch.Tensor:
    dim = 2**num_qubits
    rho = torch.zeros((batch, dim, dim), dtype=DTYPE)
    rho[:, 0, 0] = 1
    return rho


def initial_statevector(num_qubits: int, batch: int) -> torch.Tensor:
    psi = torch.zeros((batch, 2**num_qubits), dtype=DTYPE)
    psi[:, 0] = 1
    return psi


def apply_superoperator(
    rho: torch.Tensor, superop: torch.Tensor, qubits: Sequence[int], num_qubits: int
) -> torch.Tensor:
    """
    Applies a k-qubit superoperator to the row and column axes of ``qubits``.

    ``rho`` is (S, D, D); ``superop`` is (4**k, 4**k) or batched (S, 4**k, 4**k).
    """
    batch = rho.shape[0]
    k = len(qubits)
    n = num_qubits
    t = rho.reshape((batch,) + (2,) * (2 * n))
    src = [1 + q for q in qubits] + [1 + n + q for q in qubits]
    dst = list(range(1, 1 + 2 * k))
    t = torch.movedim(t, src, dst)
    moved_shape = t.shape
    t = torch.matmul(superop, t.reshape(batch, 4**k, -1))
    t = torch.movedim(t.reshape(moved_shape), dst, src)
    return t.reshape(batch, 2**n, 2**n)


def apply_operator(
    psi: torch.Tensor, op: torch.Tensor, qubits: Sequence[int], num_qubits: int
) -> torch.Tensor:
    """Applies a k-qubit operator (or a batch of them) to statevectors (B, D)."""
    batch = psi.shape[0]
    k = len(qubits)
    n = num_qubits
    t = psi.reshape((batch,) + (2,) * n)
    src = [1 + q for q in qubits]
    dst = list(range(1, 1 + k))
    t = torch.movedim(t, src, dst)
    moved_shape = t.shape
    t = torch.matmul(op, t.reshape(batch, 2**k, -1))
    t = torch.movedim(t.reshape(moved_shape), dst, src)
    return t.reshape(batch, 2**n)


def qubit_signs(qubit: int, num_qubits: int) -> torch.Tensor:
    """+1 where ``qubit`` reads 0 in the basis index, -1 where it reads 1."""
    index = torch.arange(2**num_qubits)
    bits = (index >> (num_qubits - 1 - qubit)) & 1
    return (1 - 2 * bits).to(torch.float64)
