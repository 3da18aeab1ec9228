# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from ..circuit import Circuit, Gate, GateKind, TWO_QUBIT_KINDS
from ..device import DeviceModel, gate_duration
from .decompose import NonAdjacentPairError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TimedInstruction:
    gate: Gate
    start_dt: int
    duration_dt: int

    def __post_init__(self) -> None:
        if self.start_dt < 0:
            raise ValueError(f"{self.gate}: negative start {self.start_dt}")
        if self.duration_dt < 0:
            raise ValueError(f"{self.gate}: negative duration {self.duration_dt}")

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.gate.qubits

    @property
    def end_dt(self) -> int:
        return self.start_dt + self.duration_dt

    @property
    def is_idle(self) -> bool:
        return self.gate.kind == GateKind.DELAY

    def __str__(self) -> str:
        return f"{self.start_dt} {self.gate}"


@dataclass(frozen=True)
class IdleWindow:
    qubit: int
    start_dt: int
    span_dt: int

    @property
    def end_dt(self) -> int:
        return self.start_dt + self.span_dt


@dataclass(frozen=True)
class Schedule:
    """
    Timed instruction stream in execution order.

    ``instructions`` are sorted by start time; instructions sharing a start
    keep their circuit order, so zero-duration gates stay on the correct side
    of their neighbours.
    """

    instructions: Tuple[TimedInstruction, ...]
    total_dt: int
    device_name: str
    num_qubits: int
    label: str = ""
    final_layout: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "instructions", tuple(self.instructions))

    def __len__(self) -> int:
        return len(self.instructions)

    def on_qubit(self, qubit: int) -> List[TimedInstruction]:
        return [inst for inst in self.instructions if qubit in inst.qubits]

    def validate(self) -> None:
        """Raises ``ValueError`` if intervals overlap or ``total_dt`` is off."""
        last_end: Dict[int, int] = {}
        last_start: Dict[int, int] = {}
        for inst in self.instructions:
            for q in inst.qubits:
                if q >= self.num_qubits:
                    raise ValueError(f"{inst} addresses qubit {q} >= {self.num_qubits}")
                if inst.start_dt < last_end.get(q, 0):
                    raise ValueError(
                        f"{inst} overlaps an earlier instruction on qubit {q} "
                        f"(busy until {last_end[q]})"
                    )
                if inst.start_dt < last_start.get(q, 0):
                    raise ValueError(f"{inst} is out of order on qubit {q}")
                last_end[q] = max(last_end.get(q, 0), inst.end_dt)
                last_start[q] = inst.start_dt
        expected = max((inst.end_dt for inst in self.instructions), default=0)
        if expected != self.total_dt:
            raise ValueError(f"total_dt is {self.total_dt}, instructions end at {expected}")


def _check_chain(circuit: Circuit, device: DeviceModel) -> None:
    if circuit.num_qubits > device.chain_length:
        raise NonAdjacentPairError(
            f"{circuit.num_qubits} qubits do not fit the {device.chain_length}-qubit chain of {device.name}"
        )
    for gate in circuit.gates:
        if gate.kind in TWO_QUBIT_KINDS and not device.is_adjacent(*gate.qubits):
            raise NonAdjacentPairError(f"{gate} is not on an adjacent chain pair")


def alap_schedule(circuit: Circuit, device: DeviceModel) -> Schedule:
    _check_chain(circuit, device)
    durations = [gate_duration(device, g) for g in circuit.gates]
    # reverse sweep: time is measured backwards from the end of the circuit
    reverse_free = [0] * circuit.num_qubits
    reverse_start = [0] * len(circuit.gates)
    for i in range(len(circuit.gates) - 1, -1, -1):
        qubits = circuit.gates[i].qubits
        begin = max(reverse_free[q] for q in qubits)
        reverse_start[i] = begin
        for q in qubits:
            reverse_free[q] = begin + durations[i]
    total = max(reverse_free, default=0)
    timed = [
        TimedInstruction(g, total - reverse_start[i] - durations[i], durations[i])
        for i, g in enumerate(circuit.gates)
    ]
    order = sorted(range(len(timed)), key=lambda i: timed[i].start_dt)
    schedule = Schedule(
        instructions=tuple(timed[i] for i in order),
        total_dt=total,
        device_name=device.name,
        num_qubits=circuit.num_qubits,
        label=circuit.label,
        final_layout=circuit.final_layout,
    )
    logger.debug("ALAP %s on %s: %d instructions, %d dt", circuit.label, device.name, len(timed), total)
    return schedule


def occupied_intervals(schedule: Schedule, qubit: int) -> List[Tuple[int, int]]:
    """Busy ``[start, end)`` intervals of ``qubit``; DELAYs count as idle."""
    return sorted(
        (inst.start_dt, inst.end_dt)
        for inst in schedule.instructions
        if qubit in inst.qubits and not inst.is_idle and inst.duration_dt > 0
    )


def idle_windows(schedule: Schedule) -> List[IdleWindow]:
    windows = []
    for q in range(schedule.num_qubits):
        intervals = occupied_intervals(schedule, q)
        for (_, end), (start, _) in zip(intervals, intervals[1:]):
            if start > end:
                windows.append(IdleWindow(q, end, start - end))
    return windows


def schedule_to_circuit(schedule: Schedule) -> Circuit:
    return Circuit(
        schedule.num_qubits,
        tuple(inst.gate for inst in schedule.instructions),
        label=schedule.label,
        final_layout=schedule.final_layout,
    )


def dump_schedule(schedule: Schedule) -> str:
    """One ``start_dt KIND qubits[@angle][#span]`` line per instruction."""
    ordered = sorted(schedule.instructions, key=lambda inst: (inst.start_dt, inst.qubits[0]))
    lines = [f"; {schedule.device_name} total_dt={schedule.total_dt}"]
    lines.extend(str(inst) for inst in ordered)
    return "\n".join(lines) + "\n"


def with_instructions(schedule: Schedule, instructions: Sequence[TimedInstruction]) -> Schedule:
    return replace(schedule, instructions=tuple(instructions))
