# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import enum
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..circuit import Circuit, Gate, gate_matrix, GateKind, rz
from .common import BasePass, get_pass, register_pass
from .decompose import is_zero_angle, synthesize_1q, wrap_angle

logger = logging.getLogger(__name__)

# guards against a pass pair that keeps rewriting each other
MAX_ROUNDS = 10_000

CANCELLING_KINDS = frozenset({GateKind.X, GateKind.CX, GateKind.ECR})
BARRIER_KINDS = frozenset({GateKind.DELAY, GateKind.MEASURE})
RUN_KINDS = frozenset(
    {GateKind.ID, GateKind.X, GateKind.SX, GateKind.RZ, GateKind.H, GateKind.Y, GateKind.RX}
)


class OptPreset(str, enum.Enum):
    OPT1 = "OPT1"
    OPT3 = "OPT3"


def _next_on_qubit(gates: Sequence[Gate]) -> List[Dict[int, Optional[int]]]:
    """For every gate, the index of the next gate touching each of its qubits."""
    out: List[Dict[int, Optional[int]]] = [{} for _ in gates]
    last: Dict[int, int] = {}
    for i in range(len(gates) - 1, -1, -1):
        out[i] = {q: last.get(q) for q in gates[i].qubits}
        for q in gates[i].qubits:
            last[q] = i
    return out


def _is_droppable(gate: Gate) -> bool:
    if gate.kind == GateKind.ID:
        return True
    return gate.kind == GateKind.RZ and is_zero_angle(gate.angle)  # type: ignore


def _peephole_round(gates: Sequence[Gate]) -> Tuple[List[Gate], bool]:
    kept = [g for g in gates if not _is_droppable(g)]
    changed = len(kept) != len(gates)
    nxt = _next_on_qubit(kept)
    removed = [False] * len(kept)
    current = list(kept)
    for i, g in enumerate(current):
        if removed[i] or g.kind in BARRIER_KINDS:
            continue
        successors = set(nxt[i].values())
        if len(successors) != 1:
            continue
        j = successors.pop()
        if j is None or removed[j]:
            continue
        h = current[j]
        if g.kind == GateKind.RZ and h.kind == GateKind.RZ:
            merged = wrap_angle(g.angle + h.angle)  # type: ignore
            removed[i] = True
            if is_zero_angle(merged):
                removed[j] = True
            else:
                current[j] = rz(merged, h.qubits[0])
            changed = True
        elif g.kind == h.kind and g.kind in CANCELLING_KINDS and g.qubits == h.qubits:
            removed[i] = removed[j] = True
            changed = True
    return [g for g, r in zip(current, removed) if not r], changed


def cancel_and_merge(gates: Sequence[Gate]) -> Tuple[List[Gate], bool]:
    """
    Runs the peephole round to a fixed point: adjacent X·X, CX·CX and ECR·ECR
    on the same qubits cancel, adjacent RZs merge, RZ(0) and ID vanish.
    """
    out = list(gates)
    any_change = False
    for _ in range(MAX_ROUNDS):
        out, changed = _peephole_round(out)
        if not changed:
            return out, any_change
        any_change = True
    raise RuntimeError("peephole optimisation did not converge")


def push_rz_through_cx(gates: Sequence[Gate]) -> Tuple[List[Gate], bool]:
    """Moves every RZ sitting right before a CX control to just after it."""
    out = list(gates)
    any_change = False
    for _ in range(MAX_ROUNDS):
        nxt = _next_on_qubit(out)
        for i, g in enumerate(out):
            if g.kind != GateKind.RZ:
                continue
            j = nxt[i][g.qubits[0]]
            if j is not None and out[j].kind == GateKind.CX and out[j].qubits[0] == g.qubits[0]:
                out = out[:i] + out[i + 1 : j + 1] + [g] + out[j + 1 :]
                any_change = True
                break
        else:
            return out, any_change
    raise RuntimeError("RZ commutation did not converge")


def _single_qubit_runs(gates: Sequence[Gate]) -> List[List[int]]:
    runs: List[List[int]] = []
    open_runs: Dict[int, List[int]] = {}
    for i, g in enumerate(gates):
        if g.kind in RUN_KINDS:
            open_runs.setdefault(g.qubits[0], []).append(i)
            continue
        for q in g.qubits:
            if q in open_runs:
                runs.append(open_runs.pop(q))
    runs.extend(open_runs.values())
    return runs


def resynthesize_runs(gates: Sequence[Gate]) -> Tuple[List[Gate], bool]:
    """Replaces a maximal single-qubit run when its canonical form is strictly shorter."""
    replacement: Dict[int, List[Gate]] = {}
    dropped = set()
    for run in _single_qubit_runs(gates):
        if len(run) < 2:
            continue
        u = np.eye(2, dtype=np.complex128)
        for i in run:
            u = gate_matrix(gates[i]) @ u
        new = synthesize_1q(u, gates[run[0]].qubits[0])
        if len(new) < len(run):
            dropped.update(run[:-1])
            replacement[run[-1]] = new
    if not replacement:
        return list(gates), False
    out: List[Gate] = []
    for i, g in enumerate(gates):
        if i in dropped:
            continue
        out.extend(replacement.get(i, [g]))
    return out, True


class OptimizationPreset(BasePass):
    CATEGORY = "opt_preset"
    PASSES: Tuple[str, ...] = ()

    @classmethod
    def run(cls, gates: Sequence[Gate]) -> List[Gate]:
        raise NotImplementedError()


@register_pass
class Opt1(OptimizationPreset):
    NAME = OptPreset.OPT1.value
    DESCRIPTION = "self-inverse cancellation, RZ merging, RZ(0)/ID removal"
    PASSES = ("cancel_and_merge",)

    @classmethod
    def run(cls, gates: Sequence[Gate]) -> List[Gate]:
        return cancel_and_merge(gates)[0]


@register_pass
class Opt3(OptimizationPreset):
    NAME = OptPreset.OPT3.value
    DESCRIPTION = "OPT1 plus RZ commutation through CX controls and 1q resynthesis"
    PASSES = ("cancel_and_merge", "push_rz_through_cx", "resynthesize_runs")

    @classmethod
    def run(cls, gates: Sequence[Gate]) -> List[Gate]:
        out = list(gates)
        for _ in range(MAX_ROUNDS):
            out, c1 = cancel_and_merge(out)
            out, c2 = push_rz_through_cx(out)
            out, c3 = resynthesize_runs(out)
            if not (c1 or c2 or c3):
                return out
        raise RuntimeError("OPT3 did not converge")


def optimize(circuit: Circuit, preset: OptPreset) -> Circuit:
    preset_cls = get_pass(OptimizationPreset.CATEGORY, OptPreset(preset).value)
    gates = preset_cls.run(circuit.gates)  # type: ignore
    logger.debug(
        "%s: %d -> %d gates on %s", preset_cls.NAME, len(circuit), len(gates), circuit.label
    )
    return circuit.with_gates(gates)
