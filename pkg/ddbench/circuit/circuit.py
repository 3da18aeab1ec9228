# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence, Tuple

from .gates import Gate, GateKind, TWO_QUBIT_KINDS


class CircuitFormatError(ValueError):
    def __init__(self, lineno: int, line: str, reason: str) -> None:
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: Tuple[Gate, ...] = ()
    label: str = ""
    # logical qubit -> physical qubit once every gate has run
    final_layout: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 0:
            raise ValueError(f"num_qubits must be >= 0, got {self.num_qubits}")
        for i, gate in enumerate(self.gates):
            if any(q >= self.num_qubits for q in gate.qubits):
                raise ValueError(
                    f"gate {i} ({gate}) addresses a qubit >= num_qubits={self.num_qubits}"
                )
            if gate.kind == GateKind.MEASURE:
                if i != len(self.gates) - 1:
                    raise ValueError("MEASURE may only appear as the final layer")
                if sorted(gate.qubits) != list(range(self.num_qubits)):
                    raise ValueError("MEASURE must cover every qubit")
        if self.final_layout is not None:
            layout = tuple(int(p) for p in self.final_layout)
            if sorted(layout) != list(range(self.num_qubits)):
                raise ValueError(f"final_layout {layout} is not a permutation")
            object.__setattr__(self, "final_layout", layout)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        return self.compose(other)

    @property
    def has_measure(self) -> bool:
        return bool(self.gates) and self.gates[-1].kind == GateKind.MEASURE

    def with_gates(self, gates: Iterable[Gate]) -> "Circuit":
        return replace(self, gates=tuple(gates))

    def compose(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise ValueError(
                f"cannot compose {self.num_qubits}-qubit and {other.num_qubits}-qubit circuits"
            )
        if self.has_measure and other.gates:
            raise ValueError("cannot append gates after MEASURE")
        return replace(
            self,
            gates=self.gates + other.gates,
            final_layout=other.final_layout or self.final_layout,
        )

    def without_measure(self) -> "Circuit":
        if not self.has_measure:
            return self
        return replace(self, gates=self.gates[:-1])

    def with_measure(self) -> "Circuit":
        if self.has_measure:
            return self
        measure = Gate(GateKind.MEASURE, tuple(range(self.num_qubits)))
        return replace(self, gates=self.gates + (measure,))

    def inverse(self) -> "Circuit":
        if self.has_measure:
            raise ValueError("cannot invert a circuit containing MEASURE")
        gates = []
        for gate in reversed(self.gates):
            gates.extend(gate.inverse())
        return replace(self, gates=tuple(gates), final_layout=None)

    def count(self, kind: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates if g.kind in TWO_QUBIT_KINDS)


def measure_all(num_qubits: int) -> Gate:
    return Gate(GateKind.MEASURE, tuple(range(num_qubits)))


def dumps_circuit(circuit: Circuit) -> str:
    """Line-oriented text form, see ``docs/source/formats.rst``."""
    lines = [f"QUBITS {circuit.num_qubits}"]
    if circuit.label:
        lines.append(f"LABEL {circuit.label}")
    if circuit.final_layout is not None:
        lines.append("LAYOUT " + ",".join(str(p) for p in circuit.final_layout))
    lines.extend(str(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


def _parse_gate(body: str) -> Gate:
    delay_span = None
    angle = None
    if "#" in body:
        body, span_text = body.split("#", 1)
        delay_span = int(span_text)
    if "@" in body:
        body, angle_text = body.split("@", 1)
        angle = float(angle_text)
    parts = body.split()
    if len(parts) != 2:
        raise ValueError("expected 'KIND q0[,q1]'")
    kind = GateKind(parts[0].upper())
    qubits = tuple(int(q) for q in parts[1].split(","))
    return Gate(kind, qubits, angle=angle, delay_span=delay_span)


def loads_circuit(text: str) -> Circuit:
    num_qubits: Optional[int] = None
    label = ""
    layout: Optional[Sequence[int]] = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        head = line.split(None, 1)[0].upper()
        try:
            if head == "QUBITS":
                num_qubits = int(line.split()[1])
            elif head == "LABEL":
                label = line.split(None, 1)[1] if " " in line else ""
            elif head == "LAYOUT":
                layout = [int(p) for p in line.split()[1].split(",")]
            else:
                gates.append(_parse_gate(line))
        except (ValueError, IndexError) as e:
            raise CircuitFormatError(lineno, raw, str(e)) from e
    if num_qubits is None:
        # infer the register size from the highest referenced qubit
        num_qubits = 1 + max((q for g in gates for q in g.qubits), default=-1)
    return Circuit(
        num_qubits,
        tuple(gates),
        label=label,
        final_layout=tuple(layout) if layout is not None else None,
    )
