# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np


class GateKind(str, enum.Enum):
    ID = "ID"
    X = "X"
    SX = "SX"
    RZ = "RZ"
    H = "H"
    RX = "RX"
    Y = "Y"
    CX = "CX"
    CZ = "CZ"
    ECR = "ECR"
    RZZ = "RZZ"
    DELAY = "DELAY"
    MEASURE = "MEASURE"


SINGLE_QUBIT_KINDS = frozenset(
    {
        GateKind.ID,
        GateKind.X,
        GateKind.SX,
        GateKind.RZ,
        GateKind.H,
        GateKind.RX,
        GateKind.Y,
        GateKind.DELAY,
    }
)
TWO_QUBIT_KINDS = frozenset({GateKind.CX, GateKind.CZ, GateKind.ECR, GateKind.RZZ})
ANGLED_KINDS = frozenset({GateKind.RZ, GateKind.RX, GateKind.RZZ})
# kinds that are their own inverse (up to global phase)
SELF_INVERSE_KINDS = frozenset(
    {
        GateKind.ID,
        GateKind.X,
        GateKind.Y,
        GateKind.H,
        GateKind.CX,
        GateKind.CZ,
        GateKind.ECR,
    }
)


@dataclass(frozen=True)
class Gate:
    """
    One instruction of the circuit IR.

    ``qubits`` lists control first for directed gates. ``angle`` is only
    carried by RZ, RX and RZZ; ``delay_span`` (in dt) only by DELAY.
    MEASURE is a measure-all marker whose qubits are every circuit qubit.
    """

    kind: GateKind
    qubits: Tuple[int, ...]
    angle: Optional[float] = None
    delay_span: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind.value}: repeated qubit in {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"{self.kind.value}: negative qubit in {self.qubits}")
        if self.kind in SINGLE_QUBIT_KINDS and len(self.qubits) != 1:
            raise ValueError(
                f"{self.kind.value} acts on 1 qubit, got {len(self.qubits)}"
            )
        if self.kind in TWO_QUBIT_KINDS and len(self.qubits) != 2:
            raise ValueError(
                f"{self.kind.value} acts on 2 qubits, got {len(self.qubits)}"
            )
        if self.kind == GateKind.MEASURE and not self.qubits:
            raise ValueError("MEASURE needs at least one qubit")
        if self.kind in ANGLED_KINDS:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{self.kind.value} needs a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{self.kind.value} does not take an angle")
        if self.kind == GateKind.DELAY:
            if (
                self.delay_span is None
                or int(self.delay_span) != self.delay_span
                or self.delay_span < 0
            ):
                raise ValueError(
                    f"DELAY span must be a non-negative integer dt, got {self.delay_span}"
                )
            object.__setattr__(self, "delay_span", int(self.delay_span))
        elif self.delay_span is not None:
            raise ValueError(f"{self.kind.value} does not take a delay span")

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    def inverse(self) -> Tuple["Gate", ...]:
        if self.kind == GateKind.MEASURE:
            raise ValueError("MEASURE has no inverse")
        if self.kind in ANGLED_KINDS:
            return (Gate(self.kind, self.qubits, -self.angle),)  # type: ignore
        if self.kind == GateKind.SX:
            return (self, self, self)
        return (self,)

    def __str__(self) -> str:
        text = f"{self.kind.value} " + ",".join(str(q) for q in self.qubits)
        if self.angle is not None:
            text += f"@{self.angle!r}"
        if self.delay_span is not None:
            text += f"#{self.delay_span}"
        return text


def rz(theta: float, q: int) -> Gate:
    return Gate(GateKind.RZ, (q,), theta)


def rx(theta: float, q: int) -> Gate:
    return Gate(GateKind.RX, (q,), theta)


def rzz(theta: float, q0: int, q1: int) -> Gate:
    return Gate(GateKind.RZZ, (q0, q1), theta)


def delay(span: int, q: int) -> Gate:
    return Gate(GateKind.DELAY, (q,), delay_span=span)


def gate1(kind: GateKind, q: int) -> Gate:
    return Gate(kind, (q,))


def gate2(kind: GateKind, q0: int, q1: int) -> Gate:
    return Gate(kind, (q0, q1))


_SQRT2 = math.sqrt(2.0)

_FIXED_MATRICES = {
    GateKind.ID: np.eye(2, dtype=np.complex128),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    GateKind.SX: 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]),
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=np.complex128) / _SQRT2,
    GateKind.CX: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
        dtype=np.complex128,
    ),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(np.complex128),
    # (X⊗I − Y⊗X)/√2, control first
    GateKind.ECR: np.array(
        [[0, 0, 1, 1j], [0, 0, 1j, 1], [1, -1j, 0, 0], [-1j, 1, 0, 0]],
        dtype=np.complex128,
    )
    / _SQRT2,
}


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


def rzz_matrix(theta: float) -> np.ndarray:
    a, b = np.exp(-0.5j * theta), np.exp(0.5j * theta)
    return np.diag([a, b, b, a])


def gate_matrix(gate: Gate) -> np.ndarray:
    """Matrix of a unitary gate, first listed qubit most significant."""
    if gate.kind == GateKind.RZ:
        return rz_matrix(gate.angle)  # type: ignore
    if gate.kind == GateKind.RX:
        return rx_matrix(gate.angle)  # type: ignore
    if gate.kind == GateKind.RZZ:
        return rzz_matrix(gate.angle)  # type: ignore
    if gate.kind == GateKind.DELAY:
        return _FIXED_MATRICES[GateKind.ID].copy()
    if gate.kind == GateKind.MEASURE:
        raise ValueError("MEASURE is not unitary")
    return _FIXED_MATRICES[gate.kind].copy()
