# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import cmath
import enum
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..circuit import (
    Circuit,
    Gate,
    gate1,
    gate2,
    gate_matrix,
    GateKind,
    rx,
    rz,
)
from ..device import DeviceModel
from .common import BasePass, register_pass, run_priority_list

HALF_PI = math.pi / 2
# below this the Euler extraction treats theta as exactly 0, pi/2 or pi
EULER_TOL = 1e-10
ANGLE_TOL = 1e-12


class DecompositionStyle(str, enum.Enum):
    CX_IMPL = "CX_IMPL"
    CZ_IMPL = "CZ_IMPL"


class UnsupportedDirectionError(ValueError):
    pass


class NonAdjacentPairError(ValueError):
    pass


def wrap_angle(theta: float) -> float:
    return math.remainder(theta, 2 * math.pi)


def is_zero_angle(theta: float, tol: float = ANGLE_TOL) -> bool:
    return abs(wrap_angle(theta)) <= tol


def _span(*qubits: int) -> int:
    return max(qubits) + 1


def rzz_as_cx(theta: float, q0: int, q1: int) -> Circuit:
    return Circuit(
        _span(q0, q1),
        (gate2(GateKind.CX, q0, q1), rz(theta, q1), gate2(GateKind.CX, q0, q1)),
    )


def rzz_as_cz(theta: float, q0: int, q1: int) -> Circuit:
    return Circuit(
        _span(q0, q1),
        (
            gate1(GateKind.H, q1),
            gate2(GateKind.CZ, q0, q1),
            rx(theta, q1),
            gate2(GateKind.CZ, q0, q1),
            gate1(GateKind.H, q1),
        ),
    )


def rzz_gates(theta: float, q0: int, q1: int, style: DecompositionStyle) -> Tuple[Gate, ...]:
    if DecompositionStyle(style) == DecompositionStyle.CZ_IMPL:
        return rzz_as_cz(theta, q0, q1).gates
    return rzz_as_cx(theta, q0, q1).gates


def cx_as_ecr(control: int, target: int, device: Optional[DeviceModel] = None) -> Circuit:
    """
    CX(c, t) = RZ(pi/2)_c . SX_t . ECR(c, t) . X_c up to global phase.

    Follows from ECR = X_c exp(-i pi/4 Z_c X_t) with the ECR matrix
    (X⊗I − Y⊗X)/√2.
    """
    if device is not None and not device.supports_direction(control, target):
        raise UnsupportedDirectionError(
            f"ECR({control},{target}) is not calibrated on {device.name}"
        )
    return Circuit(
        _span(control, target),
        (
            gate1(GateKind.X, control),
            gate2(GateKind.ECR, control, target),
            rz(HALF_PI, control),
            gate1(GateKind.SX, target),
        ),
    )


def ecr_as_cx(control: int, target: int) -> Circuit:
    return Circuit(
        _span(control, target),
        (
            gate1(GateKind.X, control),
            gate2(GateKind.CX, control, target),
            rz(-HALF_PI, control),
            rx(-HALF_PI, target),
        ),
    )


def reverse_cx(control: int, target: int) -> Circuit:
    return Circuit(
        _span(control, target),
        (
            gate1(GateKind.H, control),
            gate1(GateKind.H, target),
            gate2(GateKind.CX, target, control),
            gate1(GateKind.H, control),
            gate1(GateKind.H, target),
        ),
    )


def euler_zyz(u: np.ndarray) -> Tuple[float, float, float]:
    """
    Returns (theta, phi, lam) with u ∝ RZ(phi) RY(theta) RZ(lam), theta in [0, pi].
    """
    u = np.asarray(u, dtype=np.complex128)
    su = u / cmath.sqrt(np.linalg.det(u))
    a, b = su[0, 0], su[1, 0]
    theta = 2 * math.atan2(abs(b), abs(a))
    if abs(b) < EULER_TOL:
        return theta, -2 * cmath.phase(a), 0.0
    if abs(a) < EULER_TOL:
        return theta, 2 * cmath.phase(b), 0.0
    plus = -2 * cmath.phase(a)
    minus = 2 * cmath.phase(b)
    return theta, (plus + minus) / 2, (plus - minus) / 2


def synthesize_1q(u: np.ndarray, qubit: int) -> List[Gate]:
    """Shortest RZ/SX/X sequence (time order) implementing ``u`` up to phase."""
    theta, phi, lam = euler_zyz(u)
    if abs(theta) < EULER_TOL:
        seq = [rz(phi + lam, qubit)]
    elif abs(theta - HALF_PI) < EULER_TOL:
        seq = [
            rz(lam - HALF_PI, qubit),
            gate1(GateKind.SX, qubit),
            rz(phi + HALF_PI, qubit),
        ]
    elif abs(theta - math.pi) < EULER_TOL:
        # only phi - lam is defined here
        seq = [gate1(GateKind.X, qubit), rz(phi - lam + math.pi, qubit)]
    else:
        seq = [
            rz(lam, qubit),
            gate1(GateKind.SX, qubit),
            rz(theta + math.pi, qubit),
            gate1(GateKind.SX, qubit),
            rz(phi + math.pi, qubit),
        ]
    out = []
    for g in seq:
        if g.kind == GateKind.RZ:
            if is_zero_angle(g.angle, EULER_TOL):  # type: ignore
                continue
            g = rz(wrap_angle(g.angle), qubit)  # type: ignore
        out.append(g)
    return out


class TwoQubitLowering(BasePass):
    CATEGORY = "lowering"
    KIND: GateKind
    # native strategies emit gates that need no further lowering
    IS_NATIVE = False

    @classmethod
    def expand(cls, gate: Gate, device: DeviceModel) -> Sequence[Gate]:
        raise NotImplementedError()


@register_pass
class NativeCX(TwoQubitLowering):
    NAME = "native_cx"
    KIND = GateKind.CX
    IS_NATIVE = True
    DESCRIPTION = "CX in a calibrated direction"

    @classmethod
    def not_supported_reasons(cls, gate: Gate, device: DeviceModel) -> List[str]:
        reasons = []
        if device.native_2q != GateKind.CX:
            reasons.append(f"native two-qubit gate is {device.native_2q.value}")
        elif not device.supports_direction(*gate.qubits):
            reasons.append(f"direction {gate.qubits} not calibrated")
        return reasons

    @classmethod
    def expand(cls, gate: Gate, device: DeviceModel) -> Sequence[Gate]:
        return (gate,)


@register_pass
class ReversedCX(TwoQubitLowering):
    NAME = "reversed_cx"
    KIND = GateKind.CX
    DESCRIPTION = "H-conjugated CX in the opposite calibrated direction"

    @classmethod
    def not_supported_reasons(cls, gate: Gate, device: DeviceModel) -> List[str]:
        c, t = gate.qubits
        reasons = []
        if device.native_2q != GateKind.CX:
            reasons.append(f"native two-qubit gate is {device.native_2q.value}")
        elif not device.supports_direction(t, c):
            reasons.append(f"direction {(t, c)} not calibrated")
        return reasons

    @classmethod
    def expand(cls, gate: Gate, device: DeviceModel) -> Sequence[Gate]:
        return reverse_cx(*gate.qubits).gates


@register_pass
class CXViaECR(TwoQubitLowering):
    NAME = "cx_via_ecr"
    KIND = GateKind.CX
    DESCRIPTION = "one ECR plus RZ/SX/X corrections"

    @classmethod
    def not_supported_reasons(cls, gate: Gate, device: DeviceModel) -> List[str]:
        reasons = []
        if device.native_2q != GateKind.ECR:
            reasons.append(f"native two-qubit gate is {device.native_2q.value}")
        elif not device.supports_direction(*gate.qubits):
            reasons.append(f"ECR direction {gate.qubits} not calibrated")
        return reasons

    @classmethod
    def expand(cls, gate: Gate, device: DeviceModel) -> Sequence[Gate]:
        return cx_as_ecr(*gate.qubits).gates


@register_pass
class ReversedCXViaECR(TwoQubitLowering):
    NAME = "reversed_cx_via_ecr"
    KIND = GateKind.CX
    DESCRIPTION = "H-conjugated CX realised with the opposite-direction ECR"

    @classmethod
    def not_supported_reasons(cls, gate: Gate, device: DeviceModel) -> List[str]:
        c, t = gate.qubits
        reasons = []
        if device.native_2q != GateKind.ECR:
            reasons.append(f"native two-qubit gate is {device.native_2q.value}")
        elif not device.supports_direction(t, c):
            reasons.append(f"ECR direction {(t, c)} not calibrated")
        return reasons

    @classmethod
    def expand(cls, gate: Gate, device: DeviceModel) -> Sequence[Gate]:
        return reverse_cx(*gate.qubits).gates


@register_pass
class NativeECR(TwoQubitLowering):
    NAME = "native_ecr"
    KIND = GateKind.ECR
    IS_NATIVE = True
    DESCRIPTION = "ECR in its calibrated direction"

    @classmethod
    def not_supported_reasons(cls, gate: Gate, device: DeviceModel) -> List[str]:
        reasons = []
        if device.native_2q != GateKind.ECR:
            reasons.append(f"native two-qubit gate is {device.native_2q.value}")
        elif not device.supports_direction(*gate.qubits):
            reasons.append(f"ECR direction {gate.qubits} not calibrated")
        return reasons

    @classmethod
    def expand(cls, gate: Gate, device: DeviceModel) -> Sequence[Gate]:
        return (gate,)


@register_pass
class ECRViaCX(TwoQubitLowering):
    NAME = "ecr_via_cx"
    KIND = GateKind.ECR
    DESCRIPTION = "ECR rebuilt from a CX and single-qubit gates"

    @classmethod
    def expand(cls, gate: Gate, device: DeviceModel) -> Sequence[Gate]:
        return ecr_as_cx(*gate.qubits).gates


_PRIORITY_LISTS = {
    GateKind.CX: [NativeCX, ReversedCX, CXViaECR, ReversedCXViaECR],
    GateKind.ECR: [NativeECR, ECRViaCX],
}


def _lower_gate(
    gate: Gate, device: DeviceModel, style: DecompositionStyle
) -> List[Gate]:
    kind = gate.kind
    if kind in (GateKind.ID, GateKind.X, GateKind.SX, GateKind.RZ):
        return [gate]
    if kind in (GateKind.DELAY, GateKind.MEASURE):
        return [gate]
    if kind == GateKind.H:
        (q,) = gate.qubits
        return [rz(HALF_PI, q), gate1(GateKind.SX, q), rz(HALF_PI, q)]
    if kind == GateKind.Y:
        (q,) = gate.qubits
        return [rz(-HALF_PI, q), gate1(GateKind.X, q), rz(HALF_PI, q)]
    if kind == GateKind.RX:
        return synthesize_1q(gate_matrix(gate), gate.qubits[0])

    a, b = gate.qubits
    if not device.is_adjacent(a, b):
        raise NonAdjacentPairError(
            f"{kind.value}{gate.qubits} is not on an adjacent pair of the "
            f"{device.chain_length}-qubit chain of {device.name}"
        )
    if kind == GateKind.RZZ:
        expanded: Sequence[Gate] = rzz_gates(gate.angle, a, b, style)  # type: ignore
    elif kind == GateKind.CZ:
        expanded = (gate1(GateKind.H, b), gate2(GateKind.CX, a, b), gate1(GateKind.H, b))
    else:
        strategy = run_priority_list(
            f"{gate} on {device.name}",
            _PRIORITY_LISTS[kind],
            UnsupportedDirectionError,
            gate,
            device,
        )
        expanded = strategy.expand(gate, device)
        if strategy.IS_NATIVE:
            return list(expanded)
    out: List[Gate] = []
    for g in expanded:
        out.extend(_lower_gate(g, device, style))
    return out


def lower_to_basis(
    circuit: Circuit,
    device: DeviceModel,
    style: DecompositionStyle = DecompositionStyle.CX_IMPL,
) -> Circuit:
    if circuit.num_qubits > device.chain_length:
        raise NonAdjacentPairError(
            f"{circuit.num_qubits} qubits do not fit the {device.chain_length}-qubit chain of {device.name}"
        )
    gates: List[Gate] = []
    for gate in circuit.gates:
        gates.extend(_lower_gate(gate, device, style))
    return circuit.with_gates(gates)
