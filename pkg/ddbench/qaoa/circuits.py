# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..circuit import Circuit, Gate, gate1, gate2, GateKind, measure_all, rx, rz, rzz
from ..device import DeviceModel
from ..passes import DecompositionStyle, rzz_gates
from .portfolio import cost_coefficients, cost_diagonal, CostSpec, PortfolioInstance

logger = logging.getLogger(__name__)


class ChainTooShortError(ValueError):
    pass


@dataclass(frozen=True)
class QAOAParams:
    gammas: Tuple[float, ...]
    betas: Tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if len(self.gammas) != len(self.betas):
            raise ValueError(
                f"{len(self.gammas)} gammas but {len(self.betas)} betas"
            )
        if not self.gammas:
            raise ValueError("QAOA depth must be >= 1")
        if not all(math.isfinite(a) for a in self.gammas + self.betas):
            raise ValueError("QAOA angles must be finite")

    @property
    def depth(self) -> int:
        return len(self.gammas)


def build_qaoa(
    inst: PortfolioInstance,
    params: QAOAParams,
    style: Optional[DecompositionStyle] = None,
) -> Circuit:
    """
    |+>^n followed by ``params.depth`` cost/mixer layers and a final MEASURE.

    With ``style=None`` the ZZ couplings stay as RZZ gates, otherwise each one
    is expanded with the CX or CZ implementation.
    """
    n = inst.n
    c, k = cost_coefficients(inst)
    gates: List[Gate] = [gate1(GateKind.H, q) for q in range(n)]
    for gamma, beta in zip(params.gammas, params.betas):
        for i in range(n):
            for j in range(i + 1, n):
                theta = 2 * gamma * c[i, j]
                if style is None:
                    gates.append(rzz(theta, i, j))
                else:
                    gates.extend(rzz_gates(theta, i, j, style))
        gates.extend(rz(-2 * gamma * k[i], i) for i in range(n))
        gates.extend(rx(2 * beta, i) for i in range(n))
    gates.append(measure_all(n))
    suffix = "" if style is None else f"-{DecompositionStyle(style).value}"
    return Circuit(n, tuple(gates), label=f"qaoa-n{n}-p{params.depth}{suffix}")


@dataclass
class _CostLayer:
    zz: Dict[Tuple[int, int], float]
    z: Dict[int, float]
    x: Dict[int, float]


class _Reader:
    def __init__(self, gates: Sequence[Gate]) -> None:
        self.gates = gates
        self.pos = 0

    def peek(self, offset: int = 0) -> Optional[Gate]:
        i = self.pos + offset
        return self.gates[i] if i < len(self.gates) else None

    def take(self, kind: GateKind, qubits: Optional[Tuple[int, ...]] = None) -> Gate:
        gate = self.peek()
        if gate is None or gate.kind != kind or (qubits is not None and gate.qubits != qubits):
            want = kind.value if qubits is None else f"{kind.value}{qubits}"
            raise ValueError(f"not a QAOA circuit: expected {want} at gate {self.pos}, found {gate}")
        self.pos += 1
        return gate


def _parse_qaoa(circuit: Circuit) -> Tuple[List[_CostLayer], Optional[DecompositionStyle]]:
    n = circuit.num_qubits
    reader = _Reader(circuit.gates)
    for q in range(n):
        reader.take(GateKind.H, (q,))
    layers: List[_CostLayer] = []
    detected: Optional[DecompositionStyle] = None
    while reader.peek() is not None and reader.peek().kind != GateKind.MEASURE:  # type: ignore
        layer = _CostLayer({}, {}, {})
        while True:
            head = reader.peek()
            if head is None:
                break
            if head.kind == GateKind.RZZ:
                reader.pos += 1
                a, b = head.qubits
                theta = head.angle
            elif head.kind == GateKind.CX:
                a, b = head.qubits
                reader.take(GateKind.CX, (a, b))
                theta = reader.take(GateKind.RZ, (b,)).angle
                reader.take(GateKind.CX, (a, b))
                detected = DecompositionStyle.CX_IMPL
            elif head.kind == GateKind.H and (reader.peek(1) or head).kind == GateKind.CZ:
                a, b = reader.peek(1).qubits  # type: ignore
                reader.take(GateKind.H, (b,))
                reader.take(GateKind.CZ, (a, b))
                theta = reader.take(GateKind.RX, (b,)).angle
                reader.take(GateKind.CZ, (a, b))
                reader.take(GateKind.H, (b,))
                detected = DecompositionStyle.CZ_IMPL
            else:
                break
            layer.zz[(min(a, b), max(a, b))] = theta  # type: ignore
        for q in range(n):
            layer.z[q] = reader.take(GateKind.RZ, (q,)).angle  # type: ignore
        for q in range(n):
            layer.x[q] = reader.take(GateKind.RX, (q,)).angle  # type: ignore
        missing = n * (n - 1) // 2 - len(layer.zz)
        if missing:
            raise ValueError(f"not a complete-graph QAOA layer: {missing} couplings missing")
        layers.append(layer)
    if reader.peek() is not None:
        reader.take(GateKind.MEASURE)
    return layers, detected


def zz_swap_gates(theta: float, a: int, b: int, style: DecompositionStyle) -> List[Gate]:
    """exp(-i theta/2 ZZ) followed by SWAP, fused into three two-qubit gates."""
    if DecompositionStyle(style) == DecompositionStyle.CZ_IMPL:
        return [
            gate1(GateKind.H, b),
            gate2(GateKind.CZ, a, b),
            rx(theta, b),
            gate1(GateKind.H, a),
            gate1(GateKind.H, b),
            gate2(GateKind.CZ, a, b),
            gate1(GateKind.H, a),
            gate1(GateKind.H, b),
            gate2(GateKind.CZ, a, b),
            gate1(GateKind.H, b),
        ]
    return [
        gate2(GateKind.CX, a, b),
        rz(theta, b),
        gate2(GateKind.CX, b, a),
        gate2(GateKind.CX, a, b),
    ]


def brick_layers(n: int) -> List[List[Tuple[int, int]]]:
    """Non-empty odd-even transposition layers on a chain of ``n`` qubits."""
    layers = [[(a, a + 1) for a in range(r % 2, n - 1, 2)] for r in range(n)]
    return [layer for layer in layers if layer]


def swap_network_map(
    circuit: Circuit,
    device: DeviceModel,
    style: Optional[DecompositionStyle] = None,
) -> Circuit:
    """
    Places a complete-graph QAOA circuit on the first ``n`` qubits of the chain.

    Every cost layer runs the odd-even swap network, so each logical pair meets
    on an adjacent physical pair exactly once. The last brick layer of each cost
    layer keeps the interaction but drops the SWAP. The resulting
    logical-to-physical map is stored as ``final_layout``.
    """
    n = circuit.num_qubits
    if n > device.chain_length:
        raise ChainTooShortError(
            f"{n} logical qubits need a chain of at least {n}, {device.name} has {device.chain_length}"
        )
    layers, detected = _parse_qaoa(circuit)
    block_style = DecompositionStyle(style or detected or DecompositionStyle.CX_IMPL)
    logical_at = list(range(n))
    gates: List[Gate] = [gate1(GateKind.H, q) for q in range(n)]
    bricks = brick_layers(n)
    for layer in layers:
        for physical, logical in enumerate(logical_at):
            gates.append(rz(layer.z[logical], physical))
        for r, brick in enumerate(bricks):
            last = r == len(bricks) - 1
            for a, b in brick:
                i, j = logical_at[a], logical_at[b]
                theta = layer.zz[(min(i, j), max(i, j))]
                if last:
                    gates.extend(rzz_gates(theta, a, b, block_style))
                else:
                    gates.extend(zz_swap_gates(theta, a, b, block_style))
                    logical_at[a], logical_at[b] = j, i
        for physical, logical in enumerate(logical_at):
            gates.append(rx(layer.x[logical], physical))
    if circuit.has_measure:
        gates.append(measure_all(n))
    layout = [0] * n
    for physical, logical in enumerate(logical_at):
        layout[logical] = physical
    logger.debug("swap network for %s: final layout %s", circuit.label, layout)
    return Circuit(
        n,
        tuple(gates),
        label=f"{circuit.label}-{block_style.value}-chain",
        final_layout=tuple(layout),
    )


def unpermute_counts(
    counts: Mapping[str, float], layout: Optional[Sequence[int]]
) -> Dict[str, float]:
    """Rewrites physical-order bitstrings into logical order."""
    if layout is None or list(layout) == list(range(len(layout))):
        return dict(counts)
    out: Dict[str, float] = {}
    for bits, w in counts.items():
        logical = "".join(bits[p] for p in layout)
        out[logical] = out.get(logical, 0) + w
    return out


def qaoa_statevector(diag: np.ndarray, params: QAOAParams, n: int) -> np.ndarray:
    psi = np.full(2**n, 2 ** (-n / 2), dtype=np.complex128)
    for gamma, beta in zip(params.gammas, params.betas):
        psi = psi * np.exp(-1j * gamma * diag)
        cb, sb = math.cos(beta), -1j * math.sin(beta)
        t = psi.reshape((2,) * n)
        for q in range(n):
            t = np.moveaxis(t, q, 0)
            t = np.stack([cb * t[0] + sb * t[1], sb * t[0] + cb * t[1]])
            t = np.moveaxis(t, 0, q)
        psi = t.reshape(-1)
    return psi


def qaoa_expectation(diag: np.ndarray, params: QAOAParams, n: int) -> float:
    psi = qaoa_statevector(diag, params, n)
    return float(np.real(np.vdot(psi, diag * psi)))


def grid_search_params(spec: CostSpec, resolution: int = 32) -> QAOAParams:
    """
    Depth-1 angles minimising the ideal expectation on a ``resolution`` grid
    over [0, pi) x [0, pi). Ties go to the smallest (gamma, beta).
    """
    n = spec.n
    diag = cost_diagonal(spec.c, spec.k, n)
    angles = np.pi * np.arange(resolution) / resolution
    values = np.empty((resolution, resolution))
    for a, gamma in enumerate(angles):
        for b, beta in enumerate(angles):
            values[a, b] = qaoa_expectation(diag, QAOAParams((gamma,), (beta,)), n)
    a, b = np.unravel_index(int(np.argmin(values)), values.shape)
    logger.debug(
        "grid search n=%d: gamma=%.4f beta=%.4f F=%.6f", n, angles[a], angles[b], values[a, b]
    )
    return QAOAParams((float(angles[a]),), (float(angles[b]),))
