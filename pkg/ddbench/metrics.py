# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Sequence, Tuple

from .circuit import Circuit, GateKind
from .device import CalibrationError, DeviceModel, NonNativeGateError

DELTA_TOL = 1e-12


class ZeroBaselineError(ValueError):
    pass


def _qubit_fidelity(values: Sequence[float], field_name: str, q: int) -> float:
    if q >= len(values):
        raise CalibrationError(field_name, "no calibration entry", q)
    return values[q]


def circuit_fidelity(circuit: Circuit, device: DeviceModel) -> float:
    """Product of calibrated gate and measurement fidelities; virtual gates count 1."""
    fq = 1.0
    for gate in circuit.gates:
        kind = gate.kind
        if kind in (GateKind.RZ, GateKind.ID, GateKind.DELAY):
            continue
        if kind in (GateKind.X, GateKind.SX):
            fq *= _qubit_fidelity(device.f_1q, "fidelities.single_qubit", gate.qubits[0])
        elif kind == device.native_2q:
            fq *= device.fidelity_2q(*gate.qubits)
        elif kind == GateKind.MEASURE:
            for q in gate.qubits:
                fq *= _qubit_fidelity(device.f_meas, "fidelities.measure", q)
        else:
            raise NonNativeGateError(f"{gate} has no calibrated fidelity on {device.name}")
    return fq


def normalized_metrics(r_eps: float, p_eps: float, r0: float, p0: float) -> Tuple[float, float]:
    if r0 == 0 or p0 == 0:
        raise ZeroBaselineError(f"noise-free baseline must be non-zero, got r0={r0}, p0={p0}")
    return r_eps / r0, p_eps / p0


def dd_deltas(nar_b: float, nar_dd: float, nsp_b: float, nsp_dd: float) -> Tuple[float, float]:
    return nar_dd - nar_b, nsp_dd - nsp_b


def emsr(deltas: Sequence[float]) -> float:
    """Share (in %) of trials where DD strictly improved the metric."""
    if len(deltas) == 0:
        raise ValueError("emsr needs at least one delta")
    return 100.0 * sum(1 for d in deltas if d > 0) / len(deltas)


@dataclass(frozen=True)
class MetricsRecord:
    nar_b: float
    nar_dd: float
    nsp_b: float
    nsp_dd: float
    delta_nar: float
    delta_nsp: float
    fq: float
    log_tau: float
    n_qubits: int
    device: str = ""
    style: str = ""
    sequence: str = ""
    preset: str = ""
    instance: int = 0

    def __post_init__(self) -> None:
        if abs(self.delta_nar - (self.nar_dd - self.nar_b)) > DELTA_TOL:
            raise ValueError(
                f"delta_nar={self.delta_nar} != nar_dd - nar_b={self.nar_dd - self.nar_b}"
            )
        if abs(self.delta_nsp - (self.nsp_dd - self.nsp_b)) > DELTA_TOL:
            raise ValueError(
                f"delta_nsp={self.delta_nsp} != nsp_dd - nsp_b={self.nsp_dd - self.nsp_b}"
            )
        if not 0 < self.fq <= 1:
            raise ValueError(f"circuit fidelity {self.fq} outside (0, 1]")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def metrics_record(
    *,
    r_b: float,
    p_b: float,
    r_dd: float,
    p_dd: float,
    r0: float,
    p0: float,
    fq: float,
    tau_dt: int,
    n_qubits: int,
    **labels: Any,
) -> MetricsRecord:
    nar_b, nsp_b = normalized_metrics(r_b, p_b, r0, p0)
    nar_dd, nsp_dd = normalized_metrics(r_dd, p_dd, r0, p0)
    delta_nar, delta_nsp = dd_deltas(nar_b, nar_dd, nsp_b, nsp_dd)
    return MetricsRecord(
        nar_b=nar_b,
        nar_dd=nar_dd,
        nsp_b=nsp_b,
        nsp_dd=nsp_dd,
        delta_nar=delta_nar,
        delta_nsp=delta_nsp,
        fq=fq,
        log_tau=math.log(tau_dt) if tau_dt > 0 else 0.0,
        n_qubits=n_qubits,
        **labels,
    )
