# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import math
import random
from typing import List, Optional

import numpy as np

from ddbench.circuit import (
    Circuit,
    Gate,
    gate1,
    gate2,
    GateKind,
    rx,
    rz,
    rzz,
    unitary_of,
)
from ddbench.device import device_from_dict, DeviceModel

ONE_QUBIT_KINDS = [GateKind.X, GateKind.SX, GateKind.H, GateKind.Y]


def assert_equivalent(
    out: np.ndarray, ref: np.ndarray, msg: str = "failed", atol: float = 1e-9
) -> None:
    """Unitaries equal up to a global phase, with the worst entry in the message."""
    assert out.shape == ref.shape, f"Shape: {out.shape} (expected: {ref.shape})"
    idx = np.unravel_index(np.argmax(np.abs(ref)), ref.shape)
    assert abs(out[idx]) > atol, f"{msg}: out vanishes at {idx} where ref={ref[idx]}"
    phase = out[idx] / ref[idx]
    phase /= abs(phase)
    diff = np.abs(out - phase * ref)
    worst = np.unravel_index(int(np.argmax(diff)), diff.shape)
    assert diff[worst] <= atol, (
        f"{msg}: out={out[worst]} and ref={phase * ref[worst]} (diff={diff[worst]})"
        f" at {worst} of shape {out.shape} / atol={atol}"
    )


def assert_circuits_equivalent(a: Circuit, b: Circuit, msg: str = "failed") -> None:
    assert_equivalent(
        unitary_of(a.without_measure()), unitary_of(b.without_measure()), msg=msg
    )


def random_angle(rng: random.Random) -> float:
    return rng.uniform(-2 * math.pi, 2 * math.pi)


def random_circuit(
    num_qubits: int,
    num_gates: int,
    seed: int,
    two_qubit_kinds: Optional[List[GateKind]] = None,
    adjacent_only: bool = True,
) -> Circuit:
    """Random mixture of fixed, angled and two-qubit gates; no MEASURE."""
    rng = random.Random(seed)
    two_qubit_kinds = two_qubit_kinds or [GateKind.CX, GateKind.CZ, GateKind.RZZ]
    gates: List[Gate] = []
    for _ in range(num_gates):
        choice = rng.random()
        if num_qubits > 1 and choice < 0.35:
            if adjacent_only:
                a = rng.randrange(num_qubits - 1)
                pair = (a, a + 1) if rng.random() < 0.5 else (a + 1, a)
            else:
                pair = tuple(rng.sample(range(num_qubits), 2))
            kind = rng.choice(two_qubit_kinds)
            if kind == GateKind.RZZ:
                gates.append(rzz(random_angle(rng), *pair))
            else:
                gates.append(gate2(kind, *pair))
        elif choice < 0.55:
            gates.append(rz(random_angle(rng), rng.randrange(num_qubits)))
        elif choice < 0.7:
            gates.append(rx(random_angle(rng), rng.randrange(num_qubits)))
        else:
            gates.append(gate1(rng.choice(ONE_QUBIT_KINDS), rng.randrange(num_qubits)))
    return Circuit(num_qubits, tuple(gates), label=f"random-{seed}")


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def make_device(
    native_2q: str = "CX",
    chain_length: int = 4,
    *,
    name: Optional[str] = None,
    f_1q: float = 0.999,
    f_2q: float = 0.99,
    f_meas: float = 0.98,
    t1_ns: float = 100_000.0,
    t2_ns: float = 80_000.0,
    readout: float = 0.0,
    detuning_sigma: float = 0.0,
    single_pulse: int = 112,
    two_qubit: int = 1312,
    measure: int = 16000,
    dt_ns: float = 2 / 9,
) -> DeviceModel:
    """Small synthetic chain device; every field can be overridden."""
    return device_from_dict(
        {
            "name": name or f"test-{native_2q.lower()}-{chain_length}",
            "native_2q": native_2q,
            "dt_ns": dt_ns,
            "chain_length": chain_length,
            "durations": {
                "single_pulse": single_pulse,
                native_2q: two_qubit,
                "MEASURE": measure,
            },
            "fidelities": {
                "single_qubit": f_1q,
                "two_qubit": f_2q,
                "measure": f_meas,
            },
            "coherence": {"t1_ns": t1_ns, "t2_ns": t2_ns},
            "readout": {"flip": readout},
            "detuning_sigma": detuning_sigma,
        }
    )


def ideal_device(native_2q: str = "CX", chain_length: int = 4, **kwargs) -> DeviceModel:
    """A device whose every fidelity is 1, for noiseless comparisons."""
    kwargs.setdefault("f_1q", 1.0)
    kwargs.setdefault("f_2q", 1.0)
    kwargs.setdefault("f_meas", 1.0)
    return make_device(native_2q, chain_length, **kwargs)
