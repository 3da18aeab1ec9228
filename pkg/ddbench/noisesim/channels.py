# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import enum
import functools
import itertools
import math
from typing import List, Sequence

import numpy as np
import torch

_PAULIS = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


class ChannelKind(str, enum.Enum):
    AD = "AD"
    PD = "PD"
    DEPOL1 = "DEPOL1"
    DEPOL2 = "DEPOL2"


def _check_probability(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"channel probability must be in [0, 1], got {p}")


@functools.lru_cache(maxsize=None)
def _pauli_basis(num_qubits: int) -> List[np.ndarray]:
    out = []
    for combo in itertools.product(_PAULIS, repeat=num_qubits):
        m = np.ones((1, 1), dtype=np.complex128)
        for p in combo:
            m = np.kron(m, p)
        out.append(m)
    return out


def kraus_channels(kind: ChannelKind, p: float) -> List[np.ndarray]:
    """
    Kraus operators of amplitude damping, pure dephasing, or the depolarizing
    channel (1 - p) rho + p I/d on one or two qubits.
    """
    _check_probability(p)
    kind = ChannelKind(kind)
    if kind == ChannelKind.AD:
        return [
            np.array([[1, 0], [0, math.sqrt(1 - p)]], dtype=np.complex128),
            np.array([[0, math.sqrt(p)], [0, 0]], dtype=np.complex128),
        ]
    if kind == ChannelKind.PD:
        return [
            np.array([[1, 0], [0, math.sqrt(1 - p)]], dtype=np.complex128),
            np.array([[0, 0], [0, math.sqrt(p)]], dtype=np.complex128),
        ]
    num_qubits = 1 if kind == ChannelKind.DEPOL1 else 2
    d = 2**num_qubits
    paulis = _pauli_basis(num_qubits)
    ops = [math.sqrt(1 - p + p / d**2) * paulis[0]]
    ops.extend(math.sqrt(p / d**2) * pauli for pauli in paulis[1:])
    return ops


def depolarizing_probability(fidelity: float, dim: int) -> float:
    """
    Depolarizing strength whose average gate fidelity is ``fidelity``.

    The channel (1 - p) rho + p I/d has average fidelity 1 - p (d - 1)/d.
    """
    if not 0 < fidelity <= 1:
        raise ValueError(f"fidelity must be in (0, 1], got {fidelity}")
    return dim * (1 - fidelity) / (dim - 1)


def amplitude_damping_probability(tau_ns: float, t1_ns: float) -> float:
    return -math.expm1(-tau_ns / t1_ns)


def dephasing_probability(tau_ns: float, t1_ns: float, t2_ns: float) -> float:
    rate = 1 / t2_ns - 1 / (2 * t1_ns)
    return max(0.0, -math.expm1(-2 * tau_ns * rate))


def superoperator(ops: Sequence[np.ndarray]) -> np.ndarray:
    """sum_k K ⊗ conj(K), acting on row-major vec(rho)."""
    dim = ops[0].shape[0]
    out = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for k in ops:
        out += np.kron(k, k.conj())
    return out


def unitary_superoperator(u: np.ndarray) -> np.ndarray:
    return np.kron(u, u.conj())


def completeness_residual(ops: Sequence[np.ndarray]) -> float:
    dim = ops[0].shape[0]
    total = sum(k.conj().T @ k for k in ops)
    return float(np.max(np.abs(total - np.eye(dim))))


def rz_phase_superoperators(phases: torch.Tensor) -> torch.Tensor:
    """Batched superoperators of RZ(phase), shape (S, 4, 4)."""
    phase = 1j * phases.to(torch.complex128)
    one = torch.ones_like(phase)
    diag = torch.stack([one, torch.exp(-phase), torch.exp(phase), one], dim=-1)
    return torch.diag_embed(diag)
