# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

from typing import Sequence

import numpy as np

from .circuit import Circuit
from .gates import gate_matrix, GateKind

MAX_UNITARY_QUBITS = 10


class TooManyQubitsError(ValueError):
    def __init__(self, num_qubits: int, limit: int, what: str = "unitary_of") -> None:
        super().__init__(f"{what} supports at most {limit} qubits, got {num_qubits}")
        self.num_qubits = num_qubits
        self.limit = limit


class MeasureInUnitaryError(ValueError):
    pass


def apply_matrix(
    tensor: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], num_qubits: int
) -> np.ndarray:
    """
    Left-multiplies ``matrix`` onto the ``qubits`` axes of ``tensor``.

    ``tensor`` has shape ``(2**num_qubits, ...)``; the leading index is read
    with qubit 0 as the most significant bit.
    """
    k = len(qubits)
    rest = tensor.shape[1:]
    t = tensor.reshape((2,) * num_qubits + rest)
    t = np.moveaxis(t, list(qubits), list(range(k)))
    moved_shape = t.shape
    t = matrix @ t.reshape(2**k, -1)
    t = np.moveaxis(t.reshape(moved_shape), list(range(k)), list(qubits))
    return t.reshape((2**num_qubits,) + rest)


def unitary_of(circuit: Circuit) -> np.ndarray:
    n = circuit.num_qubits
    if n > MAX_UNITARY_QUBITS:
        raise TooManyQubitsError(n, MAX_UNITARY_QUBITS)
    u = np.eye(2**n, dtype=np.complex128)
    for gate in circuit.gates:
        if gate.kind == GateKind.MEASURE:
            raise MeasureInUnitaryError(
                "MEASURE found in a unitary context, strip it with without_measure()"
            )
        if gate.kind in (GateKind.DELAY, GateKind.ID):
            continue
        u = apply_matrix(u, gate_matrix(gate), gate.qubits, n)
    return u


def equivalent_up_to_phase(U: np.ndarray, V: np.ndarray, tol: float = 1e-9) -> bool:
    U = np.asarray(U)
    V = np.asarray(V)
    if U.shape != V.shape:
        raise ValueError(f"dimension mismatch: {U.shape} vs {V.shape}")
    # the phase is read off the entry where V is largest
    idx = np.unravel_index(np.argmax(np.abs(V)), V.shape)
    if abs(V[idx]) < tol:
        return bool(np.max(np.abs(U)) <= tol)
    ratio = U[idx] / V[idx]
    if abs(ratio) < tol:
        return False
    c = ratio / abs(ratio)
    return bool(np.max(np.abs(U - c * V)) <= tol)


def permutation_matrix(layout: Sequence[int]) -> np.ndarray:
    """
    Maps logical basis states to physical ones: bit ``l`` of the logical index
    lands on bit ``layout[l]`` of the physical index.
    """
    n = len(layout)
    dim = 2**n
    p = np.zeros((dim, dim), dtype=np.complex128)
    for logical in range(dim):
        physical = 0
        for l_qubit, p_qubit in enumerate(layout):
            bit = (logical >> (n - 1 - l_qubit)) & 1
            physical |= bit << (n - 1 - p_qubit)
        p[physical, logical] = 1.0
    return p
