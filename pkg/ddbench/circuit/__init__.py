# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

from .circuit import (  # noqa: F401
    Circuit,
    CircuitFormatError,
    dumps_circuit,
    loads_circuit,
    measure_all,
)
from .gates import (  # noqa: F401
    ANGLED_KINDS,
    delay,
    Gate,
    gate1,
    gate2,
    gate_matrix,
    GateKind,
    rx,
    rz,
    rzz,
    SINGLE_QUBIT_KINDS,
    TWO_QUBIT_KINDS,
)
from .unitary import (  # noqa: F401
    apply_matrix,
    equivalent_up_to_phase,
    MAX_UNITARY_QUBITS,
    MeasureInUnitaryError,
    permutation_matrix,
    TooManyQubitsError,
    unitary_of,
)
