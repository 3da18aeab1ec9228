# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

from .common import (  # noqa: F401
    BasePass,
    format_not_supported_reasons,
    get_pass,
    list_passes,
    PASSES_REGISTRY,
    register_pass,
    run_priority_list,
)
from .dd import dd_delays, DDSequence, DDSequenceSpec, get_sequence, insert_dd  # noqa: F401
from .decompose import (  # noqa: F401
    cx_as_ecr,
    DecompositionStyle,
    ecr_as_cx,
    euler_zyz,
    lower_to_basis,
    NonAdjacentPairError,
    reverse_cx,
    rzz_as_cx,
    rzz_as_cz,
    rzz_gates,
    synthesize_1q,
    TwoQubitLowering,
    UnsupportedDirectionError,
    wrap_angle,
)
from .optimize import optimize, OptimizationPreset, OptPreset  # noqa: F401
from .scheduling import (  # noqa: F401
    alap_schedule,
    dump_schedule,
    idle_windows,
    IdleWindow,
    occupied_intervals,
    Schedule,
    schedule_to_circuit,
    TimedInstruction,
)
