# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

from .channels import (  # noqa: F401
    ChannelKind,
    completeness_residual,
    depolarizing_probability,
    kraus_channels,
    superoperator,
)
from .engine import GateStep, IdleStep, timeline  # noqa: F401
from .simulate import (  # noqa: F401
    apply_readout,
    detuning_ensemble,
    Engine,
    evolve_density_matrix,
    ideal_distribution,
    noise_config_from_dict,
    NoiseConfig,
    noisy_distribution,
    RunResult,
    sample_counts,
    ScheduleDeviceMismatchError,
    simulate_ideal,
    simulate_noisy,
)
from .trajectories import evolve_trajectories  # noqa: F401
