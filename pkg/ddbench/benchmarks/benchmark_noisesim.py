# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import functools
from typing import Iterator

from torch.utils import benchmark

from ddbench.benchmarks.utils import benchmark_main_helper, product_dict
from ddbench.device import bundled_device
from ddbench.noisesim import NoiseConfig, noisy_distribution
from ddbench.passes import (
    alap_schedule,
    DDSequence,
    DecompositionStyle,
    insert_dd,
    lower_to_basis,
    optimize,
    OptPreset,
)
from ddbench.qaoa import build_qaoa, QAOAParams, random_instance, swap_network_map

DEVICE = "cairo-like"
PARAMS = QAOAParams((0.4,), (0.3,))

CASES = list(
    product_dict(
        n=[4, 6, 8],
        sequence=[DDSequence.NONE, DDSequence.CPMG, DDSequence.XY4],
        samples=[1, 16],
    )
) + list(
    product_dict(
        n=[11],
        sequence=[DDSequence.NONE, DDSequence.XY4],
        samples=[64],
    )
)


def noisy_qaoa(n: int, sequence: DDSequence, samples: int) -> Iterator[benchmark.Timer]:
    device = bundled_device(DEVICE)
    circuit = build_qaoa(random_instance(n, seed=n), PARAMS, DecompositionStyle.CX_IMPL)
    circuit = swap_network_map(circuit, device)
    circuit = optimize(lower_to_basis(circuit, device), OptPreset.OPT3)
    schedule = alap_schedule(circuit, device)
    if sequence != DDSequence.NONE:
        schedule = insert_dd(schedule, sequence, device)
    noise = NoiseConfig(detuning_samples=samples, trajectories=samples)
    yield benchmark.Timer(
        stmt="fn()",
        globals={"fn": functools.partial(noisy_distribution, schedule, device, noise)},
        label="noisy_distribution",
        sub_label=f"n={n} S={samples} instrs={len(schedule)}",
        description=sequence.value,
    )


if __name__ == "__main__":
    benchmark_main_helper(noisy_qaoa, CASES)
