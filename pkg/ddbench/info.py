# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.


import os
from typing import Dict

import numpy as np
import torch

from . import get_version_string
from .device import bundled_device, list_bundled_devices
from .experiments.config import NUM_WORKERS_ENV
from .passes import list_passes


def get_features_status() -> Dict[str, str]:
    features = {}
    for p in list_passes():
        features[f"{p.CATEGORY}.{p.NAME}"] = p.DESCRIPTION or "registered"
    for name in list_bundled_devices():
        device = bundled_device(name)
        features[f"device.{name}"] = (
            f"{device.chain_length} qubits, native {device.native_2q.value}"
        )
    return features


def print_info() -> None:
    features = get_features_status()
    print(f"ddbench {get_version_string()}")
    features["pytorch.version"] = torch.__version__
    features["numpy.version"] = np.__version__
    features["pytorch.num_threads"] = str(torch.get_num_threads())
    features[f"env.{NUM_WORKERS_ENV}"] = os.environ.get(NUM_WORKERS_ENV, "unset")
    for name, status in features.items():
        print("{:<50} {}".format(f"{name}:", status))


if __name__ == "__main__":
    print_info()
