# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

from .model import (  # noqa: F401
    bundled_device,
    CalibrationError,
    device_from_dict,
    device_to_dict,
    DeviceModel,
    dump_device,
    gate_duration,
    list_bundled_devices,
    load_device,
    NonNativeGateError,
    pair_key,
    resolve_device,
    save_device,
    SINGLE_PULSE,
)
