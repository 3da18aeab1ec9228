# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import json

import pytest

from ddbench.circuit import delay, gate1, gate2, GateKind, measure_all, rz
from ddbench.device import (
    bundled_device,
    CalibrationError,
    device_from_dict,
    device_to_dict,
    dump_device,
    gate_duration,
    list_bundled_devices,
    load_device,
    NonNativeGateError,
    resolve_device,
    save_device,
)

from .utils import make_device


def _calibration(**overrides):
    data = device_to_dict(make_device())
    data.update(overrides)
    return data


def test_bundled_devices() -> None:
    names = list_bundled_devices()
    assert "cairo-like" in names
    assert "cusco-like" in names
    cairo = bundled_device("cairo-like")
    cusco = bundled_device("cusco-like")
    assert cairo.native_2q == GateKind.CX
    assert cusco.native_2q == GateKind.ECR
    for device in (cairo, cusco):
        assert device.chain_length >= 12
    with pytest.raises(ValueError, match="available"):
        bundled_device("nope")


def test_scalar_calibration_is_broadcast() -> None:
    device = make_device(chain_length=5, f_1q=0.998, t1_ns=90_000.0)
    assert device.f_1q == (0.998,) * 5
    assert device.t1_ns == (90_000.0,) * 5
    assert device.fidelity_2q(3, 2) == 0.99
    assert set(device.f_2q) == {(0, 1), (1, 2), (2, 3), (3, 4)}


def test_default_directions() -> None:
    cx = make_device("CX", 3)
    assert cx.supports_direction(0, 1) and cx.supports_direction(1, 0)
    ecr = make_device("ECR", 3)
    assert ecr.supports_direction(0, 1) and not ecr.supports_direction(1, 0)


def test_dump_load_round_trip(tmp_path) -> None:
    device = bundled_device("cusco-like")
    path = tmp_path / "dev.json"
    save_device(device, path)
    assert load_device(path) == device
    assert device_from_dict(json.loads(dump_device(device))) == device


def test_resolve_device(tmp_path) -> None:
    device = make_device(name="custom")
    save_device(device, tmp_path / "custom.json")
    assert resolve_device("custom.json", base_dir=tmp_path) == device
    assert resolve_device(tmp_path / "custom.json") == device
    assert resolve_device("cairo-like").name == "cairo-like"


@pytest.mark.parametrize(
    "overrides,field_name",
    [
        pytest.param({"native_2q": "CZ"}, "native_2q", id="non-native-2q"),
        pytest.param({"dt_ns": 0}, "dt_ns", id="zero-dt"),
        pytest.param(
            {"coherence": {"t1_ns": 10.0, "t2_ns": 30.0}}, "coherence", id="t2-over-2t1"
        ),
        pytest.param(
            {"fidelities": {"single_qubit": 1.2, "two_qubit": 0.99, "measure": 0.98}},
            "f_1q",
            id="fidelity-above-one",
        ),
        pytest.param({"readout": {"flip": 0.7}}, "readout_flip", id="flip-too-large"),
        pytest.param(
            {"durations": {"single_pulse": 112, "MEASURE": 100}}, "durations", id="no-2q-duration"
        ),
        pytest.param(
            {"directed_pairs": [[0, 2]]}, "directed_pairs", id="non-adjacent-direction"
        ),
    ],
)
def test_calibration_errors(overrides, field_name: str) -> None:
    with pytest.raises(CalibrationError) as e:
        device_from_dict(_calibration(**overrides))
    assert e.value.field == field_name


def test_calibration_error_names_qubit() -> None:
    data = _calibration(coherence={"t1_ns": [1e5, 1e5, 10.0, 1e5], "t2_ns": 30.0})
    with pytest.raises(CalibrationError) as e:
        device_from_dict(data)
    assert e.value.qubit == 2
    assert "coherence[2]" in str(e.value)


def test_missing_key() -> None:
    data = _calibration()
    del data["coherence"]
    with pytest.raises(CalibrationError, match="coherence"):
        device_from_dict(data)


def test_ecr_device_needs_one_direction() -> None:
    data = device_to_dict(make_device("ECR", 3))
    data["directed_pairs"] = [[0, 1], [1, 0], [1, 2]]
    with pytest.raises(CalibrationError, match="exactly one direction"):
        device_from_dict(data)


def test_gate_durations() -> None:
    device = make_device("CX")
    assert gate_duration(device, rz(0.3, 0)) == 0
    assert gate_duration(device, gate1(GateKind.ID, 0)) == 0
    assert gate_duration(device, gate1(GateKind.X, 0)) == 112
    assert gate_duration(device, gate1(GateKind.SX, 0)) == 112
    assert gate_duration(device, gate2(GateKind.CX, 0, 1)) == 1312
    assert gate_duration(device, delay(77, 0)) == 77
    assert gate_duration(device, measure_all(4)) == 16000
    with pytest.raises(NonNativeGateError):
        gate_duration(device, gate2(GateKind.ECR, 0, 1))
    with pytest.raises(NonNativeGateError):
        gate_duration(device, gate1(GateKind.H, 0))


def test_two_qubit_fidelity_variant() -> None:
    device = make_device()
    variant = device.with_two_qubit_fidelity(0.985)
    assert variant.name == f"{device.name}@f2q=0.985"
    assert all(f == 0.985 for f in variant.f_2q.values())
    assert variant.f_1q == device.f_1q
