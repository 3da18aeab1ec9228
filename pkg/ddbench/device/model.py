# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import json
import logging
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .. import compute_once
from ..circuit import Gate, GateKind

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"

SINGLE_PULSE = "single_pulse"
NATIVE_TWO_QUBIT_KINDS = (GateKind.CX, GateKind.ECR)
VIRTUAL_KINDS = frozenset({GateKind.RZ, GateKind.ID})

Pair = Tuple[int, int]


class CalibrationError(ValueError):
    def __init__(
        self, field_name: str, message: str, qubit: Optional[Any] = None
    ) -> None:
        where = f"{field_name}" if qubit is None else f"{field_name}[{qubit}]"
        super().__init__(f"invalid calibration {where}: {message}")
        self.field = field_name
        self.qubit = qubit


class NonNativeGateError(ValueError):
    pass


def pair_key(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class DeviceModel:
    """
    Calibration snapshot of a linear-chain device.

    Durations are integer multiples of ``dt``; ``durations`` holds the shared
    single-pulse duration (X, SX and the X inside a Y pulse), the native
    two-qubit gate and MEASURE. RZ and ID are virtual (0 dt).
    """

    name: str
    native_2q: GateKind
    dt_ns: float
    chain_length: int
    directed_pairs: Tuple[Pair, ...]
    durations: Mapping[str, int]
    f_1q: Tuple[float, ...]
    f_2q: Mapping[Pair, float]
    f_meas: Tuple[float, ...]
    t1_ns: Tuple[float, ...]
    t2_ns: Tuple[float, ...]
    readout_flip: Tuple[float, ...]
    detuning_sigma: float = 0.0005
    source: str = ""
    _directions: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "native_2q", GateKind(self.native_2q))
        object.__setattr__(
            self, "directed_pairs", tuple((int(c), int(t)) for c, t in self.directed_pairs)
        )
        object.__setattr__(self, "_directions", frozenset(self.directed_pairs))
        self._validate()

    def _validate(self) -> None:
        n = self.chain_length
        if self.native_2q not in NATIVE_TWO_QUBIT_KINDS:
            raise CalibrationError("native_2q", f"must be CX or ECR, got {self.native_2q}")
        if not (self.dt_ns > 0 and math.isfinite(self.dt_ns)):
            raise CalibrationError("dt_ns", f"must be > 0, got {self.dt_ns}")
        if n < 1:
            raise CalibrationError("chain_length", f"must be >= 1, got {n}")
        for key in (SINGLE_PULSE, self.native_2q.value, GateKind.MEASURE.value):
            if key not in self.durations:
                raise CalibrationError("durations", f"missing entry '{key}'")
        for key, value in self.durations.items():
            if int(value) != value or value < 0:
                raise CalibrationError("durations", "must be integer dt >= 0", key)
        for name in ("f_1q", "f_meas", "t1_ns", "t2_ns", "readout_flip"):
            values = getattr(self, name)
            if len(values) != n:
                raise CalibrationError(
                    name, f"expected {n} per-qubit values, got {len(values)}"
                )
        for q in range(n):
            for name in ("f_1q", "f_meas"):
                f = getattr(self, name)[q]
                if not 0 < f <= 1:
                    raise CalibrationError(name, f"fidelity {f} outside (0, 1]", q)
            if not 0 <= self.readout_flip[q] <= 0.5:
                raise CalibrationError(
                    "readout_flip", f"{self.readout_flip[q]} outside [0, 0.5]", q
                )
            t1, t2 = self.t1_ns[q], self.t2_ns[q]
            if not (t1 > 0 and t2 > 0):
                raise CalibrationError("coherence", f"T1={t1}, T2={t2} must be > 0", q)
            if t2 > 2 * t1:
                raise CalibrationError("coherence", f"T2={t2} exceeds 2*T1={2 * t1}", q)
        for a in range(n - 1):
            key = (a, a + 1)
            if key not in self.f_2q:
                raise CalibrationError("fidelities.two_qubit", "missing pair", key)
            f = self.f_2q[key]
            if not 0 < f <= 1:
                raise CalibrationError(
                    "fidelities.two_qubit", f"fidelity {f} outside (0, 1]", key
                )
        for c, t in self.directed_pairs:
            if abs(c - t) != 1 or max(c, t) >= n:
                raise CalibrationError(
                    "directed_pairs", "not an adjacent chain pair", (c, t)
                )
        for a in range(n - 1):
            forward = (a, a + 1) in self._directions
            backward = (a + 1, a) in self._directions
            if self.native_2q == GateKind.ECR and forward == backward:
                raise CalibrationError(
                    "directed_pairs",
                    "ECR devices support exactly one direction per pair",
                    (a, a + 1),
                )
            if self.native_2q == GateKind.CX and not (forward and backward):
                raise CalibrationError(
                    "directed_pairs", "CX devices list both directions", (a, a + 1)
                )
        if not (self.detuning_sigma >= 0 and math.isfinite(self.detuning_sigma)):
            raise CalibrationError(
                "detuning_sigma", f"must be >= 0, got {self.detuning_sigma}"
            )

    @property
    def single_pulse_dt(self) -> int:
        return int(self.durations[SINGLE_PULSE])

    @property
    def native_kinds(self) -> frozenset:
        return frozenset(
            {GateKind.ID, GateKind.RZ, GateKind.SX, GateKind.X, self.native_2q}
        )

    def is_adjacent(self, a: int, b: int) -> bool:
        return abs(a - b) == 1 and max(a, b) < self.chain_length

    def supports_direction(self, control: int, target: int) -> bool:
        return (control, target) in self._directions

    def fidelity_2q(self, a: int, b: int) -> float:
        key = pair_key(a, b)
        if key not in self.f_2q:
            raise CalibrationError("fidelities.two_qubit", "missing pair", key)
        return self.f_2q[key]

    def with_two_qubit_fidelity(self, fidelity: float) -> "DeviceModel":
        return replace(
            self,
            name=f"{self.name}@f2q={fidelity:g}",
            f_2q={key: fidelity for key in self.f_2q},
        )


def gate_duration(device: DeviceModel, gate: Gate) -> int:
    kind = gate.kind
    if kind in VIRTUAL_KINDS:
        return 0
    if kind == GateKind.DELAY:
        return int(gate.delay_span)  # type: ignore
    if kind == GateKind.MEASURE:
        return int(device.durations[GateKind.MEASURE.value])
    if kind in (GateKind.X, GateKind.SX):
        return device.single_pulse_dt
    if kind == device.native_2q:
        return int(device.durations[kind.value])
    raise NonNativeGateError(
        f"{kind.value} is not native to {device.name} "
        f"(native: {sorted(k.value for k in device.native_kinds)})"
    )


def _per_qubit(value: Union[float, Sequence[float]], n: int, name: str) -> Tuple[float, ...]:
    if isinstance(value, (int, float)):
        return (float(value),) * n
    if len(value) != n:
        raise CalibrationError(name, f"expected {n} per-qubit values, got {len(value)}")
    return tuple(float(v) for v in value)


def _parse_pair(text: str) -> Pair:
    a, b = text.split("-")
    return pair_key(int(a), int(b))


def device_from_dict(data: Mapping[str, Any]) -> DeviceModel:
    required = (
        "name",
        "native_2q",
        "dt_ns",
        "chain_length",
        "durations",
        "fidelities",
        "coherence",
        "readout",
        "detuning_sigma",
    )
    for key in required:
        if key not in data:
            raise CalibrationError(key, "missing top-level key")
    n = int(data["chain_length"])
    native = GateKind(str(data["native_2q"]).upper())
    if "directed_pairs" in data:
        directed = tuple((int(c), int(t)) for c, t in data["directed_pairs"])
    elif native == GateKind.CX:
        directed = tuple(
            p for a in range(n - 1) for p in ((a, a + 1), (a + 1, a))
        )
    else:
        directed = tuple((a, a + 1) for a in range(n - 1))

    fidelities = data["fidelities"]
    two_qubit = fidelities.get("two_qubit", 1.0)
    if isinstance(two_qubit, (int, float)):
        f_2q = {(a, a + 1): float(two_qubit) for a in range(n - 1)}
    else:
        f_2q = {_parse_pair(k): float(v) for k, v in two_qubit.items()}
    coherence = data["coherence"]
    return DeviceModel(
        name=str(data["name"]),
        native_2q=native,
        dt_ns=float(data["dt_ns"]),
        chain_length=n,
        directed_pairs=directed,
        durations={str(k): int(v) for k, v in data["durations"].items()},
        f_1q=_per_qubit(fidelities.get("single_qubit", 1.0), n, "fidelities.single_qubit"),
        f_2q=f_2q,
        f_meas=_per_qubit(fidelities.get("measure", 1.0), n, "fidelities.measure"),
        t1_ns=_per_qubit(coherence["t1_ns"], n, "coherence.t1_ns"),
        t2_ns=_per_qubit(coherence["t2_ns"], n, "coherence.t2_ns"),
        readout_flip=_per_qubit(data["readout"].get("flip", 0.0), n, "readout.flip"),
        detuning_sigma=float(data["detuning_sigma"]),
        source=str(data.get("source", "")),
    )


def device_to_dict(device: DeviceModel) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "name": device.name,
        "native_2q": device.native_2q.value,
        "dt_ns": device.dt_ns,
        "chain_length": device.chain_length,
        "directed_pairs": [list(p) for p in device.directed_pairs],
        "durations": dict(device.durations),
        "fidelities": {
            "single_qubit": list(device.f_1q),
            "two_qubit": {f"{a}-{b}": f for (a, b), f in sorted(device.f_2q.items())},
            "measure": list(device.f_meas),
        },
        "coherence": {"t1_ns": list(device.t1_ns), "t2_ns": list(device.t2_ns)},
        "readout": {"flip": list(device.readout_flip)},
        "detuning_sigma": device.detuning_sigma,
    }
    if device.source:
        out["source"] = device.source
    return out


def dump_device(device: DeviceModel) -> str:
    return json.dumps(device_to_dict(device), indent=2)


def save_device(device: DeviceModel, path: Union[str, os.PathLike]) -> None:
    Path(path).write_text(dump_device(device) + "\n")


def load_device(path: Union[str, os.PathLike]) -> DeviceModel:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise CalibrationError(str(path), f"not valid JSON ({e})") from e
    device = device_from_dict(data)
    logger.debug("Loaded device %s from %s", device.name, path)
    return device


@compute_once
def list_bundled_devices() -> List[str]:
    return sorted(p.stem.replace("_", "-") for p in DATA_DIR.glob("*.json"))


def bundled_device(name: str) -> DeviceModel:
    path = DATA_DIR / f"{name.replace('-', '_')}.json"
    if not path.is_file():
        raise ValueError(
            f"unknown bundled device '{name}', available: {list_bundled_devices()}"
        )
    return load_device(path)


def resolve_device(ref: Union[str, os.PathLike], base_dir: Optional[Path] = None) -> DeviceModel:
    """Accepts a bundled device name or a calibration file path."""
    if isinstance(ref, str) and ref in list_bundled_devices():
        return bundled_device(ref)
    path = Path(ref)
    if not path.is_absolute() and base_dir is not None:
        path = base_dir / path
    return load_device(path)
