# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import hashlib
import json
import logging
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from ..device import list_bundled_devices
from ..noisesim import noise_config_from_dict, NoiseConfig
from ..passes import DDSequence, DecompositionStyle, OptPreset

logger = logging.getLogger(__name__)

MIN_QUBITS = 3
MAX_QUBITS = 12
NUM_WORKERS_ENV = "DDBENCH_NUM_WORKERS"


class ConfigError(ValueError):
    pass


def _enum_tuple(enum_cls, values, name: str) -> tuple:
    try:
        return tuple(enum_cls(str(v).upper()) for v in values)
    except ValueError as e:
        allowed = [m.value for m in enum_cls]
        raise ConfigError(f"{name}: {e}, allowed values are {allowed}") from None


@dataclass(frozen=True)
class ExperimentConfig:
    devices: Tuple[str, ...]
    qubit_range: Tuple[int, int]
    styles: Tuple[DecompositionStyle, ...] = (DecompositionStyle.CX_IMPL,)
    sequences: Tuple[DDSequence, ...] = (DDSequence.CPMG,)
    presets: Tuple[OptPreset, ...] = (OptPreset.OPT3,)
    shots: int = 30000
    instance_seed: int = 0
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    output_dir: str = "results"
    instances: int = 1
    two_qubit_fidelities: Tuple[float, ...] = ()
    grid_resolution: int = 32
    num_workers: int = 1
    # figures of merit from exact distributions instead of sampled counts
    exact_metrics: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "devices", tuple(str(d) for d in self.devices))
        object.__setattr__(self, "qubit_range", tuple(int(v) for v in self.qubit_range))
        object.__setattr__(
            self, "styles", _enum_tuple(DecompositionStyle, self.styles, "styles")
        )
        object.__setattr__(
            self, "sequences", _enum_tuple(DDSequence, self.sequences, "sequences")
        )
        object.__setattr__(self, "presets", _enum_tuple(OptPreset, self.presets, "presets"))
        object.__setattr__(
            self, "two_qubit_fidelities", tuple(float(f) for f in self.two_qubit_fidelities)
        )
        for name in ("devices", "styles", "sequences", "presets"):
            if not getattr(self, name):
                raise ConfigError(f"{name} must not be empty")
        if len(self.qubit_range) != 2:
            raise ConfigError(f"qubit_range must be [min, max], got {self.qubit_range}")
        lo, hi = self.qubit_range
        if not MIN_QUBITS <= lo <= hi <= MAX_QUBITS:
            raise ConfigError(
                f"qubit_range {list(self.qubit_range)} must satisfy {MIN_QUBITS} <= min <= max <= {MAX_QUBITS}"
            )
        if self.instance_seed < 0 or self.noise.rng_seed < 0:
            raise ConfigError("instance_seed and noise.rng_seed must be >= 0")
        if self.shots < 1:
            raise ConfigError(f"shots must be >= 1, got {self.shots}")
        if self.instances < 1:
            raise ConfigError(f"instances must be >= 1, got {self.instances}")
        if self.grid_resolution < 1:
            raise ConfigError(f"grid_resolution must be >= 1, got {self.grid_resolution}")
        if self.num_workers < 1:
            raise ConfigError(f"num_workers must be >= 1, got {self.num_workers}")
        for f in self.two_qubit_fidelities:
            if not 0 < f <= 1:
                raise ConfigError(f"two-qubit fidelity {f} outside (0, 1]")

    @property
    def qubit_counts(self) -> Tuple[int, ...]:
        lo, hi = self.qubit_range
        return tuple(range(lo, hi + 1))

    @property
    def dd_sequences(self) -> Tuple[DDSequence, ...]:
        """Requested sequences without the implicit NONE baseline."""
        return tuple(s for s in dict.fromkeys(self.sequences) if s != DDSequence.NONE)

    def effective_num_workers(self) -> int:
        value = os.environ.get(NUM_WORKERS_ENV)
        if value is None:
            return self.num_workers
        try:
            workers = int(value)
        except ValueError:
            raise ConfigError(f"{NUM_WORKERS_ENV}={value!r} is not an integer") from None
        if workers < 1:
            raise ConfigError(f"{NUM_WORKERS_ENV} must be >= 1, got {workers}")
        return workers


def config_to_dict(config: ExperimentConfig) -> Dict[str, Any]:
    return {
        "devices": list(config.devices),
        "qubit_range": list(config.qubit_range),
        "styles": [s.value for s in config.styles],
        "sequences": [s.value for s in config.sequences],
        "presets": [p.value for p in config.presets],
        "shots": config.shots,
        "instance_seed": config.instance_seed,
        "noise": config.noise.to_dict(),
        "output_dir": config.output_dir,
        "instances": config.instances,
        "two_qubit_fidelities": list(config.two_qubit_fidelities),
        "grid_resolution": config.grid_resolution,
        "num_workers": config.num_workers,
        "exact_metrics": config.exact_metrics,
    }


def config_hash(config: ExperimentConfig) -> str:
    """sha256 over the canonical JSON form, leaving out where and how fast it runs."""
    data = config_to_dict(config)
    data.pop("num_workers")
    data.pop("output_dir")
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _resolve(ref: str, base_dir: Optional[Path]) -> str:
    if base_dir is None or ref in list_bundled_devices() or Path(ref).is_absolute():
        return ref
    return str(base_dir / ref)


def config_from_dict(data: Mapping[str, Any], base_dir: Optional[Path] = None) -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    for key in ("devices", "qubit_range"):
        if key not in data:
            raise ConfigError(f"missing required key '{key}'")
    kwargs = dict(data)
    try:
        kwargs["noise"] = noise_config_from_dict(data.get("noise", {}))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"noise: {e}") from e
    kwargs["devices"] = tuple(_resolve(str(d), base_dir) for d in data["devices"])
    if "output_dir" in data:
        kwargs["output_dir"] = _resolve(str(data["output_dir"]), base_dir)
    try:
        return ExperimentConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e


def load_config(path: Union[str, os.PathLike]) -> ExperimentConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file {path} not found") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from e
    config = config_from_dict(data, base_dir=path.resolve().parent)
    logger.info("Loaded config %s (sha256 %s)", path, config_hash(config)[:12])
    return config


def with_output_dir(config: ExperimentConfig, output_dir: Union[str, os.PathLike]) -> ExperimentConfig:
    return replace(config, output_dir=str(output_dir))
