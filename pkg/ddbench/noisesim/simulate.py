# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import enum
import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import torch

from ..circuit import Circuit, gate_matrix, GateKind, TooManyQubitsError
from ..device import DeviceModel
from ..metrics import circuit_fidelity
from ..passes import Schedule, schedule_to_circuit
from ..qaoa import approximation_ratio, CostSpec, expectation, success_probability
from .channels import rz_phase_superoperators
from .engine import (
    apply_operator,
    apply_superoperator,
    decay_superoperator,
    DTYPE,
    gate_error_probability,
    gate_superoperator,
    GateStep,
    IdleStep,
    initial_density_matrix,
    initial_statevector,
    timeline,
)
from .trajectories import evolve_trajectories

logger = logging.getLogger(__name__)

MAX_IDEAL_QUBITS = 12
MAX_DENSITY_MATRIX_QUBITS = 10
MAX_TRAJECTORY_QUBITS = 12

StepCallback = Callable[[Union[IdleStep, GateStep], torch.Tensor], None]


class ScheduleDeviceMismatchError(ValueError):
    pass


class Engine(str, enum.Enum):
    AUTO = "auto"
    DENSITY_MATRIX = "density_matrix"
    TRAJECTORIES = "trajectories"


@dataclass(frozen=True)
class NoiseConfig:
    enable_t1t2: bool = True
    enable_detuning: bool = True
    detuning_samples: int = 16
    enable_gate_error: bool = True
    enable_readout: bool = True
    rng_seed: int = 0
    # per-qubit rad/dt, replaces the sampled ensemble when set
    fixed_detuning: Optional[Tuple[float, ...]] = None
    engine: Engine = Engine.AUTO
    trajectories: int = 256

    def __post_init__(self) -> None:
        object.__setattr__(self, "engine", Engine(self.engine))
        if self.fixed_detuning is not None:
            object.__setattr__(
                self, "fixed_detuning", tuple(float(d) for d in self.fixed_detuning)
            )
        if self.enable_detuning and self.detuning_samples < 1:
            raise ValueError(
                f"detuning_samples must be >= 1 when detuning is enabled, got {self.detuning_samples}"
            )
        if self.trajectories < 1:
            raise ValueError(f"trajectories must be >= 1, got {self.trajectories}")

    @classmethod
    def noiseless(cls, **overrides: Any) -> "NoiseConfig":
        flags = dict(
            enable_t1t2=False,
            enable_detuning=False,
            enable_gate_error=False,
            enable_readout=False,
        )
        flags.update(overrides)
        return cls(**flags)  # type: ignore

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["engine"] = self.engine.value
        if self.fixed_detuning is not None:
            out["fixed_detuning"] = list(self.fixed_detuning)
        return out


def noise_config_from_dict(data: Mapping[str, Any]) -> NoiseConfig:
    known = set(NoiseConfig.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown noise settings {sorted(unknown)}")
    return NoiseConfig(**data)


@dataclass(frozen=True)
class RunResult:
    counts: Dict[str, int]
    shots: int
    tau_dt: int
    fq: float
    F: Optional[float] = None
    r: Optional[float] = None
    sp: Optional[float] = None
    engine: str = Engine.DENSITY_MATRIX.value
    detuning_samples: int = 1
    probabilities: np.ndarray = field(default=None, repr=False, compare=False)  # type: ignore

    def __post_init__(self) -> None:
        total = sum(self.counts.values())
        if total != self.shots:
            raise ValueError(f"counts sum to {total}, expected {self.shots} shots")
        if self.sp is not None and not 0.0 <= self.sp <= 1.0:
            raise ValueError(f"success probability {self.sp} outside [0, 1]")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "counts": dict(sorted(self.counts.items())),
            "shots": self.shots,
            "F": self.F,
            "r": self.r,
            "sp": self.sp,
            "tau_dt": self.tau_dt,
            "fq": self.fq,
            "engine": self.engine,
            "detuning_samples": self.detuning_samples,
        }


def to_logical_order(probs: np.ndarray, layout: Optional[Sequence[int]]) -> np.ndarray:
    """Reorders a physical-order distribution so bit ``l`` is logical qubit ``l``."""
    if layout is None:
        return probs
    n = len(layout)
    return np.transpose(probs.reshape((2,) * n), list(layout)).reshape(-1)


def apply_readout(probs: np.ndarray, flips: Sequence[float]) -> np.ndarray:
    n = len(flips)
    t = probs.reshape((2,) * n)
    for q, e in enumerate(flips):
        if e == 0:
            continue
        t = np.moveaxis(t, q, 0)
        t = np.stack([(1 - e) * t[0] + e * t[1], e * t[0] + (1 - e) * t[1]])
        t = np.moveaxis(t, 0, q)
    return t.reshape(-1)


def sample_counts(probs: np.ndarray, shots: int, seed: int) -> Dict[str, int]:
    n = int(round(np.log2(len(probs))))
    p = np.clip(np.real(probs), 0.0, None)
    p = p / p.sum()
    draws = np.random.default_rng(seed).multinomial(shots, p)
    return {format(int(i), f"0{n}b"): int(draws[i]) for i in np.flatnonzero(draws)}


def ideal_distribution(circuit: Circuit) -> np.ndarray:
    """Exact output distribution in logical bit order; DELAY and MEASURE are no-ops."""
    n = circuit.num_qubits
    if n > MAX_IDEAL_QUBITS:
        raise TooManyQubitsError(n, MAX_IDEAL_QUBITS, "simulate_ideal")
    psi = initial_statevector(n, 1)
    for gate in circuit.gates:
        if gate.kind in (GateKind.DELAY, GateKind.ID, GateKind.MEASURE):
            continue
        op = torch.from_numpy(gate_matrix(gate)).to(DTYPE)
        psi = apply_operator(psi, op, gate.qubits, n)
    probs = psi[0].abs().pow(2).numpy()
    return to_logical_order(probs, circuit.final_layout)


def simulate_ideal(circuit: Circuit, shots: int, seed: int) -> Dict[str, int]:
    return sample_counts(ideal_distribution(circuit), shots, seed)


def detuning_ensemble(noise: NoiseConfig, device: DeviceModel, num_qubits: int, samples: int) -> torch.Tensor:
    """Per-sample, per-qubit static detuning in rad/dt, shape (samples, n)."""
    if not noise.enable_detuning:
        return torch.zeros((1, num_qubits), dtype=torch.float64)
    if noise.fixed_detuning is not None:
        if len(noise.fixed_detuning) != num_qubits:
            raise ValueError(
                f"fixed_detuning has {len(noise.fixed_detuning)} entries for {num_qubits} qubits"
            )
        return torch.tensor([noise.fixed_detuning], dtype=torch.float64)
    rng = np.random.default_rng(noise.rng_seed)
    draws = rng.normal(0.0, device.detuning_sigma, size=(samples, num_qubits))
    return torch.from_numpy(draws)


def check_schedule(schedule: Schedule, device: DeviceModel) -> None:
    if schedule.device_name != device.name:
        raise ScheduleDeviceMismatchError(
            f"schedule was built for {schedule.device_name}, not {device.name}"
        )
    if schedule.num_qubits > device.chain_length:
        raise ScheduleDeviceMismatchError(
            f"{schedule.num_qubits}-qubit schedule on a {device.chain_length}-qubit chain"
        )


def evolve_density_matrix(
    schedule: Schedule,
    device: DeviceModel,
    noise: NoiseConfig,
    detunings: torch.Tensor,
    on_step: Optional[StepCallback] = None,
) -> torch.Tensor:
    """
    Batched density-matrix evolution, one batch entry per detuning sample.

    Each gate applies its unitary and depolarizing error as one superoperator;
    each idle stretch applies RZ(delta * span), amplitude damping and
    dephasing as one batched superoperator.
    """
    n = schedule.num_qubits
    if n > MAX_DENSITY_MATRIX_QUBITS:
        raise TooManyQubitsError(n, MAX_DENSITY_MATRIX_QUBITS, "density-matrix engine")
    check_schedule(schedule, device)
    rho = initial_density_matrix(n, detunings.shape[0])
    for step in timeline(schedule):
        if isinstance(step, GateStep):
            gate = step.gate
            p = gate_error_probability(gate, device) if noise.enable_gate_error else 0.0
            rho = apply_superoperator(rho, gate_superoperator(gate, p), gate.qubits, n)
        else:
            q = step.qubit
            superop = None
            if noise.enable_t1t2:
                superop = decay_superoperator(
                    step.span_dt, device.dt_ns, device.t1_ns[q], device.t2_ns[q]
                )
            phase = detunings[:, q] * step.span_dt
            if bool((phase != 0).any()):
                rz = rz_phase_superoperators(phase)
                superop = rz if superop is None else torch.matmul(superop, rz)
            if superop is None:
                continue
            rho = apply_superoperator(rho, superop, (q,), n)
        if on_step is not None:
            on_step(step, rho)
    return rho


def noisy_distribution(
    schedule: Schedule,
    device: DeviceModel,
    noise: NoiseConfig,
    on_step: Optional[StepCallback] = None,
) -> Tuple[np.ndarray, Engine, int]:
    """
    Exact mixed output distribution in logical bit order with readout error
    applied, plus the engine used and the number of averaged samples.
    """
    check_schedule(schedule, device)
    n = schedule.num_qubits
    engine = noise.engine
    if engine == Engine.AUTO:
        engine = Engine.DENSITY_MATRIX if n <= MAX_DENSITY_MATRIX_QUBITS else Engine.TRAJECTORIES
    if engine == Engine.DENSITY_MATRIX:
        detunings = detuning_ensemble(noise, device, n, noise.detuning_samples)
        rho = evolve_density_matrix(schedule, device, noise, detunings, on_step)
        probs = torch.diagonal(rho, dim1=-2, dim2=-1).real.mean(dim=0).numpy()
        samples = detunings.shape[0]
    else:
        if n > MAX_TRAJECTORY_QUBITS:
            raise TooManyQubitsError(n, MAX_TRAJECTORY_QUBITS, "trajectory engine")
        detunings = detuning_ensemble(noise, device, n, noise.trajectories)
        if detunings.shape[0] != noise.trajectories:
            detunings = detunings.expand(noise.trajectories, n)
        rng = np.random.default_rng((noise.rng_seed, 1))
        probs = evolve_trajectories(
            schedule,
            device,
            detunings,
            rng,
            enable_t1t2=noise.enable_t1t2,
            enable_gate_error=noise.enable_gate_error,
        )
        samples = noise.trajectories
    if noise.enable_readout:
        probs = apply_readout(probs, device.readout_flip[:n])
    return to_logical_order(probs, schedule.final_layout), engine, samples


def simulate_noisy(
    schedule: Schedule,
    device: DeviceModel,
    noise: NoiseConfig,
    shots: int,
    seed: int,
    spec: Optional[CostSpec] = None,
    exact: bool = False,
) -> RunResult:
    """
    Noisy execution of a schedule. With ``spec`` the QAOA figures of merit
    are filled in, from the sampled counts or, with ``exact``, from the
    exact distribution.
    """
    probs, engine, samples = noisy_distribution(schedule, device, noise)
    counts = sample_counts(probs, shots, seed)
    F = r = sp = None
    if spec is not None:
        n = schedule.num_qubits
        weights: Mapping[str, float] = counts
        if exact:
            weights = {format(i, f"0{n}b"): float(p) for i, p in enumerate(probs) if p > 0}
        F = expectation(weights, spec)
        r = approximation_ratio(F, spec.f0, spec.fmax)
        sp = min(1.0, max(0.0, success_probability(weights, spec)))
    fq = circuit_fidelity(schedule_to_circuit(schedule), device)
    logger.debug(
        "%s on %s: engine=%s samples=%d tau=%d fq=%.5f", schedule.label, device.name, engine.value, samples, schedule.total_dt, fq
    )
    return RunResult(
        counts=counts,
        shots=shots,
        tau_dt=schedule.total_dt,
        fq=fq,
        F=F,
        r=r,
        sp=sp,
        engine=engine.value,
        detuning_samples=samples,
        probabilities=probs,
    )
