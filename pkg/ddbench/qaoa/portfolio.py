# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import json
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, Mapping, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

MAX_ENUMERATION_QUBITS = 20
# relative tolerance when collecting degenerate optima
TIE_TOL = 1e-9


class DegenerateCostError(ValueError):
    pass


class EmptyHistogramError(ValueError):
    pass


@dataclass(frozen=True)
class PortfolioInstance:
    """
    Mean-variance portfolio selection with a budget penalty.

    ``lam`` scales the whole cost, ``q`` trades risk (``sigma``) against
    return (``mu``), ``penalty`` (A) enforces picking ``budget`` (B) assets.
    """

    n: int
    lam: float
    q: float
    penalty: float
    budget: int
    mu: Tuple[float, ...]
    sigma: Tuple[Tuple[float, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", tuple(float(m) for m in self.mu))
        object.__setattr__(
            self, "sigma", tuple(tuple(float(s) for s in row) for row in self.sigma)
        )
        n = self.n
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if not 1 <= self.budget <= n:
            raise ValueError(f"budget B={self.budget} outside [1, {n}]")
        if len(self.mu) != n:
            raise ValueError(f"mu has {len(self.mu)} entries, expected {n}")
        sigma = self.sigma_matrix
        if sigma.shape != (n, n):
            raise ValueError(f"sigma has shape {sigma.shape}, expected {(n, n)}")
        scalars = (self.lam, self.q, self.penalty)
        if not (all(math.isfinite(v) for v in scalars) and np.isfinite(sigma).all()):
            raise ValueError("instance fields must be finite")
        if not np.isfinite(self.mu_vector).all():
            raise ValueError("mu must be finite")
        if np.max(np.abs(sigma - sigma.T), initial=0.0) > 1e-12:
            raise ValueError("sigma must be symmetric")

    @property
    def sigma_matrix(self) -> np.ndarray:
        return np.array(self.sigma, dtype=np.float64).reshape(len(self.sigma), -1)

    @property
    def mu_vector(self) -> np.ndarray:
        return np.array(self.mu, dtype=np.float64)


@dataclass(frozen=True, eq=False)
class CostSpec:
    n: int
    # c[i, j] for i < j, zero elsewhere
    c: np.ndarray = field(repr=False)
    k: np.ndarray = field(repr=False)
    f0: float
    fmax: float
    optimal_bitstrings: FrozenSet[str]

    def __post_init__(self) -> None:
        if self.f0 > self.fmax:
            raise ValueError(f"f0={self.f0} exceeds fmax={self.fmax}")
        if not self.optimal_bitstrings:
            raise ValueError("optimal_bitstrings must be non-empty")


def cost_coefficients(inst: PortfolioInstance) -> Tuple[np.ndarray, np.ndarray]:
    n = inst.n
    sigma = inst.sigma_matrix
    half = inst.lam / 2
    c = np.triu(half * (inst.q * sigma + inst.penalty), k=1)
    k = half * (
        inst.penalty * (2 * inst.budget - n)
        + (1 - inst.q) * inst.mu_vector
        - inst.q * sigma.sum(axis=1)
    )
    return c, k


def _check_bits(bits: str, n: int) -> None:
    if len(bits) != n:
        raise ValueError(f"bitstring {bits!r} has length {len(bits)}, expected {n}")


def cost_value(bits: str, spec: CostSpec) -> float:
    _check_bits(bits, spec.n)
    z = np.array([1 - 2 * int(b) for b in bits], dtype=np.float64)
    return float(z @ spec.c @ z - spec.k @ z)


def cost_diagonal(c: np.ndarray, k: np.ndarray, n: int) -> np.ndarray:
    """Cost of every basis state, qubit 0 being the most significant bit."""
    index = np.arange(2**n)
    z = [1.0 - 2.0 * ((index >> (n - 1 - i)) & 1) for i in range(n)]
    diag = np.zeros(2**n, dtype=np.float64)
    for i in range(n):
        diag -= k[i] * z[i]
        for j in range(i + 1, n):
            if c[i, j] != 0:
                diag += c[i, j] * z[i] * z[j]
    return diag


def exact_extrema(c: np.ndarray, k: np.ndarray, n: int) -> CostSpec:
    if n > MAX_ENUMERATION_QUBITS:
        raise ValueError(
            f"exhaustive enumeration supports n <= {MAX_ENUMERATION_QUBITS}, got {n}"
        )
    c = np.triu(np.asarray(c, dtype=np.float64), k=1)
    k = np.asarray(k, dtype=np.float64)
    diag = cost_diagonal(c, k, n)
    f0, fmax = float(diag.min()), float(diag.max())
    tol = TIE_TOL * max(1.0, abs(f0))
    optimal = frozenset(
        format(int(x), f"0{n}b") for x in np.flatnonzero(diag <= f0 + tol)
    )
    return CostSpec(n=n, c=c, k=k, f0=f0, fmax=fmax, optimal_bitstrings=optimal)


def cost_spec(inst: PortfolioInstance) -> CostSpec:
    c, k = cost_coefficients(inst)
    return exact_extrema(c, k, inst.n)


def _total(counts: Mapping[str, float]) -> float:
    total = float(sum(counts.values()))
    if total <= 0:
        raise EmptyHistogramError("histogram holds no shots")
    return total


def expectation(counts: Mapping[str, float], spec: CostSpec) -> float:
    total = _total(counts)
    return sum(w * cost_value(bits, spec) for bits, w in counts.items()) / total


def approximation_ratio(F: float, f0: float, fmax: float) -> float:
    if f0 == fmax:
        raise DegenerateCostError(f"f0 == fmax == {f0}, the ratio is undefined")
    return (F - fmax) / (f0 - fmax)


def success_probability(counts: Mapping[str, float], spec: CostSpec) -> float:
    total = _total(counts)
    for bits in counts:
        _check_bits(bits, spec.n)
    hits = sum(w for bits, w in counts.items() if bits in spec.optimal_bitstrings)
    return hits / total


def random_instance(n: int, seed: int) -> PortfolioInstance:
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(n, n))
    sigma = g @ g.T
    sigma = sigma / np.max(np.abs(sigma))
    sigma = (sigma + sigma.T) / 2
    mu = rng.uniform(0.0, 1.0, size=n)
    return PortfolioInstance(
        n=n,
        lam=1.0,
        q=0.5,
        penalty=1.0,
        budget=math.ceil(n / 2),
        mu=tuple(mu),
        sigma=tuple(tuple(row) for row in sigma),
    )


def instance_to_dict(inst: PortfolioInstance) -> Dict[str, Any]:
    return {
        "n": inst.n,
        "lambda": inst.lam,
        "q": inst.q,
        "A": inst.penalty,
        "B": inst.budget,
        "mu": list(inst.mu),
        "sigma": [list(row) for row in inst.sigma],
    }


def instance_from_dict(data: Mapping[str, Any]) -> PortfolioInstance:
    missing = [key for key in ("n", "lambda", "q", "A", "B", "mu", "sigma") if key not in data]
    if missing:
        raise ValueError(f"instance is missing keys {missing}")
    return PortfolioInstance(
        n=int(data["n"]),
        lam=float(data["lambda"]),
        q=float(data["q"]),
        penalty=float(data["A"]),
        budget=int(data["B"]),
        mu=tuple(data["mu"]),
        sigma=tuple(tuple(row) for row in data["sigma"]),
    )


def dump_instance(inst: PortfolioInstance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2)


def load_instance(path: Union[str, os.PathLike]) -> PortfolioInstance:
    inst = instance_from_dict(json.loads(Path(path).read_text()))
    logger.debug("Loaded %d-asset instance from %s", inst.n, path)
    return inst


def bitstrings(n: int) -> Sequence[str]:
    return [format(x, f"0{n}b") for x in range(2**n)]
