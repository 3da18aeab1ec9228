# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import math
import random

import numpy as np
import pytest

from ddbench.circuit import (
    Circuit,
    delay,
    gate1,
    gate2,
    gate_matrix,
    GateKind,
    measure_all,
    rx,
    rz,
    rzz,
    unitary_of,
)
from ddbench.passes import (
    cx_as_ecr,
    DecompositionStyle,
    ecr_as_cx,
    euler_zyz,
    get_pass,
    list_passes,
    lower_to_basis,
    NonAdjacentPairError,
    reverse_cx,
    run_priority_list,
    rzz_as_cx,
    rzz_as_cz,
    rzz_gates,
    synthesize_1q,
    UnsupportedDirectionError,
    wrap_angle,
)
from ddbench.passes.decompose import CXViaECR, NativeECR

from .utils import assert_circuits_equivalent, assert_equivalent, make_device, random_circuit, random_unitary

STYLES = [DecompositionStyle.CX_IMPL, DecompositionStyle.CZ_IMPL]
NUM_RANDOM_CASES = 200


def _native_only(circuit: Circuit, device) -> None:
    allowed = set(device.native_kinds) | {GateKind.DELAY, GateKind.MEASURE}
    bad = [str(g) for g in circuit.gates if g.kind not in allowed]
    assert not bad, f"non-native gates left: {bad}"


@pytest.mark.parametrize("seed", range(NUM_RANDOM_CASES))
def test_rzz_expansions(seed: int) -> None:
    rng = random.Random(seed)
    theta = rng.uniform(-4 * math.pi, 4 * math.pi)
    a, b = rng.sample(range(3), 2)
    ref = unitary_of(Circuit(3, (rzz(theta, a, b),)))
    for build in (rzz_as_cx, rzz_as_cz):
        out = Circuit(3, build(theta, a, b).gates)
        assert_equivalent(unitary_of(out), ref, msg=build.__name__)


def test_rzz_gates_follow_style() -> None:
    assert rzz_gates(0.5, 0, 1, DecompositionStyle.CX_IMPL) == rzz_as_cx(0.5, 0, 1).gates
    assert rzz_gates(0.5, 0, 1, "CZ_IMPL") == rzz_as_cz(0.5, 0, 1).gates  # type: ignore


def test_rzz_as_cz_layout() -> None:
    kinds = [g.kind for g in rzz_as_cz(0.2, 0, 1).gates]
    assert kinds == [GateKind.H, GateKind.CZ, GateKind.RX, GateKind.CZ, GateKind.H]


@pytest.mark.parametrize("control,target", [(0, 1), (1, 0), (2, 1)])
def test_cx_as_ecr(control: int, target: int) -> None:
    ref = unitary_of(Circuit(3, (gate2(GateKind.CX, control, target),)))
    out = unitary_of(Circuit(3, cx_as_ecr(control, target).gates))
    assert_equivalent(out, ref)
    kinds = [g.kind for g in cx_as_ecr(control, target).gates]
    assert kinds.count(GateKind.ECR) == 1


def test_cx_as_ecr_checks_direction() -> None:
    device = make_device("ECR", 3)
    cx_as_ecr(0, 1, device)
    with pytest.raises(UnsupportedDirectionError):
        cx_as_ecr(1, 0, device)


@pytest.mark.parametrize("control,target", [(0, 1), (1, 0)])
def test_ecr_as_cx_and_reverse_cx(control: int, target: int) -> None:
    ecr = unitary_of(Circuit(2, (gate2(GateKind.ECR, control, target),)))
    assert_equivalent(unitary_of(Circuit(2, ecr_as_cx(control, target).gates)), ecr)
    cx = unitary_of(Circuit(2, (gate2(GateKind.CX, control, target),)))
    rev = reverse_cx(control, target)
    assert_equivalent(unitary_of(Circuit(2, rev.gates)), cx)
    assert [g.qubits for g in rev.gates if g.kind == GateKind.CX] == [(target, control)]


@pytest.mark.parametrize("seed", range(NUM_RANDOM_CASES))
def test_synthesize_1q_random(seed: int) -> None:
    u = random_unitary(2, np.random.default_rng(seed))
    gates = synthesize_1q(u, 0)
    assert len(gates) <= 5
    assert sum(g.kind == GateKind.SX for g in gates) <= 2
    assert all(g.kind in (GateKind.RZ, GateKind.SX, GateKind.X) for g in gates)
    assert_equivalent(unitary_of(Circuit(1, tuple(gates))), u)


@pytest.mark.parametrize(
    "kind,expected",
    [
        pytest.param(GateKind.ID, [], id="identity"),
        pytest.param(GateKind.X, [GateKind.X], id="x"),
        pytest.param(GateKind.SX, [GateKind.SX], id="sx"),
        pytest.param(GateKind.H, [GateKind.RZ, GateKind.SX, GateKind.RZ], id="h"),
    ],
)
def test_synthesize_1q_special_cases(kind: GateKind, expected) -> None:
    u = gate_matrix(gate1(kind, 0))
    gates = synthesize_1q(u, 0)
    assert [g.kind for g in gates] == expected
    assert_equivalent(unitary_of(Circuit(1, tuple(gates))), u)


def test_synthesize_1q_rz_only() -> None:
    gates = synthesize_1q(gate_matrix(rz(0.4, 0)), 0)
    assert len(gates) == 1 and gates[0].kind == GateKind.RZ
    assert gates[0].angle == pytest.approx(0.4)


def test_euler_zyz_theta_range() -> None:
    rng = np.random.default_rng(0)
    for _ in range(50):
        theta, _, _ = euler_zyz(random_unitary(2, rng))
        assert 0 <= theta <= math.pi


def test_wrap_angle() -> None:
    assert wrap_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
    assert wrap_angle(-0.25) == -0.25
    assert abs(wrap_angle(4 * math.pi)) < 1e-12


@pytest.mark.parametrize("native", ["CX", "ECR"])
@pytest.mark.parametrize("style", STYLES)
@pytest.mark.parametrize("seed", range(NUM_RANDOM_CASES // 4))
def test_lower_to_basis_random(native: str, style: DecompositionStyle, seed: int) -> None:
    device = make_device(native, 4)
    kinds = [GateKind.CX, GateKind.CZ, GateKind.RZZ, GateKind.ECR]
    circuit = random_circuit(4, 20, seed, two_qubit_kinds=kinds)
    lowered = lower_to_basis(circuit, device, style)
    _native_only(lowered, device)
    assert_circuits_equivalent(lowered, circuit, msg=f"{native} {style.value} seed={seed}")


def test_lower_to_basis_fixed_translations() -> None:
    device = make_device("CX", 2)
    lowered = lower_to_basis(Circuit(2, (gate1(GateKind.H, 0),)), device)
    assert [g.kind for g in lowered.gates] == [GateKind.RZ, GateKind.SX, GateKind.RZ]
    assert lowered.gates[0].angle == pytest.approx(math.pi / 2)
    lowered = lower_to_basis(Circuit(2, (gate1(GateKind.Y, 1),)), device)
    assert [g.kind for g in lowered.gates] == [GateKind.RZ, GateKind.X, GateKind.RZ]


def test_lower_to_basis_keeps_delay_and_measure() -> None:
    device = make_device("ECR", 2)
    circuit = Circuit(2, (delay(50, 0), gate2(GateKind.CX, 0, 1), measure_all(2)))
    lowered = lower_to_basis(circuit, device)
    assert lowered.gates[0] == delay(50, 0)
    assert lowered.has_measure
    assert lowered.count(GateKind.ECR) == 1
    # opposite direction: H-conjugated, still one ECR
    lowered = lower_to_basis(Circuit(2, (gate2(GateKind.CX, 1, 0),)), device)
    assert lowered.count(GateKind.ECR) == 1
    assert all(g.qubits == (0, 1) for g in lowered.gates if g.kind == GateKind.ECR)


def test_lower_to_basis_ecr_on_cx_device() -> None:
    device = make_device("CX", 2)
    circuit = Circuit(2, (gate2(GateKind.ECR, 1, 0),))
    lowered = lower_to_basis(circuit, device)
    _native_only(lowered, device)
    assert_equivalent(unitary_of(lowered), unitary_of(circuit))


def test_lower_to_basis_rx() -> None:
    device = make_device("CX", 1)
    circuit = Circuit(1, (rx(0.77, 0),))
    lowered = lower_to_basis(circuit, device)
    _native_only(lowered, device)
    assert_equivalent(unitary_of(lowered), unitary_of(circuit))


def test_non_adjacent_pair() -> None:
    device = make_device("CX", 4)
    with pytest.raises(NonAdjacentPairError, match="adjacent"):
        lower_to_basis(Circuit(4, (gate2(GateKind.CX, 0, 2),)), device)
    with pytest.raises(NonAdjacentPairError):
        lower_to_basis(Circuit(5, ()), device)


def test_priority_list_reports_every_reason() -> None:
    device = make_device("CX", 2)
    gate = gate2(GateKind.CX, 0, 1)
    with pytest.raises(UnsupportedDirectionError) as e:
        run_priority_list("test", [NativeECR, CXViaECR], UnsupportedDirectionError, gate, device)
    message = str(e.value)
    assert "native_ecr" in message and "cx_via_ecr" in message
    assert message.count("native two-qubit gate is CX") == 2


def test_lowering_registry() -> None:
    names = {p.NAME for p in list_passes("lowering")}
    assert {"native_cx", "reversed_cx", "cx_via_ecr", "native_ecr"} <= names
    assert get_pass("lowering", "native_ecr") is NativeECR
    with pytest.raises(ValueError, match="known"):
        get_pass("lowering", "nope")
