# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import enum
import logging
import math
from fractions import Fraction
from typing import Dict, List, Tuple, Type

from ..circuit import delay, gate1, GateKind, rz
from ..device import DeviceModel
from .common import BasePass, get_pass, register_pass
from .scheduling import idle_windows, IdleWindow, Schedule, TimedInstruction, with_instructions

logger = logging.getLogger(__name__)


class DDSequence(str, enum.Enum):
    NONE = "NONE"
    CPMG = "CPMG"
    XY4 = "XY4"


class DDSequenceSpec(BasePass):
    """
    A pulse train for one idle window: ``FRACTIONS[k]`` of the free time ``t``
    precedes ``PULSES[k]``, the last fraction trails the final pulse.
    """

    CATEGORY = "dd_sequence"
    PULSES: Tuple[GateKind, ...] = ()
    FRACTIONS: Tuple[Fraction, ...] = ()


@register_pass
class NoDD(DDSequenceSpec):
    NAME = DDSequence.NONE.value
    DESCRIPTION = "baseline, idle windows left untouched"


@register_pass
class CPMG(DDSequenceSpec):
    NAME = DDSequence.CPMG.value
    DESCRIPTION = "t/4 X t/2 X t/4"
    PULSES = (GateKind.X, GateKind.X)
    FRACTIONS = (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))


@register_pass
class XY4(DDSequenceSpec):
    NAME = DDSequence.XY4.value
    DESCRIPTION = "t/8 X t/4 Y t/4 X t/4 Y t/8"
    PULSES = (GateKind.X, GateKind.Y, GateKind.X, GateKind.Y)
    FRACTIONS = (
        Fraction(1, 8),
        Fraction(1, 4),
        Fraction(1, 4),
        Fraction(1, 4),
        Fraction(1, 8),
    )


def get_sequence(seq: DDSequence) -> Type[DDSequenceSpec]:
    return get_pass(DDSequenceSpec.CATEGORY, DDSequence(seq).value)  # type: ignore


def dd_delays(t: int, seq: DDSequence) -> List[int]:
    """Integer delays for ``t`` free dt; the rounding remainder goes to the last one."""
    if t < 0:
        raise ValueError(f"free time must be >= 0, got {t}")
    fractions = get_sequence(seq).FRACTIONS
    delays = [math.floor(t * f) for f in fractions]
    if delays:
        delays[-1] += t - sum(delays)
    return delays


def _pad_window(
    window: IdleWindow, spec: Type[DDSequenceSpec], pulse_dt: int
) -> List[TimedInstruction]:
    q = window.qubit
    free = window.span_dt - len(spec.PULSES) * pulse_dt
    delays = dd_delays(free, spec.NAME)  # type: ignore
    out: List[TimedInstruction] = []
    cursor = window.start_dt

    def wait(span: int) -> None:
        nonlocal cursor
        if span > 0:
            out.append(TimedInstruction(delay(span, q), cursor, span))
        cursor += span

    for span, pulse in zip(delays, spec.PULSES):
        wait(span)
        if pulse == GateKind.Y:
            # Y = RZ(-pi/2) X RZ(pi/2) with virtual Z frames around the X pulse
            out.append(TimedInstruction(rz(-math.pi / 2, q), cursor, 0))
            out.append(TimedInstruction(gate1(GateKind.X, q), cursor, pulse_dt))
            out.append(TimedInstruction(rz(math.pi / 2, q), cursor + pulse_dt, 0))
        else:
            out.append(TimedInstruction(gate1(pulse, q), cursor, pulse_dt))
        cursor += pulse_dt
    wait(delays[-1])
    assert cursor == window.end_dt, (cursor, window)
    return out


def insert_dd(schedule: Schedule, seq: DDSequence, device: DeviceModel) -> Schedule:
    spec = get_sequence(seq)
    if not spec.PULSES:
        return schedule
    if schedule.device_name != device.name:
        raise ValueError(
            f"schedule was built for {schedule.device_name}, not {device.name}"
        )
    pulse_dt = device.single_pulse_dt
    needed = len(spec.PULSES) * pulse_dt
    # padding goes right before the instruction that closes the window
    pads_before: Dict[int, List[TimedInstruction]] = {}
    dropped = set()
    skipped = 0
    for window in idle_windows(schedule):
        if window.span_dt < needed:
            skipped += 1
            continue
        closing = None
        for idx, inst in enumerate(schedule.instructions):
            if window.qubit not in inst.qubits:
                continue
            if (
                inst.is_idle
                and inst.start_dt >= window.start_dt
                and inst.end_dt <= window.end_dt
            ):
                dropped.add(idx)
            elif (
                not inst.is_idle
                and inst.duration_dt > 0
                and inst.start_dt == window.end_dt
            ):
                closing = idx
                break
        assert closing is not None, window
        pads_before.setdefault(closing, []).extend(_pad_window(window, spec, pulse_dt))
    if skipped:
        logger.debug(
            "%s: %d idle windows shorter than %d dt left unpadded", spec.NAME, skipped, needed
        )

    merged: List[TimedInstruction] = []
    for idx, inst in enumerate(schedule.instructions):
        merged.extend(pads_before.get(idx, ()))
        if idx not in dropped:
            merged.append(inst)
    merged.sort(key=lambda inst: inst.start_dt)
    return with_instructions(schedule, merged)
