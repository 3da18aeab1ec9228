# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

from typing import Any, Dict, List, Optional, Sequence, Tuple, Type, TypeVar


class BasePass:
    NAME: str
    CATEGORY: str
    DESCRIPTION: str = ""

    @classmethod
    def not_supported_reasons(cls, *args: Any) -> List[str]:
        return []


PASSES_REGISTRY: List[Type[BasePass]] = []
_NAME_TO_PASS: Dict[Tuple[str, str], Type[BasePass]] = {}

ClsT = TypeVar("ClsT")


def register_pass(cls: ClsT) -> ClsT:
    key = (cls.CATEGORY, cls.NAME)  # type: ignore
    if key in _NAME_TO_PASS:
        raise ValueError("Cannot register duplicate pass ({}.{})".format(*key))
    PASSES_REGISTRY.append(cls)  # type: ignore
    _NAME_TO_PASS[key] = cls  # type: ignore
    return cls


def get_pass(category: str, name: str) -> Type[BasePass]:
    try:
        return _NAME_TO_PASS[(category, name)]
    except KeyError:
        known = sorted(n for c, n in _NAME_TO_PASS if c == category)
        raise ValueError(f"Unknown {category} '{name}', known: {known}") from None


def list_passes(category: Optional[str] = None) -> List[Type[BasePass]]:
    return [p for p in PASSES_REGISTRY if category is None or p.CATEGORY == category]


def format_not_supported_reasons(name: str, reasons: Sequence[str]) -> str:
    return f"`{name}` is not supported because:\n    " + "\n    ".join(reasons)


T = TypeVar("T", bound=Type[BasePass])


def run_priority_list(
    what: str, priority_list: Sequence[T], exc_type: type, *args: Any
) -> T:
    """Returns the first candidate without reasons, or raises with all of them."""
    collected: List[str] = []
    for candidate in priority_list:
        reasons = candidate.not_supported_reasons(*args)
        if not reasons:
            return candidate
        collected.append(format_not_supported_reasons(candidate.NAME, reasons))
    raise exc_type(f"No strategy found for {what}:\n" + "\n".join(collected))
