from typing import Any, NamedTuple


class CheckResult(NamedTuple):
    """Outcome of one asserted quantity."""
    name: str
    passed: bool
    expected: Any
    actual: Any
