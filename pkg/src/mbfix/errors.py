"""Error types shared across the package.

Counting must never return a wrong or truncated value: anything the
implementation cannot do exactly within its limits is refused loudly.
"""


class OutOfScopeError(Exception):
    """The request is outside the supported range (e.g. d_8 from scratch)."""


class ResourceLimitError(Exception):
    """An exact computation exceeded its work or memory budget."""


class InconsistencyError(Exception):
    """Two routes that must agree disagreed (e.g. Burnside divisibility)."""
