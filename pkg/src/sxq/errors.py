"""Exception types shared across the sxq package."""

from __future__ import annotations


class SxqError(Exception):
    """Base class for all sxq errors."""


class MemoryParseError(SxqError):
    """The memory document is not well-formed (bad JSON or wrong shape)."""


class SchemaViolationError(SxqError):
    """A node violates the memory schema.

    Carries the full violation list so callers can report every problem,
    not just the first one found.
    """

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        summary = "; ".join(str(v) for v in violations[:5])
        if len(violations) > 5:
            summary += f"; ... ({len(violations)} total)"
        super().__init__(summary)


class Violation:
    """One schema rule broken by one node."""

    __slots__ = ("node_id", "rule")

    def __init__(self, node_id: str, rule: str):
        self.node_id = node_id
        self.rule = rule

    def __str__(self) -> str:
        return f"node {self.node_id!r}: {self.rule}"

    def __repr__(self) -> str:
        return f"Violation({self.node_id!r}, {self.rule!r})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Violation)
            and other.node_id == self.node_id
            and other.rule == self.rule
        )


class UnknownNodeError(SxqError):
    """An operation referenced a node id that is not in the tree."""

    def __init__(self, node_id: str):
        self.node_id = node_id
        super().__init__(f"unknown node id {node_id!r}")


class MutationError(SxqError):
    """A version-branch edit is invalid (bad target, malformed spec)."""


class QuerySyntaxError(SxqError):
    """Query text failed to parse.

    offset is the 0-based byte offset into the UTF-8 encoding of the
    query where the failure was detected; expected lists the token kinds
    that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at byte offset {offset}"
        if expected:
            detail += f" (expected {', '.join(expected)})"
        super().__init__(detail)


class ScorerError(SxqError):
    """Base class for relevance-scorer failures."""


class TransportError(ScorerError):
    """The external scoring service could not be reached (retriable)."""


class ServiceResponseError(ScorerError):
    """The external scoring service answered with an unusable payload."""
