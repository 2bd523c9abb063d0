"""Shared exception types."""


class InvariantViolation(RuntimeError):
    """A structural invariant that validated inputs cannot break was broken."""


class DefectSignal(RuntimeError):
    """Two routes that are provably equivalent disagreed; something is wrong."""
