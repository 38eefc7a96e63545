"""Shared exception types."""


class InfeasibleRegimeError(ValueError):
    """Raised when requested parameters lie outside a protocol's feasible regime.

    Distinct from plain ``ValueError`` (malformed input) so callers can tell
    "you asked for something impossible" apart from "you passed garbage".
    """
