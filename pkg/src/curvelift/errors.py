"""Exception types shared across the package."""


class DegenerateInputError(RuntimeError):
    """Numerically degenerate input: zero data, rank-collapsed system, etc.

    Distinct from ValueError so callers (and the CLI) can separate
    "you passed garbage" from "the numbers collapsed".
    """


class DivergenceError(RuntimeError):
    """Iterative solver diverged.  Carries the diagnostics collected so far."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics
