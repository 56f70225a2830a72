"""Exception types shared across the toolkit."""


class InfeasiblePolicyError(ValueError):
    """A mitigation policy puts probability mass on a forbidden move."""


class SolverError(RuntimeError):
    """An optimization routine failed to produce a usable answer."""
