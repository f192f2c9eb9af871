"""Shared exception types."""


class SolverError(RuntimeError):
    """Numeric failure: non-convergence, infeasible input, degenerate case.

    Carries a human-readable diagnostic; the CLI maps it to exit code 3.
    """
