"""Exception types shared across the package."""
from __future__ import annotations


class PermcrossError(Exception):
    """Base class for package-specific errors."""


class SizeMismatchError(PermcrossError, ValueError):
    """Operands describe permutations or instances of different sizes."""


class MultipleCyclesError(PermcrossError, ValueError):
    """A successor map does not describe a single tour.

    Raised when a successor walk returns to its starting symbol before
    visiting every symbol, i.e. the map splits into several cycles.
    """

    def __init__(self, visited: int, size: int):
        super().__init__(
            f"successor map is not a single cycle "
            f"(walk closed after {visited} of {size} symbols)"
        )
        self.visited = visited
        self.size = size


class TrialBudgetExhaustedError(PermcrossError, RuntimeError):
    """A trial-repeat crossover hit its trial cap before finding a valid tour.

    ``fallback`` carries a parent-copy outcome so callers can degrade
    gracefully; batch harnesses record it as a trivial result.
    """

    def __init__(self, trials: int, fallback):
        super().__init__(f"no valid offspring within {trials} trials")
        self.trials = trials
        self.fallback = fallback


class DecompositionFailedError(PermcrossError, RuntimeError):
    """Alternating-cycle traversal failed repeatedly.

    The traversal restarts from scratch when it strands edges outside any
    closed loop; by the degree-balance argument this should never happen,
    so hitting the restart limit points at a bug or corrupted input and is
    surfaced instead of hidden.
    """


class ParseError(PermcrossError, ValueError):
    """A text input (permutation file or instance file) is malformed."""

    def __init__(self, source: str, line_no: int, message: str):
        super().__init__(f"{source}:{line_no}: {message}")
        self.source = source
        self.line_no = line_no
