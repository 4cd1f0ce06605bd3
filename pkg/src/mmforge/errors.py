"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all mmforge-specific errors."""


class SizeCapError(ToolkitError):
    """An operation was asked to enumerate or tabulate beyond its configured cap."""


class IncompleteFactorizationError(ToolkitError):
    """An exact computation was requested on an incompletely factored integer."""


class WitnessSearchExhausted(ToolkitError):
    """The deterministic witness scan ran out of candidates.

    This is a distinguished outcome, not a silent failure: it carries the
    parameters of the search and whether the sufficient existence condition
    held for the instance (if it did, exhaustion would indicate a bug).
    """

    def __init__(self, q, n, split, candidates_tried, condition_holds):
        self.q = q
        self.n = n
        self.split = split
        self.candidates_tried = candidates_tried
        self.condition_holds = condition_holds
        super().__init__(
            f"no witness found for q={q}, n={n}, split={split} "
            f"after {candidates_tried} candidates "
            f"(sufficient condition holds: {condition_holds})"
        )
