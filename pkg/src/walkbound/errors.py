"""Exception hierarchy shared by every walkbound module."""


class WalkboundError(Exception):
    """Base class for all errors raised by walkbound."""


class ParseError(WalkboundError):
    """An edge-list document could not be ingested.

    ``line`` holds the 1-based line number of the offending line.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedLine(ParseError):
    pass


class SelfLoop(ParseError):
    pass


class DuplicateEdge(ParseError):
    pass


class NonPositiveWeight(ParseError):
    pass


class NegativeCost(ParseError):
    pass


class Unreachable(WalkboundError):
    """Two vertices that must share a component do not."""


class NotATree(WalkboundError):
    pass


class NotSimpleWalk(WalkboundError):
    """A tree closed form was asked for a walk with non-constant weights."""


class SolveFailure(WalkboundError):
    """A floating solve failed its residual check."""


class InvalidArgument(WalkboundError, ValueError):
    pass


class CensoredSample(WalkboundError):
    """Some simulated walks hit the step guard before absorption."""

    def __init__(self, message, censored):
        self.censored = censored
        super().__init__(message)


class InvalidConfig(WalkboundError, ValueError):
    pass


class IoFailure(WalkboundError):
    """A report or graph file could not be read or written."""
