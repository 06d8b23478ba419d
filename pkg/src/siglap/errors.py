"""Exception hierarchy shared by all siglap modules."""


class SignedGraphError(Exception):
    """Base class for every error raised by siglap."""


class DisconnectedGraph(SignedGraphError):
    pass


class NoSuchEdge(SignedGraphError, IndexError):
    pass


class LoopContraction(SignedGraphError):
    pass


class ZeroWeight(SignedGraphError, ValueError):
    pass


class TooLarge(SignedGraphError):
    pass


class ZeroPolynomial(SignedGraphError, ValueError):
    pass


class PreconditionViolated(SignedGraphError, ValueError):
    pass


class NegativeParameter(SignedGraphError, ValueError):
    pass


class ConvergenceFailure(SignedGraphError):
    pass


class EmptyNegativePart(SignedGraphError):
    pass


class InvalidCycle(SignedGraphError, ValueError):
    pass


class TooFewSamples(SignedGraphError, ValueError):
    pass


class ParseError(SignedGraphError, ValueError):
    """Malformed edge-list input; ``lineno`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message, lineno=0):
        self.lineno = lineno
        if lineno:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class DuplicateEdge(ParseError):
    pass
