class LpaError(Exception):
    """Base class for every error raised by the toolkit.

    Each subclass carries the process exit code the CLI reports for it:
    2 for usage, parse and precondition errors, 1 for checked failures.
    """

    exit_code = 2


class ConfigError(LpaError):
    pass


# graph

class UnknownVertex(LpaError):
    def __init__(self, vertex):
        super().__init__(f"UnknownVertex({vertex})")
        self.vertex = vertex


class UnknownPath(LpaError):
    def __init__(self, edges, reason="not a path in the graph"):
        super().__init__(f"UnknownPath({'.'.join(edges)}): {reason}")
        self.edges = tuple(edges)


class GraphSyntaxError(LpaError):
    def __init__(self, line, message):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class DuplicateIdentifier(GraphSyntaxError):
    def __init__(self, line, identifier):
        super().__init__(line, f"DuplicateIdentifier({identifier})")
        self.identifier = identifier


class DanglingEndpoint(GraphSyntaxError):
    def __init__(self, line, vertex):
        super().__init__(line, f"DanglingEndpoint({vertex})")
        self.vertex = vertex


class ReservedIdentifier(GraphSyntaxError):
    def __init__(self, line, identifier):
        super().__init__(line, f"ReservedIdentifier({identifier})")
        self.identifier = identifier


# lpa

class AlgebraMismatch(LpaError):
    pass


class NotHomogeneous(LpaError):
    def __init__(self, degrees=()):
        degrees = sorted(set(degrees))
        super().__init__(f"NotHomogeneous(degrees={degrees})")
        self.degrees = degrees


class ZeroHasNoDegree(LpaError):
    def __init__(self):
        super().__init__("ZeroHasNoDegree")


class UnknownGenerator(LpaError):
    def __init__(self, name):
        super().__init__(f"UnknownGenerator({name})")
        self.name = name


class ElementSyntaxError(LpaError):
    pass


# regularity

class NoWitnessWithinBound(LpaError):
    exit_code = 1

    def __init__(self, bound):
        super().__init__(f"NoWitnessWithinBound({bound})")
        self.bound = bound


class NotApplicable(LpaError):
    pass


class InternalInvariantBreach(LpaError):
    exit_code = 1


# corner_skew

class GraphHasSource(LpaError):
    exit_code = 1

    def __init__(self, vertex):
        super().__init__(f"GraphHasSource({vertex})")
        self.vertex = vertex


class DecompositionFailure(LpaError):
    exit_code = 1

    def __init__(self, degree):
        super().__init__(f"DecompositionFailure(degree={degree})")
        self.degree = degree


class NotFiniteGraph(LpaError):
    pass


# transforms

class NotASource(LpaError):
    def __init__(self, vertex):
        super().__init__(f"NotASource({vertex})")
        self.vertex = vertex


class IsolatedVertex(LpaError):
    def __init__(self, vertex):
        super().__init__(f"IsolatedVertex({vertex})")
        self.vertex = vertex


class NotIsolated(LpaError):
    def __init__(self, vertex):
        super().__init__(f"NotIsolated({vertex})")
        self.vertex = vertex


class DepthTooSmall(LpaError):
    def __init__(self, vertex, needed, depth):
        super().__init__(f"DepthTooSmall({vertex}: needs {needed}, got {depth})")
        self.vertex = vertex


class MultiEntryUnsupported(LpaError):
    def __init__(self, count):
        super().__init__(f"MultiEntryUnsupported({count} nonzero entries)")
        self.count = count
