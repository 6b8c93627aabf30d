"""Exception types shared across the toolkit."""


class CommbenchError(Exception):
    """Base class for every error this package raises on purpose."""


class GraphError(CommbenchError):
    pass


class SelfLoopError(GraphError):
    def __init__(self, node):
        super().__init__(f"self-loop ({node}, {node}) is not allowed")
        self.pair = (node, node)


class DuplicateEdgeError(GraphError):
    def __init__(self, u, v):
        super().__init__(f"duplicate edge ({u}, {v})")
        self.pair = (u, v)


class IdOutOfRangeError(GraphError):
    def __init__(self, node, n):
        super().__init__(f"node id {node} outside [0, {n})")
        self.node = node
        self.n = n


class FrozenGraphError(GraphError):
    pass


class InvalidSpecError(CommbenchError):
    pass


class InfeasibleError(CommbenchError):
    pass


class InvalidBoundsError(CommbenchError):
    pass


class RepairFailedError(CommbenchError):
    pass


class EmptySizesError(CommbenchError):
    pass


class UnassignableError(CommbenchError):
    pass


class NoReachablePairsError(CommbenchError):
    pass


class TooFewObservationsError(CommbenchError):
    pass


class DegenerateDenominatorError(CommbenchError):
    pass


class EmptyGraphError(CommbenchError):
    pass


class NodeSetMismatchError(CommbenchError):
    pass


class ParseError(CommbenchError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class MissingNodeError(CommbenchError):
    def __init__(self, node):
        super().__init__(f"membership file is missing node {node}")
        self.node = node


class DuplicateNodeError(CommbenchError):
    def __init__(self, node):
        super().__init__(f"membership file lists node {node} more than once")
        self.node = node


class ConfigError(CommbenchError):
    pass
