"""Exception hierarchy.

Every error raised on bad input derives from :class:`HypergraphError`, which the
CLI maps to exit code 3.  :class:`BudgetExhausted` is deliberately *not* an input
error: it means a search stopped before it could decide.
"""

from __future__ import annotations


class HypergraphError(ValueError):
    """Base class for invalid input or violated preconditions."""


class MalformedHeader(HypergraphError):
    pass


class NonUniformEdge(HypergraphError):
    pass


class DuplicateVertexInEdge(HypergraphError):
    pass


class DuplicateEdge(HypergraphError):
    pass


class VertexOutOfRange(HypergraphError):
    pass


class LinearityViolation(HypergraphError):
    """Two edges share two or more vertices."""

    def __init__(self, first: int, second: int, shared):
        self.pair = (first, second)
        self.shared = tuple(sorted(shared))
        super().__init__(
            f"edges {first} and {second} share vertices {list(self.shared)}"
        )


class WrongUniformity(HypergraphError):
    pass


class NotTripartite(HypergraphError):
    pass


class ImproperColouring(HypergraphError):
    pass


class IndexOutOfRange(HypergraphError):
    pass


class InsufficientDensity(HypergraphError):
    pass


class UnsupportedOrder(HypergraphError):
    pass


class InfeasibleParameters(HypergraphError):
    pass


class CapExceeded(HypergraphError):
    pass


class LinkNotTwoRegular(HypergraphError):
    def __init__(self, vertex: int, reason: str = "link is not 2-regular"):
        self.vertex = vertex
        super().__init__(f"vertex {vertex}: {reason}")


class NotASurface(HypergraphError):
    pass


class CertificateFormatError(HypergraphError):
    pass


class RetryLimitExceeded(RuntimeError):
    """A randomized step did not succeed within its retry limit."""


class ProjectionInvalid(RuntimeError):
    """A product-graph cycle did not project to a valid witness (upstream bug)."""


class BudgetExhausted(RuntimeError):
    """A search hit its node or time budget; the answer is unknown."""

    def __init__(self, message: str = "budget exhausted", nodes: int = 0):
        self.nodes = nodes
        super().__init__(message)
