"""Exception hierarchy for polyrigid."""


class PolyrigidError(Exception):
    """Base class for all errors raised by this package."""


# trigonometry
class DegenerateTriangle(PolyrigidError, ValueError):
    pass


class NonPositiveLength(PolyrigidError, ValueError):
    pass


class NonPositiveRadius(PolyrigidError, ValueError):
    pass


class UnsupportedGeometry(PolyrigidError, ValueError):
    pass


class IndexMismatch(PolyrigidError, ArithmeticError):
    """Tangent-law quantities disagree between indices (kernel bug)."""


# quadrature / charts
class SingularIntegrand(PolyrigidError, ValueError):
    pass


class OutOfDomain(PolyrigidError, ValueError):
    pass


class OutOfImage(PolyrigidError, ValueError):
    pass


class UnsupportedArity(PolyrigidError, ValueError):
    pass


# meshes and metrics
class InvalidMesh(PolyrigidError, ValueError):
    pass


class BadIndex(InvalidMesh):
    pass


class DuplicateTriangle(InvalidMesh):
    pass


class NonManifoldEdge(InvalidMesh):
    pass


class Disconnected(InvalidMesh):
    pass


class ClosedSurface(InvalidMesh):
    pass


class IsolatedVertex(InvalidMesh):
    pass


class InvalidMetric(PolyrigidError, ValueError):
    pass


class MissingEdgeLength(InvalidMetric, KeyError):
    pass


class NotApplicable(PolyrigidError, ValueError):
    pass


# solver
class InfeasibleSpec(PolyrigidError, ValueError):
    pass


class SolverError(PolyrigidError, RuntimeError):
    """Solver failure; ``report`` holds the state reached so far."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class MaxIterations(SolverError):
    pass


class LineSearchFailure(SolverError):
    pass


# workbench
class NoCyclicPolygon(PolyrigidError, ValueError):
    pass


class LayoutInconsistent(PolyrigidError, ValueError):
    pass


class DocumentError(PolyrigidError, ValueError):
    """Malformed JSON document."""
