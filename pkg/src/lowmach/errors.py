"""Exception types shared across the solver modules."""


class TopologyError(RuntimeError):
    """Mesh connectivity is inconsistent (e.g. a face with three elements)."""


class GeometryError(RuntimeError):
    """A geometric entity is degenerate (zero volume, zero area, ...)."""


class StateError(RuntimeError):
    """A physical state is inadmissible (non-positive density, ...)."""


class NumericError(RuntimeError):
    """An iterative procedure failed to converge."""


class DivergenceError(NumericError):
    """The solution blew up; the message names the first offending cell."""


class PositivityError(NumericError):
    """An evolved density lost positivity; the step must be aborted."""


class SourceConsistencyError(RuntimeError):
    """A manufactured source term does not satisfy its governing equation."""
