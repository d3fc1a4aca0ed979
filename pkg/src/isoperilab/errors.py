"""Exception taxonomy shared by all isoperilab modules.

Every error raised on purpose by this package derives from IsoperilabError,
so callers can catch one base class at API boundaries.  The subclasses mark
*why* an input was rejected, not where: the same DimensionError is raised by
the eigensolver and by the vertex enumerator when a size cap is exceeded.
"""


class IsoperilabError(Exception):
    """Base class for all errors raised by isoperilab."""


class DimensionError(IsoperilabError):
    """An input exceeds a hard size or dimension cap."""


class StructuralError(IsoperilabError):
    """A polytope representation is malformed: unbounded, not full-dimensional,
    origin not interior, or a listed vertex is not an extreme point."""


class TangencyError(IsoperilabError):
    """A circumscribed-position formula was requested but some facet does not
    touch the inscribed ball."""


class SpecError(IsoperilabError):
    """A construction request is invalid (bad counts, parity, asymmetric input
    where symmetry is required)."""


class GeometryError(IsoperilabError):
    """A cut or vertex placement failed validation (slice removed the wrong
    number of vertices, point swallowed an existing vertex, ...)."""


class DegeneracyError(IsoperilabError):
    """A matrix or measure that must be full-rank is numerically singular."""


class ConvergenceError(IsoperilabError):
    """An iterative routine exhausted its budget without meeting tolerance."""


class NotPSDError(IsoperilabError):
    """A matrix expected to be positive semidefinite has a clearly negative
    eigenvalue."""


class SingularMatrixError(IsoperilabError):
    """A matrix power or inverse was requested for a singular matrix."""


class SamplingError(IsoperilabError):
    """Monte Carlo sampling degenerated (acceptance ratio effectively zero)."""


class InternalError(IsoperilabError):
    """An internal consistency check failed; this is a bug, not bad input."""
