"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for geometric failures."""


class DimensionMismatch(GeometryError):
    pass


class EmptyPolyhedronError(GeometryError):
    """Raised when a conversion discovers the feasible set is empty."""


class NotAFaceError(GeometryError):
    """Selector inequality is invalid for the polyhedron or selects nothing."""


class FaceLimitExceeded(GeometryError):
    """Face or cell enumeration hit the ROTAPLEX_MAX_FACES cap."""


class MergeConvexityError(GeometryError):
    """A signature class closed up to a non-convex set; the construction is unsound."""


class DegenerateMapError(GeometryError):
    """Projective map evaluated at a point where its denominator vanishes."""


class ConventionError(GeometryError):
    """Operation invoked with an unsupported polarity convention for the input."""
