"""Exception hierarchy.

Every error carries a stable ``name`` used by the command line tool when it
serializes a refusal.
"""


class RigidityError(Exception):
    """Base class for all errors raised by this package."""

    name = "RigidityError"

    def to_dict(self):
        return {"error": self.name, "message": str(self)}


class DimensionMismatch(RigidityError, ValueError):
    name = "DimensionMismatch"


class AllZero(RigidityError, ValueError):
    name = "AllZero"


class RankAmbiguous(RigidityError):
    """Singular values fall inside the band where the rank cannot be trusted."""

    name = "RankAmbiguous"

    def __init__(self, message, singular_values=None):
        super().__init__(message)
        self.singular_values = None if singular_values is None else [float(s) for s in singular_values]

    def to_dict(self):
        d = super().to_dict()
        d["singular_values"] = self.singular_values
        return d


class FullSpace(RigidityError, ValueError):
    name = "FullSpace"


class DegenerateSpan(RigidityError):
    name = "DegenerateSpan"


class NotOnSheet(RigidityError, ValueError):
    name = "NotOnSheet"


class NotSpaceLike(RigidityError, ValueError):
    name = "NotSpaceLike"


class NotLightLike(RigidityError, ValueError):
    name = "NotLightLike"


class NotPositive(RigidityError, ValueError):
    name = "NotPositive"


class OnOrOutsideBoundary(RigidityError, ValueError):
    name = "OnOrOutsideBoundary"


class DuplicatePoints(RigidityError, ValueError):
    name = "DuplicatePoints"


class DuplicateRays(RigidityError, ValueError):
    name = "DuplicateRays"


class SameBoundary(RigidityError, ValueError):
    name = "SameBoundary"


class GramMismatch(RigidityError):
    name = "GramMismatch"


class CommonBoundaryPoint(RigidityError):
    name = "CommonBoundaryPoint"


class CrossRatioMismatch(RigidityError):
    name = "CrossRatioMismatch"


class VerificationFailed(RigidityError):
    """A constructed map did not reproduce the target configuration."""

    name = "VerificationFailed"
