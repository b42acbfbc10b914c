"""Typed errors raised by heightlab.

Every domain failure derives from :class:`HeightLabError` so the CLI can map
it to exit code 1 and print the type name.
"""


class HeightLabError(Exception):
    pass


class FactorDegreeExceeded(HeightLabError):
    pass


class NotAUnit(HeightLabError):
    pass


class SupportsNotDisjoint(HeightLabError):
    pass


class DegenerateMap(HeightLabError):
    pass


class IndeterminateRestriction(HeightLabError):
    pass


class NotMoebius(HeightLabError):
    pass


class OpenContour(HeightLabError):
    pass


class SingularityOnPath(HeightLabError):
    pass


class NoConvergence(HeightLabError):
    pass


class RoundingAmbiguous(HeightLabError):
    pass


class GeneralPositionFailure(HeightLabError):
    pass


class NotOnCurve(HeightLabError):
    pass


class PrecisionUnreachable(HeightLabError):
    pass


class ZeroElement(HeightLabError):
    pass


class VerificationFailed(HeightLabError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class PolySyntaxError(HeightLabError):
    """Malformed polynomial text; ``position`` is a 0-based column."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
