"""Exception hierarchy; ``code`` is the machine-readable tag used by the CLI."""


class SchwarzError(Exception):
    code = "error"


class ParameterError(SchwarzError, ValueError):
    code = "bad_parameter"


class DegenerateCurveError(SchwarzError):
    code = "degenerate_curve"


class SymmetryError(SchwarzError):
    code = "symmetry_violation"


class NonIsolatedError(SchwarzError):
    code = "non_isolated"


class PrecisionError(SchwarzError):
    code = "precision"


class ContinuationError(SchwarzError):
    code = "continuation"


class ClearanceError(ContinuationError):
    code = "clearance"


class DegenerateImageError(SchwarzError):
    code = "degenerate_image"

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class EvaluationError(SchwarzError, ArithmeticError):
    code = "evaluation"
