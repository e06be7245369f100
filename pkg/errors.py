class SolvcxError(Exception):
    pass


class DimensionError(SolvcxError, ValueError):
    pass


class SpecError(SolvcxError, ValueError):
    pass


class SingularityError(SolvcxError):
    pass


class ConvergenceError(SolvcxError):
    def __init__(self, message, best_iterate=None):
        super().__init__(message)
        self.best_iterate = best_iterate


class DecompositionError(SolvcxError):
    pass


class NotSubalgebraError(SolvcxError):
    pass


class ClassificationError(SolvcxError):
    pass


class CompatibilityError(SolvcxError):
    pass
