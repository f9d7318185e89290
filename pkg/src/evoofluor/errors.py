"""Exception hierarchy shared across the package."""


class EvooError(Exception):
    """Base class for all errors raised by evoofluor."""


class ValidationError(EvooError, ValueError):
    """A value violates a domain invariant (negative intensity, bad step, ...)."""


class UnknownWavelengthError(EvooError, KeyError):
    pass


class GridMismatchError(EvooError, ValueError):
    pass


class OilMismatchError(EvooError, ValueError):
    pass


class ZeroReferenceError(EvooError, ZeroDivisionError):
    pass


class LengthMismatchError(EvooError, ValueError):
    pass


class MissingSampleError(EvooError, KeyError):
    """Required (oil, step[, replicate]) measurements are absent."""

    def __init__(self, missing):
        self.missing = list(missing)
        shown = ", ".join(str(m) for m in self.missing[:10])
        more = "" if len(self.missing) <= 10 else f" (+{len(self.missing) - 10} more)"
        super().__init__(f"missing samples: {shown}{more}")

    def __str__(self):
        return self.args[0]


class EmptyVotesError(EvooError, ValueError):
    pass


class InsufficientWavelengthsError(EvooError, ValueError):
    pass


class DegenerateSeriesError(EvooError, ValueError):
    pass


class SingleClassError(EvooError, ValueError):
    pass


class DegenerateFeatureError(EvooError, ValueError):
    pass


class DimensionMismatchError(EvooError, ValueError):
    pass


class SchemaError(EvooError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GridInconsistencyError(EvooError, ValueError):
    pass


class UnknownKindError(EvooError, ValueError):
    pass


class EmptySelectionError(EvooError, ValueError):
    pass


class ProtocolError(EvooError, ValueError):
    pass


class OutputExistsError(EvooError, FileExistsError):
    pass
