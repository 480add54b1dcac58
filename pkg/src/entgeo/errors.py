"""Exception hierarchy. Every error is a ``ValueError`` subclass except
``NoConvergence``, which is a ``RuntimeError``."""


class EntgeoError(Exception):
    """Base class for all package errors."""


class NotHermitian(EntgeoError, ValueError):
    pass


class NoConvergence(EntgeoError, RuntimeError):
    pass


class DimMismatch(EntgeoError, ValueError):
    pass


class NotPure(EntgeoError, ValueError):
    pass


class NotBipartite(EntgeoError, ValueError):
    pass


class NotQubits(EntgeoError, ValueError):
    pass


class BadParams(EntgeoError, ValueError):
    pass


class BadPOVM(EntgeoError, ValueError):
    pass


class InvariantViolation(EntgeoError, ValueError):
    """A state or measurement failed one of its structural invariants."""

    def __init__(self, invariant, detail=""):
        self.invariant = invariant
        msg = f"invariant violated: {invariant}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ParseError(EntgeoError, ValueError):
    """Malformed state file. ``field`` and ``line`` locate the problem when known."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        if where:
            message = f"{message} [{', '.join(where)}]"
        super().__init__(message)
