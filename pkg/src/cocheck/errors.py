"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all engine errors."""


class ArityError(EngineError):
    """Tensor arities are incompatible for the requested operation."""


class RangeError(EngineError):
    """A label or a produced index falls outside a declared family range."""


class SpecError(EngineError):
    """A coalgebra spec or construction input violates a precondition."""


class ShiftBoundError(EngineError):
    """The declared shift bound failed validation on a required window."""


class SpecFileError(EngineError):
    """A spec file could not be parsed; carries location information."""

    def __init__(self, message, *, key=None, line=None, column=None):
        self.key = key
        self.line = line
        self.column = column
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")


class IdentityParseError(EngineError):
    """An identity expression could not be parsed; carries the offset."""

    def __init__(self, message, position=None):
        self.position = position
        suffix = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{suffix}")
