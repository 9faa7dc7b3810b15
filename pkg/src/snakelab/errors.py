"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Operand shapes are incompatible for the requested operation."""


class ParameterError(ValueError):
    """A numeric parameter is outside its admissible range (e.g. a <= 0)."""


class ContractError(ValueError):
    """A caller violated an operation's precondition."""


class TrainingDivergedError(RuntimeError):
    """Training produced a non-finite loss. Carries the offending step."""

    def __init__(self, step: int, message: str | None = None):
        self.step = step
        super().__init__(message or f"training diverged at step {step} (non-finite loss)")


class FormatError(ValueError):
    """A serialized model blob is malformed, truncated, or unsupported."""


class CapacityError(RuntimeError):
    """No tested network size met the requested approximation tolerance."""


class IngestionError(ValueError):
    """A CSV file could not be ingested (too many unparseable rows)."""
