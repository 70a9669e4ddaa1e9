"""Exception types shared across the package."""


class PromptDelayError(Exception):
    """Base class for all errors raised by this package."""


class FormulaSyntaxError(PromptDelayError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at column {position})"
        super().__init__(message)


class AutomatonFormatError(PromptDelayError):
    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class CapacityError(PromptDelayError):
    """A construction exceeded its configured state budget.

    ``stage`` names the pipeline stage that ran out of room so callers can
    report where the blowup happened.
    """

    def __init__(self, stage, limit, message=None):
        self.stage = stage
        self.limit = limit
        super().__init__(message or f"{stage}: state budget of {limit} exceeded")


class InternalError(PromptDelayError):
    """An invariant that the constructions guarantee was violated."""
