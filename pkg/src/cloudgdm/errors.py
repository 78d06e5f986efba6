"""Exception hierarchy shared by every module."""


class CloudGDMError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(CloudGDMError, ValueError):
    pass


class UndefinedCentroidError(CloudGDMError, ValueError):
    pass


class UndefinedCorrelationError(CloudGDMError, ValueError):
    pass


class LPError(CloudGDMError):
    pass


class InfeasibleError(LPError):
    pass


class UnboundedError(LPError):
    pass


class IncompleteSurveyError(CloudGDMError, ValueError):
    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)


class ParseError(CloudGDMError, ValueError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ValidationError(CloudGDMError, ValueError):
    pass
