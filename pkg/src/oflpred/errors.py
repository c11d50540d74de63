class ValidationError(ValueError):
    """Input data violates a structural requirement."""


class ParseError(ValidationError):
    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class ConfigurationError(ValueError):
    """Invalid parameters for an algorithm or experiment."""
