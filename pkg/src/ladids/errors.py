"""Exception hierarchy shared by every stage of the LAD pipeline."""


class LadError(Exception):
    """Base class for all errors raised by ladids."""


class DataError(LadError):
    """Malformed or unusable input data."""


class ConflictError(DataError):
    """Positive and negative observations that cannot be told apart."""

    def __init__(self, message: str, pairs: list[tuple[int, int]] | None = None):
        super().__init__(message)
        self.pairs = pairs or []


class SupportSetError(DataError):
    """A column selection does not keep the two classes apart."""


class ConfigError(LadError):
    """Invalid combination of options or thresholds."""


class ModelError(LadError):
    """A model file is missing, corrupt or does not fit the input."""
