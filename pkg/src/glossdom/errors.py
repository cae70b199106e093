"""Exception hierarchy shared across the package."""


class GlossdomError(Exception):
    """Base class for all errors raised by this package."""


class CorpusFormatError(GlossdomError):
    """A corpus file failed to parse (bad row, duplicate id, bad header)."""


class LabelSpaceError(GlossdomError):
    """A label space or label file violates its constraints."""


class PatternError(GlossdomError):
    """A pattern template is malformed or used with the wrong arguments."""


class BackendError(GlossdomError):
    """Base class for scoring-backend failures."""


class TransportError(BackendError):
    """The backend could not be reached after the configured retries."""

    def __init__(self, message: str, attempts: int):
        super().__init__(f"{message} (after {attempts} attempts)")
        self.attempts = attempts


class ProtocolError(BackendError):
    """The backend answered with a payload that violates the wire contract."""


class ConfigError(GlossdomError):
    """Invalid engine or CLI configuration."""


class EvalError(GlossdomError):
    """Evaluation inputs violate a metric's preconditions."""
