"""Exception hierarchy shared by every module.

The CLI maps each family to an exit code: input/config problems exit 2,
metric precondition failures exit 3, backend failures exit 4.
"""


class RewriteEvalError(Exception):
    """Base class for all errors raised by this package."""


class CorpusError(RewriteEvalError):
    """Malformed or inconsistent corpus input."""


class StructureError(CorpusError):
    """Files or records do not line up (counts, ordering, unknown ids)."""


class LoadError(CorpusError):
    """A single line of an input file is unusable."""

    def __init__(self, message, path=None, line_number=None):
        self.path = path
        self.line_number = line_number
        where = []
        if path is not None:
            where.append(str(path))
        if line_number is not None:
            where.append(f"line {line_number}")
        if where:
            message = f"{':'.join(where)}: {message}"
        super().__init__(message)


class M2ParseError(LoadError):
    """An ``A`` line in an M2 file could not be parsed."""


class ConfigError(RewriteEvalError):
    """Invalid cascade or backend configuration."""


class UsageError(RewriteEvalError, ValueError):
    """An API was called with arguments that violate its contract."""


class MetricError(RewriteEvalError, ValueError):
    """A metric's preconditions are not met (missing predictions, no references, ...)."""


class UndefinedInputError(MetricError):
    """The metric is mathematically undefined for this input (e.g. zero words)."""


class BackendError(RewriteEvalError):
    """A model backend failed after exhausting its retries."""

    def __init__(self, message, backend_id=None, attempts=None):
        self.backend_id = backend_id
        self.attempts = attempts
        super().__init__(message)


class ProtocolError(BackendError):
    """A backend answered, but the response did not follow the wire protocol."""


class PipelineError(RewriteEvalError):
    """A cascade stage could not produce any output."""
