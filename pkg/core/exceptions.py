"""
Pipeline exceptions.

Every error a command can surface derives from PipelineError and carries the
process exit code the CLI should use for it.
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_EXTERNAL = 3


class PipelineError(Exception):
    """Base class for all pipeline errors."""

    exit_code: int = EXIT_DATA


class UsageError(PipelineError):
    """Bad flags or configuration."""

    exit_code = EXIT_USAGE


class DataError(PipelineError):
    """Input data could not be used."""

    exit_code = EXIT_DATA


class ExternalServiceError(PipelineError):
    """A judge or embedding endpoint failed."""

    exit_code = EXIT_EXTERNAL


class ConfigInvalid(UsageError):
    """Configuration violates a component invariant."""


class ParseError(DataError):
    """A line of an input file could not be parsed."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class EmptyInput(DataError):
    """An operation that needs at least one item got none."""


class BaselineDegenerate(DataError):
    """Baseline accuracy or length is zero, so AES is undefined."""


class NonFiniteInput(DataError):
    """A log-probability is NaN or infinite."""


class EmbedderUnavailable(ExternalServiceError):
    """The embedding endpoint could not produce vectors."""


class JudgeUnavailable(ExternalServiceError):
    """The judge endpoint failed after the configured retries."""


class GroupSkipped(PipelineError):
    """A group has no correct response and skip-all-wrong is active."""

    def __init__(self, prompt_id: str):
        self.prompt_id = prompt_id
        super().__init__(f"group {prompt_id} skipped: all responses incorrect")
