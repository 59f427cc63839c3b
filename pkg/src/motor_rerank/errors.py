"""
MOTOR Error Definitions

This module contains the exception hierarchy shared by all MOTOR modules.
Every error carries the process exit code the CLI maps it to.
"""
from typing import Any, Optional


class MotorError(Exception):
    """Base class for all MOTOR errors."""

    exit_code: int = 1


class InputError(MotorError, ValueError):
    """Malformed input data or configuration (exit code 1)."""

    exit_code = 1


class NumericalError(MotorError, ArithmeticError):
    """Numerical failure in the similarity or transport stages (exit code 2)."""

    exit_code = 2


class ServiceFailure(MotorError):
    """Failure talking to the external generation service (exit code 3)."""

    exit_code = 3


# Input errors

class DimensionMismatch(InputError):
    """An embedding does not have the expected dimensionality."""

    def __init__(self, expected: int, actual: int, what: str = "embedding"):
        self.expected = expected
        self.actual = actual
        self.what = what
        super().__init__(f"{what} has dimension {actual}, expected {expected}")


class EmptyQuestion(InputError):
    """A query has an empty question text."""


class EmptyDescription(InputError):
    """A grounded finding has an empty abnormality description."""


class EmptyReport(InputError):
    """A candidate record has an empty report text."""


class MalformedBox(InputError):
    """A bounding box violates 0 <= min < max <= 1 on some axis."""


class ParseError(InputError):
    """A row of an input file could not be parsed."""

    def __init__(self, path: str, line: Optional[int], message: str):
        self.path = path
        self.line = line
        location = f"{path}:{line}" if line is not None else path
        super().__init__(f"{location}: {message}")


class MissingEmbedding(InputError):
    """A record id has no embedding for a required role."""

    def __init__(self, record_id: str, role: str = ""):
        self.record_id = record_id
        self.role = role
        detail = f" (role {role})" if role else ""
        super().__init__(f"MissingEmbedding({record_id!r}){detail}")


class DuplicateId(InputError):
    """The same record id occurs more than once."""

    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"DuplicateId({record_id!r})")


class UnknownRecordId(InputError):
    """A score or request references an id absent from the store."""

    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"UnknownRecordId({record_id!r})")


class UnknownPlaceholder(InputError):
    """A prompt template references a placeholder that does not exist."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown placeholder {{{name}}} in prompt template")


class InvalidConfig(InputError):
    """A configuration value violates its invariant."""


class MisalignedSamples(InputError):
    """Evaluation inputs do not contain the same number of samples."""


class NotAPermutation(InputError):
    """A re-ranked list is not a permutation of its initial list."""


class MissingQuery(InputError):
    """A query has no planted relevant ids."""


class InvalidSpec(InputError):
    """SyntheticCorpusSpec parameters are invalid."""


class OracleScopeExceeded(InputError):
    """The brute-force oracle was asked to solve a problem outside its scope."""


# Numerical errors

class NonFiniteInput(NumericalError):
    """An input contains NaN or infinite values."""


class InvalidMarginals(NumericalError):
    """A marginal has a nonpositive entry or does not sum to one."""


class NumericalUnderflow(NumericalError):
    """The Sinkhorn kernel collapsed; use the log-domain solver."""


# Service errors

class ServiceUnavailable(ServiceFailure):
    """The generation service could not be reached after all retries."""

    def __init__(self, url: str, attempts: int, cause: Optional[BaseException] = None):
        self.url = url
        self.attempts = attempts
        self.cause = cause
        super().__init__(f"Generation service {url} unavailable after {attempts} attempts: {cause}")


class ServiceError(ServiceFailure):
    """The generation service answered with a non-success response."""

    def __init__(self, status_code: Any, body: str):
        self.status_code = status_code
        self.body = body
        super().__init__(f"Generation service returned status {status_code} - Details: {body[:200]}")


class PipelineStageError(MotorError):
    """A pipeline stage failed; the partial trace names the stage."""

    def __init__(self, stage: str, cause: BaseException, trace: Any = None):
        self.stage = stage
        self.cause = cause
        self.trace = trace
        self.exit_code = getattr(cause, "exit_code", 1)
        super().__init__(f"Stage {stage!r} failed: {cause}")
