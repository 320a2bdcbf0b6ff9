"""
Custom Exceptions for the Hidden-Neuron Advisor

Provides structured exception handling with clear error categories.
Every error maps to a stable CLI exit code.
"""

from config import EXIT_RUNTIME, EXIT_VALIDATION


class AdvisorError(Exception):
    """
    Base exception for all advisor errors.

    Attributes:
        message: Detailed message for the log
        user_message: Short message printed by the CLI
        exit_code: Process exit status when the error reaches main
    """

    exit_code = EXIT_RUNTIME

    def __init__(self, message: str, user_message: str = None):
        self.message = message
        self.user_message = user_message or message
        super().__init__(self.message)


class ConfigurationError(AdvisorError):
    """
    Configuration related errors.

    Raised when:
    - A sweep, feature, learner or pipeline config violates its invariants
    - A referenced path does not exist
    """

    exit_code = EXIT_VALIDATION

    def __init__(self, message: str):
        super().__init__(message=message, user_message=f"Invalid configuration: {message}")


class TableLayoutError(AdvisorError):
    """
    A CSV artifact does not have the expected layout.

    Attributes:
        path: File that failed
        line: 1-based file line (the header is line 1)
        n_fields: Fields found on that line, when known
    """

    exit_code = EXIT_VALIDATION

    def __init__(self, path: str, line: int, details: str, n_fields: int = None):
        super().__init__(message=f"{path} line {line}: {details}")
        self.path = path
        self.line = line
        self.details = details
        self.n_fields = n_fields


class DatasetError(AdvisorError):
    """
    Dataset ingestion and preprocessing errors.

    Raised when:
    - A file cannot be parsed
    - A dataset violates a preprocessing precondition
    """

    exit_code = EXIT_VALIDATION


class DatasetParseError(DatasetError):
    """Malformed CSV/ARFF input."""

    def __init__(self, path: str, details: str = ""):
        message = f"Could not parse {path}"
        if details:
            message += f": {details}"
        super().__init__(message=message)
        self.path = path


class DatasetValidationError(DatasetError):
    """Dataset content unusable for the requested operation."""

    def __init__(self, reason: str):
        super().__init__(
            message=f"Dataset validation failed: {reason}",
            user_message=f"Invalid dataset: {reason}",
        )
        self.reason = reason


class ModelError(AdvisorError):
    """ELM training or prediction errors."""


class ElmTrainingError(ModelError):
    """Training produced unusable numbers or got bad parameters."""

    def __init__(self, details: str):
        super().__init__(message=f"ELM training failed: {details}")


class ShapeMismatchError(ModelError):
    """Input dimension or length does not match."""

    def __init__(self, expected, found, what: str = "input dimension"):
        super().__init__(message=f"{what} mismatch: expected {expected}, got {found}")
        self.expected = expected
        self.found = found


class SweepError(AdvisorError):
    """Label search errors (empty corpus, no usable hidden-neuron count)."""


class MetaBaseError(AdvisorError):
    """
    Meta-base assembly and persistence errors.

    Raised when:
    - Inputs to the join are inconsistent
    - A stored meta-base does not match the expected schema
    """

    exit_code = EXIT_VALIDATION


class MetaBaseSchemaError(MetaBaseError):
    """A meta-base row does not have the expected layout."""

    def __init__(self, row: int, details: str):
        super().__init__(message=f"Meta-base row {row}: {details}")
        self.row = row


class MetaBaseVersionError(MetaBaseError):
    """Stored schema version differs from the one this tool writes."""

    def __init__(self, found, expected):
        super().__init__(
            message=f"Meta-base schema version {found} is not supported (expected {expected})"
        )


class DuplicateNameError(MetaBaseError):
    """The same dataset name appears twice in one input."""

    def __init__(self, name: str, source: str):
        super().__init__(message=f"Duplicate dataset name '{name}' in {source}")
        self.name = name


class MetaLearnerError(AdvisorError):
    """Meta-learner fitting and prediction errors."""


class UnknownFamilyError(MetaLearnerError):
    """Requested learner family or preset does not exist."""

    exit_code = EXIT_VALIDATION

    def __init__(self, family: str):
        super().__init__(message=f"Unknown meta-learner '{family}'")


class ConfigHashMismatchError(MetaLearnerError):
    """Feature extractor config differs from the one the model was trained with."""

    exit_code = EXIT_VALIDATION

    def __init__(self, expected: str, found: str):
        super().__init__(
            message=f"Feature config hash mismatch: model has {expected}, features have {found}",
            user_message="Meta-features were extracted with a different configuration than the model expects.",
        )


class EvaluationError(AdvisorError):
    """Leave-one-out evaluation errors."""


class PipelineStageError(AdvisorError):
    """Unexpected failure inside a pipeline stage."""

    def __init__(self, stage: str, details: str):
        super().__init__(
            message=f"[{stage}] {details}",
            user_message=f"Stage '{stage}' failed. See the log for details.",
        )
        self.stage = stage
