from typing import Any, Dict, Optional


class VcdimError(Exception):
    """Base class for every error raised by the estimation pipeline"""

    error_type = "vcdim_error"
    exit_code = 10

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = str(message)
        self.details = details or {}


class NonFiniteError(VcdimError):
    error_type = "non_finite"
    exit_code = 11


class EmptyStratumError(VcdimError):
    error_type = "empty_stratum"
    exit_code = 12


class LengthMismatchError(VcdimError):
    error_type = "length_mismatch"
    exit_code = 13


class ZeroVarianceError(VcdimError):
    error_type = "zero_variance"
    exit_code = 14

    def __init__(self, column: str):
        super().__init__(f"Column '{column}' has zero variance", {"column": column})
        self.column = column


class SingularCovarianceError(VcdimError):
    error_type = "singular_covariance"
    exit_code = 15


class MissingColumnError(VcdimError):
    error_type = "missing_column"
    exit_code = 16

    def __init__(self, column: str):
        super().__init__(f"Column '{column}' not found", {"column": column})
        self.column = column


class StratumTooSmallError(VcdimError):
    error_type = "stratum_too_small"
    exit_code = 17


class LossExceedsBoundError(VcdimError):
    error_type = "loss_exceeds_bound"
    exit_code = 18


class DomainError(VcdimError):
    error_type = "domain_error"
    exit_code = 19


class AllDomainError(VcdimError):
    error_type = "all_domain_error"
    exit_code = 20


class TooFewRowsError(VcdimError):
    error_type = "too_few_rows"
    exit_code = 21


class NoModelWithinTError(VcdimError):
    error_type = "no_model_within_t"
    exit_code = 22


class ParseError(VcdimError):
    error_type = "parse_error"
    exit_code = 23

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        super().__init__(message, {"row": row, "column": column})
        self.row = row
        self.column = column


class InvalidConfigError(VcdimError):
    error_type = "invalid_config"
    exit_code = 24
