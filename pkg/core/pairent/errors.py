"""
Error types

Every failure carries a machine-readable reason and the CLI exit code it maps to.
Validation problems exit with 2, failed certifications with 3.
"""

from typing import Any, Dict


class PairEntError(ValueError):
    """Base class for all library errors."""

    reason: str = "error"
    exit_code: int = 2

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.reason)
        self.detail = detail

    def to_dict(self) -> Dict[str, Any]:
        return {"status": "error", "reason": self.reason, "detail": self.detail}


class ZeroVector(PairEntError):
    reason = "zero_vector"


class DimensionMismatch(PairEntError):
    reason = "dimension_mismatch"


class HermiticityViolation(PairEntError):
    reason = "not_hermitian"


class TraceViolation(PairEntError):
    reason = "trace_violation"


class NegativeDiagonal(PairEntError):
    reason = "negative_diagonal"


class PSDViolation(PairEntError):
    reason = "psd_violation"


class DomainError(PairEntError):
    reason = "domain_error"


class DimensionTooLarge(PairEntError):
    reason = "dimension_too_large"


class RankError(PairEntError):
    reason = "rank_error"


class CertificationFailure(PairEntError):
    reason = "certification_failure"
    exit_code = 3


class ToleranceExceeded(PairEntError):
    reason = "tolerance_exceeded"
    exit_code = 3

    def __init__(self, detail: str = "", diagnostics: Dict[str, Any] = None):
        super().__init__(detail)
        self.diagnostics = diagnostics or {}

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["diagnostics"] = self.diagnostics
        return data


class ConvergenceError(PairEntError):
    reason = "no_convergence"
    exit_code = 3


class UsageError(PairEntError):
    """Bad flag combinations and unreadable or malformed input files."""

    reason = "usage_error"
    exit_code = 1
