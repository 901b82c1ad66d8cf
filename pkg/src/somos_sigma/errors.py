"""Structured exceptions shared by every module.

Each error carries enough data for the CLI to emit a JSON error record.
"""

from __future__ import annotations


class SomosSigmaError(Exception):
    """Base class; ``payload`` is serialised verbatim by the CLI."""

    kind = "error"

    def __init__(self, message: str, **payload):
        super().__init__(message)
        self.payload = payload

    def to_json(self) -> dict:
        out = {"error": self.kind, "message": str(self)}
        out.update({k: _plain(v) for k, v in self.payload.items()})
        return out


def _plain(value):
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)


class ValidationError(SomosSigmaError):
    kind = "validation"


class DomainError(SomosSigmaError):
    kind = "domain"


class VanishingTauError(SomosSigmaError):
    """A divisor term of a bilinear recurrence is exactly zero."""

    kind = "vanishing_tau"

    def __init__(self, index: int, message: str | None = None):
        super().__init__(message or f"tau vanishes at index {index}", index=index)
        self.index = index


class SingularSystemError(SomosSigmaError):
    kind = "singular_system"

    def __init__(self, rank: int, size: int):
        super().__init__(
            f"matrix is singular: rank {rank} of {size}, kernel dimension {size - rank}",
            rank=rank,
            size=size,
            kernel_dimension=size - rank,
        )
        self.rank = rank
        self.size = size


class NotDivisibleError(SomosSigmaError):
    kind = "not_divisible"


class DegenerateCurveError(SomosSigmaError):
    kind = "degenerate_curve"


class PoleError(SomosSigmaError):
    kind = "pole"


class PrecisionError(SomosSigmaError):
    kind = "precision"


class CapExceededError(SomosSigmaError):
    kind = "cap_exceeded"


class ConsistencyError(SomosSigmaError):
    kind = "consistency"


class BranchError(SomosSigmaError):
    kind = "branch"


class InsufficientDataError(SomosSigmaError):
    kind = "insufficient_data"
