"""Error types shared across the engine.

Every error carries a stable machine-readable ``code`` that surfaces
unchanged through the CLI (exit-code messages) and the HTTP API (the
``code`` field of error bodies).
"""

from __future__ import annotations


class HiTailorError(Exception):
    """Base class for all engine errors."""

    code = "Error"

    def __init__(self, message: str, **detail):
        super().__init__(message)
        self.detail = detail


class ModelError(HiTailorError):
    """Raised when a model cannot be constructed or is internally broken."""

    code = "InvalidModel"


class RaggedDepth(ModelError):
    code = "RaggedDepth"


class DuplicateSibling(ModelError):
    code = "DuplicateSibling"


class UnknownLabel(HiTailorError):
    code = "UnknownLabel"


class NonContiguous(HiTailorError):
    code = "NonContiguous"


class AmbiguousSequence(HiTailorError):
    code = "AmbiguousSequence"


class OverlapError(HiTailorError):
    code = "OverlapError"


class OrphanHeading(HiTailorError):
    code = "OrphanHeading"


class ShapeError(HiTailorError):
    code = "ShapeError"


class SchemaError(HiTailorError):
    code = "SchemaError"


class NotUniform(HiTailorError):
    code = "NotUniform"


class LastLevel(HiTailorError):
    code = "LastLevel"


class NonNumeric(HiTailorError):
    code = "NonNumeric"


class DuplicateDerived(HiTailorError):
    code = "DuplicateDerived"


class NothingToRemove(HiTailorError):
    code = "NothingToRemove"


class DerivedPresent(HiTailorError):
    code = "DerivedPresent"


class NotCategorical(HiTailorError):
    code = "NotCategorical"


class IrregularGroups(HiTailorError):
    code = "IrregularGroups"


class EmptyHistory(HiTailorError):
    code = "EmptyHistory"


class ScriptError(HiTailorError):
    """A transform script failed partway through.

    Carries the index of the failing op, the underlying error, and the
    last model that was still good.
    """

    code = "ScriptError"

    def __init__(self, index: int, cause: HiTailorError, partial_model):
        super().__init__(f"{cause.code} at op {index}: {cause}")
        self.index = index
        self.cause = cause
        self.partial_model = partial_model


class LevelMismatch(HiTailorError):
    code = "LevelMismatch"


class NoRecommendation(HiTailorError):
    code = "NoRecommendation"


class ForbiddenBinding(HiTailorError):
    code = "ForbiddenBinding"


class MissingChannel(HiTailorError):
    code = "MissingChannel"


class EmptyInput(HiTailorError):
    code = "EmptyInput"


class UnknownTemplate(HiTailorError):
    code = "UnknownTemplate"
