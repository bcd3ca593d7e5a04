"""Exception taxonomy shared across the package.

Every error carries a stable machine-readable ``code`` so the HTTP layer
and the CLI can map failures without string matching.
"""

from __future__ import annotations


class LitmonError(Exception):
    """Base class for all domain errors."""

    code = "Internal"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


# --- corpus store ---------------------------------------------------------

class DuplicateShortNameError(LitmonError):
    code = "DuplicateShortName"


class InvalidEnumValueError(LitmonError):
    code = "InvalidEnumValue"


class InvalidRecordError(LitmonError):
    """Record violates a hard structural invariant (rejected at the boundary)."""

    code = "InvalidRecord"


class UnknownRecordError(LitmonError):
    code = "UnknownRecord"


class UnknownEntityError(LitmonError):
    code = "UnknownEntity"


class UnknownDepthError(LitmonError):
    code = "UnknownDepth"


class UnknownFieldError(LitmonError):
    code = "UnknownField"


class MalformedRangeError(LitmonError):
    code = "MalformedRange"


class ReferentialIntegrityError(LitmonError):
    code = "ReferentialIntegrity"


# --- ingest ---------------------------------------------------------------

class EmptyInputError(LitmonError):
    code = "EmptyInput"


class NotFoundError(LitmonError):
    code = "NotFound"


class ServiceUnavailableError(LitmonError):
    code = "ServiceUnavailable"


class MalformedResponseError(LitmonError):
    code = "MalformedResponse"


# --- curation -------------------------------------------------------------

class VocabularyViolationError(LitmonError):
    code = "VocabularyViolation"


# --- analytics ------------------------------------------------------------

class EmptyCorpusError(LitmonError):
    code = "EmptyCorpus"


class MissingOrdinalError(LitmonError):
    code = "MissingOrdinal"


class UnknownReportError(LitmonError):
    code = "UnknownReport"


# --- export / api ---------------------------------------------------------

class IoFailureError(LitmonError):
    code = "IoFailure"


class BindFailureError(LitmonError):
    code = "BindFailure"
