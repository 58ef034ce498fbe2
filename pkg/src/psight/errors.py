"""Exception hierarchy shared across the package.

Every error carries an ``api_code`` so the CLI and the HTTP service can map
failures onto one error vocabulary: bad_request, not_found, conflict,
unprocessable, internal.
"""

from __future__ import annotations


class PsightError(Exception):
    """Base class for all package errors."""

    api_code = "internal"


class MalformedSvg(PsightError):
    """The SVG text is not well-formed XML."""

    api_code = "bad_request"


class NoCanvas(PsightError):
    """The root <svg> carries neither width/height nor a viewBox."""

    api_code = "bad_request"


class UnknownElementId(PsightError):
    """An edit referenced an element id not present in the document."""

    api_code = "not_found"


class InvalidAttributeValue(PsightError):
    """An edit supplied a value the target attribute cannot take."""

    api_code = "bad_request"


class EmptyChart(PsightError):
    """Feature extraction was asked to run on a chart with zero elements."""

    api_code = "unprocessable"


class EmptyPairSet(PsightError):
    """The contrastive loss requires at least one training pair."""

    api_code = "bad_request"


class NonFiniteLoss(PsightError):
    """Training produced a NaN/inf loss; carries the offending epoch."""

    api_code = "internal"

    def __init__(self, epoch: int, message: str | None = None):
        self.epoch = epoch
        super().__init__(message or f"non-finite loss at epoch {epoch}")


class VersionMismatch(PsightError):
    """A model file was written by an incompatible format version."""

    api_code = "bad_request"


class CorruptFile(PsightError):
    """A model file is truncated or structurally invalid."""

    api_code = "bad_request"


class TooFewElements(PsightError):
    """Pattern identification needs at least two scoped elements."""

    api_code = "unprocessable"


class WholeChartGroup(PsightError):
    """Salience is undefined for a group with no outside elements."""

    api_code = "unprocessable"


class EmptyScope(PsightError):
    """An operation was given an empty element scope."""

    api_code = "bad_request"


class StaleSuggestion(PsightError):
    """A suggestion was applied against a different document revision."""

    api_code = "conflict"


class NoHumanPatterns(PsightError):
    """EGA needs at least one annotated pattern."""

    api_code = "bad_request"


class NoModelGroups(PsightError):
    """PCR needs at least one identified element group."""

    api_code = "bad_request"


class NotFound(PsightError):
    """Generic lookup failure (chart ids, files)."""

    api_code = "not_found"
