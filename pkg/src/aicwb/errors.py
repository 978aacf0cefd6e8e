"""Exception hierarchy shared by the engine, CLI, and HTTP service.

Every error carries a stable machine ``code`` so the HTTP layer can map
engine failures to status codes table-driven instead of by isinstance
chains.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for all domain errors."""

    code = "WORKBENCH_ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class NotFoundError(WorkbenchError):
    code = "NOT_FOUND"


class ConflictError(WorkbenchError):
    """Duplicate name or token within a session."""

    code = "CONFLICT"


class InputError(WorkbenchError):
    """Malformed or out-of-contract caller input."""

    code = "VALIDATION"


class GatingError(WorkbenchError):
    """Operation targeted a step that is locked or complete."""

    code = "GATING"


class TemplateError(WorkbenchError):
    """Assertion text does not start with the mandatory prefix."""

    code = "TEMPLATE_PREFIX"


class DanglingReferenceError(WorkbenchError):
    code = "DANGLING_REF"


class FixednessError(WorkbenchError):
    """Second primary purpose without a recorded revision."""

    code = "FIXEDNESS"


class SphereConstraintError(WorkbenchError):
    """Influence/control action violating a sphere-of-control boundary."""

    code = "SPHERE_CONSTRAINT"


class ChainError(WorkbenchError):
    """Purpose/action linked to the wrong kind of upstream element."""

    code = "CHAIN"


class EmptyStepError(WorkbenchError):
    """Completion attempted with no current assertion on the step."""

    code = "EMPTY_STEP"


class IdempotencyError(WorkbenchError):
    """Completion attempted on an already complete step."""

    code = "ALREADY_COMPLETE"


class StateError(WorkbenchError):
    """Step is not in the state the operation requires."""

    code = "STATE"


class StaleReferenceError(WorkbenchError):
    """Revision targeted an assertion that is already superseded."""

    code = "STALE_REFERENCE"


class VersionConflictError(WorkbenchError):
    code = "VERSION_CONFLICT"

    def __init__(self, expected: int, current: int):
        super().__init__(
            f"expected version {expected} but session is at version {current}"
        )
        self.expected = expected
        self.current = current


class DocumentParseError(WorkbenchError):
    """Session document bytes could not be parsed."""

    code = "PARSE"


class UnsupportedVersionError(WorkbenchError):
    """Session document format_version is not supported."""

    code = "FORMAT_VERSION"
