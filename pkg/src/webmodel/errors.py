"""Error taxonomy shared by all kernel layers.

Each error exposes a stable machine-readable ``code`` (its class name); the
HTTP layer maps codes to wire responses without string matching.
"""

from __future__ import annotations


class KernelError(Exception):
    """Base class for every error raised by the kernel."""

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message

    @property
    def code(self) -> str:
        return type(self).__name__


# -- metamodel registry -------------------------------------------------

class DuplicateType(KernelError):
    """A name was registered twice in the same registry."""


class RegistrySealed(KernelError):
    """Mutation attempted on a sealed registry."""


class UnknownType(KernelError):
    """A type name is not present in the metamodel registry."""


# -- model (de)serialization --------------------------------------------

class ParseError(KernelError):
    """Model text or a wire payload is malformed."""


class DuplicateId(KernelError):
    """Two elements in one model carry the same id."""


# -- workspace and sessions ----------------------------------------------

class WorkspaceMissing(KernelError):
    """The workspace directory does not exist."""


class NotFound(KernelError):
    """No model file exists for the requested uri."""


class IoError(KernelError):
    """A filesystem operation failed."""


# -- command execution ----------------------------------------------------

class UnknownElement(KernelError):
    """A command referenced an element id that is not in the model."""


class CompositionForbidden(KernelError):
    """The composition service does not permit the (parent, child) pair."""


class TypeMismatch(KernelError):
    """An attribute value does not match the declared value type."""


class InvariantViolation(KernelError):
    """Applying the command would break a model invariant."""


class NothingToUndo(KernelError):
    """Undo requested on an empty undo stack."""


class NothingToRedo(KernelError):
    """Redo requested on an empty redo stack."""


# -- element handlers ------------------------------------------------------

class NoHandler(KernelError):
    """No element handler is registered for the element's type."""


# -- diagrams ---------------------------------------------------------------

class InvalidScope(KernelError):
    """The requested diagram scope element does not exist or has the wrong type."""


class StaleScope(KernelError):
    """The diagram scope element was deleted after the diagram was opened."""


# -- server startup ----------------------------------------------------------

class PortInUse(KernelError):
    """The requested TCP port is already bound."""


class RegistryInconsistent(KernelError):
    """Startup sanity checks found registry inconsistencies."""
