"""Exception types shared across the package."""


class WalklabError(Exception):
    """Base class for all walklab errors."""


class CapExceeded(WalklabError):
    """Group closure enumeration exceeded the element cap."""


class EmptyGenerators(WalklabError):
    """A generating set was empty."""


class DuplicateGenerators(WalklabError):
    """A generating set contained the same element twice."""


class UnsupportedFamily(WalklabError):
    """Unknown builtin group family."""


class NotGenerating(WalklabError):
    """The given generators do not generate the whole group."""


class UnsupportedType(WalklabError):
    """Coxeter matrix block outside the realization catalog."""


class TooLarge(WalklabError):
    """Instance too large for an exhaustive verification."""


class ToleranceUnachievable(WalklabError):
    """Series truncation could not reach the requested tolerance."""


class SingularSystem(WalklabError):
    """Linear system for a first-passage quantity is singular."""


class BracketFailure(WalklabError):
    """Root bracketing failed; indicates a bug for valid inputs."""


class BudgetExhausted(WalklabError):
    """Search budget ran out (informational; carries partial results)."""

    def __init__(self, message, results=None):
        super().__init__(message)
        self.results = results or []


class ConfigError(WalklabError):
    """Invalid run configuration."""
