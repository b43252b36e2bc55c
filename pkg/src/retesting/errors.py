"""Exception types shared across the package."""


class RetestingError(Exception):
    """Base class for all package errors."""


class MissingStrategyEntry(RetestingError):
    """A student strategy has no stop probability for a reachable history."""


class MalformedProfile(RetestingError):
    """An equilibrium profile is structurally incomplete or inconsistent."""


class UnsupportedK(RetestingError):
    """The operation is only defined for a restricted range of test counts."""


class NoEquilibrium(RetestingError):
    """Raised by a constructor when no equilibrium exists at these parameters."""


class BadIndex(RetestingError):
    """An equilibrium family index is outside its valid range."""


class ScopeTooLarge(RetestingError):
    """Exhaustive enumeration was requested beyond the tractable policy space."""


class EmptyPopulation(RetestingError):
    """A simulation was configured with no students."""
