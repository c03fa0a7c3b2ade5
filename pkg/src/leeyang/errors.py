"""Exception hierarchy shared by all modules."""


class LeeYangError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(LeeYangError, ValueError):
    """An input violates a documented precondition."""


class CapExceededError(LeeYangError):
    """An exhaustive enumeration would exceed its configured cap."""


class ZeroPartitionError(LeeYangError, ZeroDivisionError):
    """A partition function vanished where a ratio was requested."""


class RankDeficientError(LeeYangError):
    """Interpolation samples do not determine a unique rational function."""


class InconsistentSamplesError(LeeYangError):
    """Recovered denominator vanishes at a sample point."""


class NormalizationError(LeeYangError):
    """The coefficient chosen for normalization is zero."""


class RootFindingError(LeeYangError):
    """Simultaneous iteration failed to converge.

    ``best`` carries the last iterate so callers can inspect it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class TemplateFalsifiedError(LeeYangError):
    """A gadget template violates one of its defining properties."""

    def __init__(self, message, closure=None):
        super().__init__(message)
        self.closure = closure


class CertificateFailure(LeeYangError):
    """Hamiltonian-path construction reached a dead end."""


class CompilerBugError(LeeYangError):
    """Cycle-cover weight is inconsistent with the reduction's bookkeeping."""


class PropertyFalsified(LeeYangError):
    """A probe found a counterexample to a property that should hold."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
