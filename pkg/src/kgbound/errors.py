"""Exception hierarchy shared by every kgbound module."""


class KGBoundError(Exception):
    """Base class for all kgbound failures."""


class NegativeDiscriminant(KGBoundError, ValueError):
    """An exponent formula has no real root, so no bound state of this form."""


class ZeroC3(KGBoundError, ValueError):
    """Jacobi branch requested for parameters with c3 == 0."""


class NonpositiveScale(KGBoundError, ValueError):
    """Laguerre argument scale 2p - c2 is not positive (no decaying solution)."""


class BranchMismatch(KGBoundError, ValueError):
    """Exponent data from one branch passed to the other branch's formula."""


class DegenerateRecurrence(KGBoundError, ArithmeticError):
    """Jacobi recurrence denominator vanishes for the requested parameters."""


class NonpositiveArgument(KGBoundError, ValueError):
    """log_gamma called with x <= 0."""


class UnsupportedCoupling(KGBoundError, ValueError):
    """The requested vector/scalar coupling is not solvable for this potential."""


class InvalidParameters(KGBoundError, ValueError):
    """Physical parameters outside the admissible set."""


class HulthenDeformationUnsupported(InvalidParameters):
    """Hulthen with l > 0 requires q = 1 for the centrifugal approximation."""


class NoRootInWindow(KGBoundError):
    """No admissible sign change of the quantization residual in the window."""


class DiscriminantLostMidBracket(KGBoundError):
    """A precondition failed inside a bracket that looked valid at its ends."""

    def __init__(self, message, interval):
        super().__init__(message)
        self.interval = interval


class SupercriticalCoupling(KGBoundError, ValueError):
    """Coulomb coupling with (Z alpha)^2 >= (l + 1/2)^2."""


class TransformDomainViolation(KGBoundError, ValueError):
    """A radius maps outside the variable transform's s-domain."""


class NonDecayingTail(KGBoundError):
    """Sampled wavefunction has not decayed at the end of the grid."""


class TrivialSolution(KGBoundError):
    """The function under test vanishes identically; residual is meaningless."""


class NoTransitionInWindow(KGBoundError):
    """Shooting found no node-count transition for the requested n."""


class MismatchedProblem(KGBoundError, ValueError):
    """Algebraic and numerical results do not describe the same problem."""


class CliError(KGBoundError):
    """Command-line failure carrying its process exit status."""

    exit_code = 1


class ConfigError(CliError):
    """Configuration failed validation; nothing was computed."""

    exit_code = 2


class ComputeError(CliError):
    """A computation failed (or, with --strict, warned)."""

    exit_code = 3


class VerificationFailure(CliError):
    """At least one oracle comparison exceeded its tolerance."""

    exit_code = 4
