"""Exception hierarchy shared by all bose2d modules."""


class Bose2DError(Exception):
    """Base class for all library-specific failures."""


class NegativeInput(Bose2DError):
    """A physical input that must be positive (or nonnegative) is not."""


class DegenerateGas(Bose2DError):
    """The gas parameter rho*a^2 is too large for the dilute-regime formulas."""


class SolverDivergence(Bose2DError):
    """The radial ODE integrator failed to reach the matching radius."""


class NonPositiveLogArgument(Bose2DError):
    """The extracted scattering length is not below the matching radius."""


class MeshMismatch(Bose2DError):
    """A sampled profile and a potential disagree about the radial mesh."""


class MissingScatteringSolution(Bose2DError):
    """The interior pair profile is required but was not supplied."""


class QuadratureNonconvergence(Bose2DError):
    """An adaptive quadrature could not certify the requested tolerance."""


class NonPositiveDispersion(Bose2DError):
    """p^4 + 2 p^2 rho0 g_hat(p) is not positive at some lattice point."""


class CutoffTooSmall(Bose2DError):
    """A momentum or occupation cutoff truncates a non-negligible tail."""


class CutoffTooLarge(Bose2DError):
    """An infrared cutoff is too large for the asymptotic closed form."""


class NoCondensateSolution(Bose2DError):
    """The condensate fixed-point equation has no admissible root."""


class DomainError(Bose2DError):
    """An argument lies outside the mathematical domain of the function."""


class DimensionMismatch(Bose2DError):
    """Two matrices that must share a dimension do not."""


class WordTooLong(Bose2DError):
    """An operator word exceeds the supported Wick length."""


class UsageError(Bose2DError):
    """Invalid CLI flags or configuration (exit code 2)."""
