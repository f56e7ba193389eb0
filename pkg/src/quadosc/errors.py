"""Exception types raised across the package."""


class QuadOscError(Exception):
    """Base class for all package-specific errors."""


class PumpOutOfDomain(QuadOscError):
    """Tabulated pump schedule queried outside its time domain."""


class NonFiniteCoefficient(QuadOscError):
    """A user coefficient function returned NaN or infinity."""


class KineticDegenerate(QuadOscError):
    """Kinetic coefficient a(t) vanishes; the characteristic form is singular."""


class StepSizeUnderflow(QuadOscError):
    """Adaptive integrator could not make progress (step size underflow)."""


class ToleranceNotMet(QuadOscError):
    """Solved pair failed the Wronskian consistency gate."""


class CausticEncountered(QuadOscError):
    """mu0(t) = 0: the Gaussian kernel is undefined at a caustic."""


class TimeNotPositive(QuadOscError):
    """Propagator coefficients require t > 0."""


class GridUnderResolved(QuadOscError):
    """Grid cannot resolve the kernel phase or the state."""


class TailNotDecayed(QuadOscError):
    """Field amplitude does not decay at the grid boundary."""


class NonConvergentIntegral(QuadOscError):
    """Gaussian integral has a non-positive-definite quadratic form."""


class InvalidInvariantConstant(QuadOscError):
    """Invariant constant C0 must be positive."""


class TruncationTooSmall(QuadOscError):
    """Fourier trial truncation order below the supported minimum."""


class LinearSolveFailure(QuadOscError):
    """Banded linear solve failed inside the PDE integrator."""


class BoundaryContamination(QuadOscError):
    """Evolved field reached the hard-wall boundary above threshold."""


class GridMismatch(QuadOscError):
    """Fields supplied on inconsistent grids."""


class ConfigInvalid(QuadOscError):
    """Run configuration failed schema validation."""
