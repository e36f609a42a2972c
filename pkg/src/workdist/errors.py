"""Exception types raised by the workdist library.

Every failure mode has its own class so callers (and the CLI exit-code
mapping) can dispatch on the condition rather than on message text.
"""


class WorkdistError(Exception):
    """Base class for all workdist errors."""


class NonHermitianError(WorkdistError):
    """Matrix expected to be Hermitian exceeds the tolerance."""


class NoConvergenceError(WorkdistError):
    """Jacobi eigensolver did not converge within the sweep budget."""


class LengthNotPowerOfTwoError(WorkdistError):
    """Radix-2 FFT input length is not a power of two."""


class DimensionMismatchError(WorkdistError):
    """Operands have incompatible dimensions."""


class NonPositiveFrequencyError(WorkdistError):
    """Qubit splitting must be positive."""


class NonUnitaryError(WorkdistError):
    """Matrix expected to be unitary exceeds the tolerance."""


class InvalidStateError(WorkdistError):
    """Density matrix fails Hermiticity, trace or positivity checks."""


class NonRealAggregateError(WorkdistError):
    """Frequency-aggregated quasiprobability weight has a large imaginary part."""


class NonRealMomentError(WorkdistError):
    """Analytic moment has a large imaginary residue."""


class NonRealResidueError(WorkdistError):
    """A quantity that must be real came out with a large imaginary part."""


class InsufficientResolutionError(WorkdistError):
    """FFT reconstruction grid cannot resolve the requested broadening."""


class EmptyGridError(WorkdistError):
    """Sample grid is empty or not ascending."""


class DegenerateInitialSpectrumError(WorkdistError):
    """Delta-pointer limit requires a non-degenerate initial spectrum."""


class SingleLevelError(WorkdistError):
    """Interference scale needs at least two distinct initial eigenvalues."""


class NotAQubitError(WorkdistError):
    """Circuit-QED operations act on two-level systems only."""


class UnnormalizedFockVectorError(WorkdistError):
    """Cavity amplitude vector is not normalized."""


class CutoffTooSmallError(WorkdistError):
    """Fock-space cutoff leaves too much occupancy in the truncated tail."""


class QuadratureNotConvergedError(WorkdistError):
    """Radial quadrature changed under refinement beyond the tolerance."""


class ConfigError(WorkdistError):
    """Scenario configuration is invalid; message names the offending path."""
