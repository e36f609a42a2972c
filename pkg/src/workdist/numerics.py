"""Dense complex linear algebra on small matrices, radix-2 FFT, and the
complex error function.

All operations are pure and reentrant.  Tolerances are module constants and
can be overridden per call.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import impl as _kern
from .errors import (
    LengthNotPowerOfTwoError,
    NoConvergenceError,
    NonHermitianError,
    NonUnitaryError,
)

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
JACOBI_MAX_SWEEPS = 100
# off-diagonal convergence target, relative to the largest input entry
JACOBI_OFF_FACTOR = 1e-14
# eigenvector components below this are treated as zero for the phase fix
PHASE_EPS = 1e-12


def as_square_complex(m, name="matrix"):
    """Coerce to a square complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a


def require_hermitian(m, tol=HERMITIAN_TOL, name="matrix"):
    """Return m as complex array, raising NonHermitianError above tol."""
    a = as_square_complex(m, name)
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise NonHermitianError(f"{name}: ||M - M^dagger||_max = {dev:.3e} > {tol:.1e}")
    return a


def require_unitary(m, tol=UNITARY_TOL, name="matrix"):
    """Return m as complex array, raising NonUnitaryError above tol."""
    a = as_square_complex(m, name)
    dev = np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0])))
    if dev > tol:
        raise NonUnitaryError(f"{name}: ||M^dagger M - I||_max = {dev:.3e} > {tol:.1e}")
    return a


@dataclass(frozen=True)
class SpectralPair:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a
    Hermitian matrix."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self):
        return self.values.shape[0]


def eig_hermitian(h, tol=HERMITIAN_TOL):
    """Diagonalize a Hermitian matrix with the cyclic Jacobi method.

    Eigenvalues are returned ascending; ties are broken deterministically by
    making the first non-negligible component of each eigenvector
    real-positive.
    """
    a = require_hermitian(h, tol, "H")
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    off_tol = max(JACOBI_OFF_FACTOR * scale, 5e-300)
    values, vectors, sweeps = _kern.jacobi_eigh(a, off_tol, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise NoConvergenceError(
            f"Jacobi sweeps exhausted ({JACOBI_MAX_SWEEPS}) for dimension {a.shape[0]}")
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        idx = np.flatnonzero(np.abs(col) > PHASE_EPS)
        k = idx[0] if idx.size else int(np.argmax(np.abs(col)))
        pivot = col[k]
        if pivot != 0:
            vectors[:, j] = col * (pivot.conjugate() / abs(pivot))
    return SpectralPair(values=values, vectors=vectors)


def fft_radix2(samples, direction="forward"):
    """Radix-2 Cooley-Tukey FFT of a power-of-two-length sequence.

    ``direction`` is "forward" (exp(-i...)) or "inverse" (exp(+i...), with
    the 1/N factor), so the two compose to the identity.
    """
    x = np.asarray(samples, dtype=np.complex128)
    if x.ndim != 1:
        raise ValueError("samples must be one-dimensional")
    n = x.shape[0]
    if n < 1 or (n & (n - 1)) != 0:
        raise LengthNotPowerOfTwoError(f"length {n} is not a power of two")
    if direction == "forward":
        inverse = False
    elif direction == "inverse":
        inverse = True
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    return _kern.fft_radix2(x, inverse)


def erf_complex(z):
    """Error function of complex argument (entire function).

    Maclaurin series where cancellation is mild, Faddeeva-style continued
    fraction elsewhere; |z| > 50 falls back to the asymptotic expansion.
    erf(-z) = -erf(z) and erf(conj z) = conj(erf z) hold exactly.
    """
    if np.isscalar(z) or np.asarray(z).ndim == 0:
        return _kern.erf_complex_scalar(complex(z))
    return _kern.erf_complex(np.asarray(z, dtype=np.complex128))


def unitary_from_bloch(n):
    """exp(-i n.sigma) = cos|n| I - i sin|n| (n_hat . sigma); n = 0 gives I."""
    v = np.asarray(n, dtype=np.float64)
    if v.shape != (3,):
        raise ValueError(f"Bloch vector must have 3 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("Bloch vector components must be finite")
    a = float(np.sqrt(v @ v))
    if a == 0.0:
        return np.eye(2, dtype=np.complex128)
    nx, ny, nz = v / a
    n_dot_sigma = np.array([[nz, nx - 1j * ny], [nx + 1j * ny, -nz]], dtype=np.complex128)
    return np.cos(a) * np.eye(2) - 1j * np.sin(a) * n_dot_sigma
