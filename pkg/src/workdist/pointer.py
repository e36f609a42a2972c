"""Position-pointer measurement scheme: Gaussian detector shifted in
proportion to the energy injected into the system.

The only detector parameters that enter any observable are the wavepacket
width sigma and the composite shift-per-energy s; the initial center x0 is
bookkeeping.  The recorded density is

    P(dx) = sum_{ikj} Re[rho_ik U_ji conj(U_jk)]
            * exp(-[(dx - s eps_ji)^2 + (dx - s eps_jk)^2] / (4 sigma^2))
            / (sqrt(2 pi) sigma),

with eps_ji = eps_j^T - eps_i^0.  Off-diagonal (i != k) blocks integrate to
zero, so the density is normalized and true-probability for any width; they
are exponentially suppressed once s * gap >> sigma.
"""

from dataclasses import dataclass

import numpy as np

from .distributions import WorkQuasiDistribution
from .errors import (
    DegenerateInitialSpectrumError,
    DimensionMismatchError,
    EmptyGridError,
    SingleLevelError,
)
from .system import state_in_eigenbasis

DEFAULT_GRID_POINTS = 2048
GRID_PADDING_SIGMAS = 8.0
DEGENERACY_REL_TOL = 1e-9


@dataclass(frozen=True)
class GaussianPointer:
    """Free-particle pointer prepared in a Gaussian wavepacket."""

    x0: float
    sigma: float
    shift_per_energy: float

    def __post_init__(self):
        if not (self.sigma > 0):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        s = self.shift_per_energy
        if not (np.isfinite(s) and s != 0):
            raise ValueError(f"shift_per_energy must be finite and nonzero, got {s}")


@dataclass(frozen=True)
class PointerDistribution:
    """Sampled P(dx) on an ascending grid."""

    grid: np.ndarray
    density: np.ndarray

    def integral(self):
        return float(np.trapezoid(self.density, self.grid))


def default_grid(table, ptr, points=DEFAULT_GRID_POINTS):
    """Uniform grid spanning all shifted centers plus 8 sigma on each side."""
    centers = ptr.shift_per_energy * (table.eps_t[:, None] - table.eps0[None, :])
    lo = float(centers.min()) - GRID_PADDING_SIGMAS * ptr.sigma
    hi = float(centers.max()) + GRID_PADDING_SIGMAS * ptr.sigma
    return np.linspace(lo, hi, points)


def pointer_distribution(state, table, ptr, grid=None):
    """Detector-shift density P(dx) for a Gaussian pointer."""
    if state.dim != table.dim:
        raise DimensionMismatchError(
            f"state dimension {state.dim} != table dimension {table.dim}")
    if grid is None:
        grid = default_grid(table, ptr)
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise EmptyGridError("pointer grid is empty")
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise EmptyGridError("pointer grid must be strictly ascending")
    rho = state_in_eigenbasis(state, table.basis0)
    u = table.amplitudes
    s = ptr.shift_per_energy
    inv4s2 = 1.0 / (4.0 * ptr.sigma ** 2)
    norm = 1.0 / (np.sqrt(2.0 * np.pi) * ptr.sigma)
    d = table.dim
    density = np.zeros(grid.shape)
    for i in range(d):
        for k in range(d):
            r = rho[i, k]
            for j in range(d):
                amp = float(np.real(r * u[j, i] * np.conj(u[j, k])))
                if amp == 0.0:
                    continue
                a = s * (table.eps_t[j] - table.eps0[i])
                b = s * (table.eps_t[j] - table.eps0[k])
                density += amp * np.exp(-((grid - a) ** 2 + (grid - b) ** 2) * inv4s2)
    return PointerDistribution(grid=grid, density=density * norm)


def _initial_gaps(table):
    eps = table.eps0
    gaps = np.abs(eps[:, None] - eps[None, :])[np.triu_indices(eps.size, k=1)]
    tol = DEGENERACY_REL_TOL * np.maximum(1.0, np.max(np.abs(eps))) if eps.size else 0.0
    return gaps, tol


def delta_pointer_limit(state, table, ptr):
    """Perfectly localized pointer: atoms at s*(eps_j^T - eps_i^0) with the
    classical TMP weights.  Only valid for a non-degenerate initial
    spectrum (degenerate pairs would keep their coherences)."""
    if state.dim != table.dim:
        raise DimensionMismatchError(
            f"state dimension {state.dim} != table dimension {table.dim}")
    gaps, tol = _initial_gaps(table)
    if gaps.size and gaps.min() <= tol:
        raise DegenerateInitialSpectrumError(
            f"initial spectrum has a gap {gaps.min():.3e} below resolution")
    rho = state_in_eigenbasis(state, table.basis0)
    populations = np.real(np.diag(rho))
    probs = table.probabilities()
    s = ptr.shift_per_energy
    d = table.dim
    ws, weights = [], []
    for i in range(d):
        for j in range(d):
            ws.append(s * (table.eps_t[j] - table.eps0[i]))
            weights.append(populations[i] * probs[j, i])
    return WorkQuasiDistribution.from_parts(ws, weights)


def interference_overlap_scale(table, ptr):
    """min over distinct initial pairs of |s * gap| / sigma.

    Values of order one or below mean the pointer cannot resolve the gap and
    interference terms survive; large values mean the classical regime.
    """
    gaps, tol = _initial_gaps(table)
    distinct = gaps[gaps > tol]
    if distinct.size == 0:
        raise SingleLevelError("initial spectrum has no two distinct eigenvalues")
    return float(np.min(np.abs(ptr.shift_per_energy) * distinct) / ptr.sigma)
