"""Dispersive (phase-record) measurement scheme: exact characteristic
function as an exponential sum, the signed work quasiprobability it
generates, analytic moments, and an FFT reconstruction used as an
independent numeric route.

The characteristic function is kept exact, G(lam) = sum_m c_m e^{i lam w_m},
because the work distribution is a comb of point masses; broadening only
enters through the windowed FFT reconstruction.  Summation order is fixed
everywhere so repeated runs are bit-identical.
"""

from dataclasses import dataclass

import numpy as np

from .distributions import WorkQuasiDistribution, merge_atoms
from .errors import (
    DimensionMismatchError,
    InsufficientResolutionError,
    NonRealAggregateError,
    NonRealMomentError,
)
from .numerics import fft_radix2
from .system import state_in_eigenbasis

MAX_MOMENT_ORDER = 6
AGGREGATE_IMAG_TOL = 1e-9
# window must decay to exp(-WINDOW_DECAY^2/2) at the edge of the lambda grid
WINDOW_DECAY = 6.0
# reconstructed atoms must stay this many broadening widths inside Nyquist
NYQUIST_GUARD = 5.0
# broadening wider than gap/SEPARATION_FACTOR cannot separate neighbours
SEPARATION_FACTOR = 4.0


@dataclass(frozen=True)
class ExponentialSum:
    """sum_m c_m e^{i lam w_m}, aggregated per frequency within each kind.

    ``classical`` marks terms of diagonal (i = k) provenance.  For sums read
    out through a detector whose phase advances faster than the work itself,
    ``frequency_scale`` records that factor (frequencies = scale * work).
    """

    amplitudes: np.ndarray
    frequencies: np.ndarray
    classical: np.ndarray
    frequency_scale: float = 1.0

    @property
    def size(self):
        return self.frequencies.shape[0]

    def rescaled_to_work(self):
        """Divide frequencies by frequency_scale so they are work values."""
        return ExponentialSum(amplitudes=self.amplitudes.copy(),
                              frequencies=self.frequencies / self.frequency_scale,
                              classical=self.classical.copy(),
                              frequency_scale=1.0)


def _aggregate(amplitudes, frequencies):
    """Merge complex amplitudes at coincident frequencies (ascending)."""
    frequencies = np.asarray(frequencies, dtype=np.float64)
    amplitudes = np.asarray(amplitudes, dtype=np.complex128)
    if frequencies.size == 0:
        return amplitudes, frequencies
    ws_re, re = merge_atoms(frequencies, amplitudes.real)
    _, im = merge_atoms(frequencies, amplitudes.imag)
    return re + 1j * im, ws_re


def characteristic_function(state, table):
    """Exact G(lam) = sum_{ikj} rho_ik U_ji conj(U_jk)
    e^{i lam [eps_j^T - (eps_i^0 + eps_k^0)/2]}."""
    if state.dim != table.dim:
        raise DimensionMismatchError(
            f"state dimension {state.dim} != table dimension {table.dim}")
    rho = state_in_eigenbasis(state, table.basis0)
    u = table.amplitudes
    d = table.dim
    cls_amp, cls_w, int_amp, int_w = [], [], [], []
    for i in range(d):
        for k in range(d):
            r = rho[i, k]
            for j in range(d):
                amp = r * u[j, i] * np.conj(u[j, k])
                w = table.eps_t[j] - 0.5 * (table.eps0[i] + table.eps0[k])
                if i == k:
                    cls_amp.append(amp)
                    cls_w.append(w)
                else:
                    int_amp.append(amp)
                    int_w.append(w)
    ca, cw = _aggregate(cls_amp, cls_w)
    ia, iw = _aggregate(int_amp, int_w)
    return ExponentialSum(
        amplitudes=np.concatenate([ca, ia]),
        frequencies=np.concatenate([cw, iw]),
        classical=np.concatenate([np.ones(cw.size, dtype=bool),
                                  np.zeros(iw.size, dtype=bool)]))


def evaluate(exp_sum, lam):
    """G at one or many lambda values (fixed term order)."""
    lam = np.asarray(lam, dtype=np.float64)
    scalar = lam.ndim == 0
    grid = np.atleast_1d(lam)
    total = np.zeros(grid.shape, dtype=np.complex128)
    for c, w in zip(exp_sum.amplitudes, exp_sum.frequencies):
        total += c * np.exp(1j * grid * w)
    return complex(total[0]) if scalar else total


def quasiprobability(exp_sum):
    """Signed atom distribution carried by the exponential sum.

    Aggregated amplitudes must be real (conjugate closure); a residue above
    1e-9 signals a sum that was not built from a Hermitian state.
    """
    resid = float(np.max(np.abs(exp_sum.amplitudes.imag))) if exp_sum.size else 0.0
    if resid > AGGREGATE_IMAG_TOL:
        raise NonRealAggregateError(
            f"aggregated weight imaginary residue {resid:.3e} > {AGGREGATE_IMAG_TOL:.1e}")
    cls = exp_sum.classical
    return WorkQuasiDistribution.from_parts(
        exp_sum.frequencies[cls], exp_sum.amplitudes.real[cls],
        exp_sum.frequencies[~cls], exp_sum.amplitudes.real[~cls])


def moments_analytic(exp_sum, order):
    """<W^n> = sum_m c_m w_m^n for 1 <= n <= 6.

    Orders above 6 lose too many digits to cancellation in double precision.
    """
    if not (1 <= order <= MAX_MOMENT_ORDER):
        raise ValueError(f"order must be in 1..{MAX_MOMENT_ORDER}, got {order}")
    total = complex(np.sum(exp_sum.amplitudes * exp_sum.frequencies ** order))
    if abs(total.imag) > AGGREGATE_IMAG_TOL:
        raise NonRealMomentError(
            f"moment {order} imaginary residue {abs(total.imag):.3e}")
    return float(total.real)


def negativity(dist):
    """sum of max(0, -weight); zero exactly when the distribution is classical."""
    return float(np.sum(np.maximum(0.0, -dist.weights)))


@dataclass(frozen=True)
class ReconstructedDensity:
    """Gaussian-broadened work density sampled on a uniform grid."""

    ws: np.ndarray
    density: np.ndarray
    window_sigma: float

    def area(self, center, half_width):
        """Trapezoidal mass in [center - half_width, center + half_width]."""
        mask = np.abs(self.ws - center) <= half_width
        return float(np.trapezoid(self.density[mask], self.ws[mask]))


def reconstruct_fft(exp_sum, lambda_max, samples, window_sigma):
    """Numeric route to the quasiprobability: sample G on a symmetric
    lambda grid, apply a Gaussian window, and FFT to the work axis.

    Each atom of the analytic distribution appears as a Gaussian of standard
    deviation ``window_sigma`` whose area equals the atom weight.  Raises
    InsufficientResolutionError when the grid cannot deliver that: window
    tail truncated by lambda_max, atoms outside the Nyquist work range, or
    broadening too wide for the smallest frequency gap.
    """
    if lambda_max <= 0 or window_sigma <= 0:
        raise ValueError("lambda_max and window_sigma must be positive")
    if samples < 2 or (samples & (samples - 1)) != 0:
        raise ValueError(f"samples must be a power of two >= 2, got {samples}")
    needed = WINDOW_DECAY / window_sigma
    if lambda_max < needed:
        raise InsufficientResolutionError(
            f"lambda_max {lambda_max:g} < {needed:g} required for window_sigma "
            f"{window_sigma:g} (truncated window)")
    dl = 2.0 * lambda_max / samples
    w_nyquist = np.pi / dl
    w_extent = float(np.max(np.abs(exp_sum.frequencies))) if exp_sum.size else 0.0
    if w_extent + NYQUIST_GUARD * window_sigma > w_nyquist:
        raise InsufficientResolutionError(
            f"atoms reach |W| = {w_extent:g} but the grid is alias-free only to "
            f"{w_nyquist:g} - {NYQUIST_GUARD:g} sigma")
    distinct = np.unique(np.round(exp_sum.frequencies, 12))
    if distinct.size >= 2:
        gap = float(np.min(np.diff(distinct)))
        if window_sigma > gap / SEPARATION_FACTOR:
            raise InsufficientResolutionError(
                f"window_sigma {window_sigma:g} cannot separate the minimal "
                f"frequency gap {gap:g}")
    lams = -lambda_max + dl * np.arange(samples)
    g = evaluate(exp_sum, lams)
    windowed = g * np.exp(-0.5 * (lams * window_sigma) ** 2)
    spectrum = fft_radix2(windowed, "forward")
    k = np.arange(samples)
    k_signed = np.where(k < samples // 2, k, k - samples)
    dw = 2.0 * np.pi / (samples * dl)
    density = (dl / (2.0 * np.pi)) * np.exp(1j * lambda_max * k_signed * dw) * spectrum
    order = np.argsort(k_signed, kind="stable")
    return ReconstructedDensity(ws=k_signed[order] * dw,
                                density=density.real[order],
                                window_sigma=window_sigma)
