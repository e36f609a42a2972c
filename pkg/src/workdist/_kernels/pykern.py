"""Pure-Python/NumPy implementations of the hot numerical kernels.

Same algorithms and operation ordering as the compiled backend in
``ckern.pyx``; used as the import-time fallback when the extension is not
built, and as the reference side of the kernel benchmark.
"""

import cmath
import math

import numpy as np

NAME = "python"

_SQRT_PI = 1.7724538509055160273
_CF_LEVELS = 64
_SERIES_MAX_TERMS = 400


# ---------------------------------------------------------------------------
# cyclic Jacobi eigensolver for complex Hermitian matrices
# ---------------------------------------------------------------------------

def jacobi_eigh(h, off_tol, max_sweeps):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues, eigenvector columns, sweeps_used); sweeps_used is
    -1 when the off-diagonal maximum is still above ``off_tol`` after
    ``max_sweeps`` full sweeps.  No sorting or phase convention is applied.
    """
    a = np.array(h, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return a.real.diagonal().copy(), v, 0
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            row = np.abs(a[p, p + 1:])
            m = row.max() if row.size else 0.0
            if m > off:
                off = m
        if off <= off_tol:
            return a.diagonal().real.copy(), v, sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sp = s * phase
                spc = s * phase.conjugate()
                # columns: A <- A J
                col_p = a[:, p].copy()
                a[:, p] = c * col_p - spc * a[:, q]
                a[:, q] = sp * col_p + c * a[:, q]
                # rows: A <- J^dagger A
                row_p = a[p, :].copy()
                a[p, :] = c * row_p - sp * a[q, :]
                a[q, :] = spc * row_p + c * a[q, :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                vcol_p = v[:, p].copy()
                v[:, p] = c * vcol_p - spc * v[:, q]
                v[:, q] = sp * vcol_p + c * v[:, q]
    off = max(abs(a[p, q]) for p in range(n - 1) for q in range(p + 1, n))
    if off <= off_tol:
        return a.diagonal().real.copy(), v, max_sweeps
    return a.diagonal().real.copy(), v, -1


# ---------------------------------------------------------------------------
# radix-2 Cooley-Tukey FFT
# ---------------------------------------------------------------------------

def _bit_reverse_indices(n):
    bits = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.intp)
    for i in range(1, n):
        rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (bits - 1))
    return rev


def fft_radix2(x, inverse):
    """Iterative decimation-in-time radix-2 FFT; length must be 2**k.

    Forward uses exp(-2*pi*i*jk/n); inverse applies the 1/n factor so the
    two directions compose to the identity.
    """
    n = len(x)
    out = np.asarray(x, dtype=np.complex128)[_bit_reverse_indices(n)]
    if n == 1:
        return out.copy()
    sign = 2.0 if inverse else -2.0
    m = 2
    while m <= n:
        half = m // 2
        w = np.exp((sign * 1j * np.pi / m) * np.arange(half))
        blocks = out.reshape(n // m, m)
        u = blocks[:, :half].copy()
        t = blocks[:, half:] * w
        blocks[:, :half] = u + t
        blocks[:, half:] = u - t
        m *= 2
    if inverse:
        out /= n
    return out


# ---------------------------------------------------------------------------
# complex error function
# ---------------------------------------------------------------------------

def _erf_series(z):
    # Maclaurin sum; accurate where cancellation stays mild (|Re z| small
    # or |z| <= 3).
    z2 = z * z
    term = z
    total = z
    for n in range(1, _SERIES_MAX_TERMS):
        term *= -z2 / n
        inc = term / (2 * n + 1)
        total += inc
        if abs(inc) <= 1e-18 * max(1.0, abs(total)):
            break
    return (2.0 / _SQRT_PI) * total


def _erfc_cf(z):
    # Laplace continued fraction for erfc, valid for Re z > 0.
    f = 0j
    m = _CF_LEVELS
    while m > 0:
        f = (m / 2.0) / (z + f)
        m -= 1
    return cmath.exp(-z * z) / _SQRT_PI / (z + f)


def _erf_asymptotic(z):
    # erf(z) = 1 - e^{-z^2}/(z sqrt(pi)) * sum_m (-1)^m (2m-1)!!/(2 z^2)^m
    inv2z2 = 1.0 / (2.0 * z * z)
    term = 1.0 + 0j
    total = 1.0 + 0j
    for m in range(1, 13):
        term *= -(2 * m - 1) * inv2z2
        total += term
    return 1.0 - cmath.exp(-z * z) / (z * _SQRT_PI) * total


def erf_complex_scalar(z):
    """erf at one complex point; canonicalized so odd/conjugate symmetry
    is exact by construction."""
    z = complex(z)
    if z.real < 0.0 or (z.real == 0.0 and z.imag < 0.0):
        return -erf_complex_scalar(-z)
    if z.imag < 0.0:
        return erf_complex_scalar(z.conjugate()).conjugate()
    r = abs(z)
    if r > 50.0:
        return _erf_asymptotic(z)
    if r <= 3.0 or (z.real <= 2.0 and z.imag <= 12.0):
        return _erf_series(z)
    if z.real <= 2.0:
        return _erf_asymptotic(z)
    return 1.0 - _erfc_cf(z)


def erf_complex(z):
    """Vectorized erf over a complex array (flat iteration order)."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.empty(z.shape, dtype=np.complex128)
    flat_in = z.ravel()
    flat_out = out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = erf_complex_scalar(flat_in[i])
    return out


# ---------------------------------------------------------------------------
# Husimi-Q evaluation of a Fock-basis density matrix
# ---------------------------------------------------------------------------

def husimi_grid(rho, xi):
    """Q(xi) = <xi|rho|xi>/pi for each point of a flat complex array.

    Coherent-state amplitudes <m|xi> are built by the stable recurrence
    v_0 = e^{-|xi|^2/2}, v_{m+1} = v_m * xi / sqrt(m+1).
    """
    rho = np.asarray(rho, dtype=np.complex128)
    xi = np.asarray(xi, dtype=np.complex128).ravel()
    npts = xi.size
    dim = rho.shape[0]
    inv_sqrt = np.concatenate(([1.0], 1.0 / np.sqrt(np.arange(1, dim))))
    out = np.empty(npts, dtype=np.float64)
    chunk = 2048
    for lo in range(0, npts, chunk):
        pts = xi[lo:lo + chunk]
        v = np.empty((pts.size, dim), dtype=np.complex128)
        v[:, 0] = np.exp(-0.5 * np.abs(pts) ** 2)
        for m in range(1, dim):
            v[:, m] = v[:, m - 1] * pts * inv_sqrt[m]
        rv = v @ rho.T
        out[lo:lo + chunk] = np.einsum("pm,pm->p", v.conj(), rv).real / np.pi
    return out
