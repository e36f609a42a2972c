# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled implementations of the hot numerical kernels.

Mirrors ``pykern`` function for function: cyclic Jacobi Hermitian
eigensolver, radix-2 FFT, complex error function, and Fock-basis Husimi-Q
evaluation.  Same algorithms and operation ordering; only the loops are
lowered to C.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt
from libc.stdlib cimport free, malloc

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double cabs(double complex)
    double complex conj(double complex)
    double creal(double complex)
    double cimag(double complex)

NAME = "cython"

cdef double SQRT_PI = 1.7724538509055160273
cdef int CF_LEVELS = 64
cdef int SERIES_MAX_TERMS = 400


# ---------------------------------------------------------------------------
# cyclic Jacobi eigensolver
# ---------------------------------------------------------------------------

def jacobi_eigh(h, double off_tol, int max_sweeps):
    """Same contract as pykern.jacobi_eigh."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] a = np.array(h, dtype=np.complex128, copy=True, order="C")
    cdef int n = a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] v = np.eye(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vals = np.empty(n, dtype=np.float64)
    cdef int sweep, p, q, i, used
    cdef double off, r, tau, t, c, s
    cdef double complex apq, phase, sp, spc, tmp_p, tmp_q

    if n == 1:
        vals[0] = creal(a[0, 0])
        return vals, v, 0

    used = -1
    with nogil:
        for sweep in range(max_sweeps):
            off = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    r = cabs(a[p, q])
                    if r > off:
                        off = r
            if off <= off_tol:
                used = sweep
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    r = cabs(apq)
                    if r == 0.0:
                        continue
                    phase = apq / r
                    tau = (creal(a[q, q]) - creal(a[p, p])) / (2.0 * r)
                    if tau >= 0.0:
                        t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    sp = s * phase
                    spc = s * conj(phase)
                    for i in range(n):
                        tmp_p = a[i, p]
                        tmp_q = a[i, q]
                        a[i, p] = c * tmp_p - spc * tmp_q
                        a[i, q] = sp * tmp_p + c * tmp_q
                    for i in range(n):
                        tmp_p = a[p, i]
                        tmp_q = a[q, i]
                        a[p, i] = c * tmp_p - sp * tmp_q
                        a[q, i] = spc * tmp_p + c * tmp_q
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for i in range(n):
                        tmp_p = v[i, p]
                        tmp_q = v[i, q]
                        v[i, p] = c * tmp_p - spc * tmp_q
                        v[i, q] = sp * tmp_p + c * tmp_q
        if used == -1:
            off = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    r = cabs(a[p, q])
                    if r > off:
                        off = r
            if off <= off_tol:
                used = max_sweeps

    for i in range(n):
        vals[i] = creal(a[i, i])
    return vals, v, used


# ---------------------------------------------------------------------------
# radix-2 FFT
# ---------------------------------------------------------------------------

def fft_radix2(x, bint inverse):
    """Same contract as pykern.fft_radix2."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] src = np.ascontiguousarray(x, dtype=np.complex128)
    cdef Py_ssize_t n = src.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t bits = 0, i, m, half, start, k
    cdef double sign = 2.0 if inverse else -2.0
    cdef double pi = 3.14159265358979323846
    cdef double complex u, t
    cdef double complex *wtab
    cdef Py_ssize_t *rev

    m = n
    while m > 1:
        bits += 1
        m >>= 1

    # bit-reversal permutation (recurrence identical to pykern)
    rev = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    if rev == NULL:
        raise MemoryError
    try:
        with nogil:
            rev[0] = 0
            for i in range(1, n):
                rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (bits - 1))
            for i in range(n):
                out[i] = src[rev[i]]
    finally:
        free(rev)

    if n == 1:
        return out

    wtab = <double complex *> malloc((n // 2) * sizeof(double complex))
    if wtab == NULL:
        raise MemoryError
    try:
        with nogil:
            m = 2
            while m <= n:
                half = m >> 1
                for k in range(half):
                    wtab[k] = cexp((sign * 1j * pi / m) * k)
                start = 0
                while start < n:
                    for k in range(half):
                        u = out[start + k]
                        t = out[start + half + k] * wtab[k]
                        out[start + k] = u + t
                        out[start + half + k] = u - t
                    start += m
                m <<= 1
            if inverse:
                for i in range(n):
                    out[i] = out[i] / n
    finally:
        free(wtab)
    return out


# ---------------------------------------------------------------------------
# complex error function
# ---------------------------------------------------------------------------

cdef double complex _erf_series(double complex z) nogil:
    cdef double complex z2 = z * z
    cdef double complex term = z
    cdef double complex total = z
    cdef double complex inc
    cdef int n
    cdef double mag
    for n in range(1, SERIES_MAX_TERMS):
        term = term * (-z2 / n)
        inc = term / (2 * n + 1)
        total = total + inc
        mag = cabs(total)
        if mag < 1.0:
            mag = 1.0
        if cabs(inc) <= 1e-18 * mag:
            break
    return (2.0 / SQRT_PI) * total


cdef double complex _erfc_cf(double complex z) nogil:
    cdef double complex f = 0
    cdef int m = CF_LEVELS
    while m > 0:
        f = (m / 2.0) / (z + f)
        m -= 1
    return cexp(-z * z) / SQRT_PI / (z + f)


cdef double complex _erf_asymptotic(double complex z) nogil:
    cdef double complex inv2z2 = 1.0 / (2.0 * z * z)
    cdef double complex term = 1.0
    cdef double complex total = 1.0
    cdef int m
    for m in range(1, 13):
        term = term * (-(2 * m - 1) * inv2z2)
        total = total + term
    return 1.0 - cexp(-z * z) / (z * SQRT_PI) * total


cdef double complex _erf_one(double complex z) nogil:
    cdef double re = creal(z), im = cimag(z)
    cdef double r
    cdef bint neg = False, cc = False
    cdef double complex w
    if re < 0.0 or (re == 0.0 and im < 0.0):
        z = -z
        re = -re
        im = -im
        neg = True
    if im < 0.0:
        z = conj(z)
        im = -im
        cc = True
    r = cabs(z)
    if r > 50.0:
        w = _erf_asymptotic(z)
    elif r <= 3.0 or (re <= 2.0 and im <= 12.0):
        w = _erf_series(z)
    elif re <= 2.0:
        w = _erf_asymptotic(z)
    else:
        w = 1.0 - _erfc_cf(z)
    if cc:
        w = conj(w)
    if neg:
        w = -w
    return w


def erf_complex_scalar(z):
    """erf at one complex point."""
    return complex(_erf_one(complex(z)))


def erf_complex(z):
    """Vectorized erf over a complex array (flat iteration order)."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] flat = np.ascontiguousarray(
        np.asarray(z, dtype=np.complex128).ravel())
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(flat.shape[0], dtype=np.complex128)
    cdef Py_ssize_t i, n = flat.shape[0]
    with nogil:
        for i in range(n):
            out[i] = _erf_one(flat[i])
    return out.reshape(np.asarray(z).shape)


# ---------------------------------------------------------------------------
# Husimi-Q evaluation
# ---------------------------------------------------------------------------

def husimi_grid(rho, xi):
    """Same contract as pykern.husimi_grid."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] r = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] pts = np.ascontiguousarray(
        np.asarray(xi, dtype=np.complex128).ravel())
    cdef Py_ssize_t npts = pts.shape[0]
    cdef Py_ssize_t dim = r.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(npts, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] inv_sqrt = np.concatenate(
        ([1.0], 1.0 / np.sqrt(np.arange(1, dim, dtype=np.float64)))) if dim > 1 else np.ones(1)
    cdef double pi = 3.14159265358979323846
    cdef Py_ssize_t p, m, n
    cdef double complex point, acc, rowsum
    cdef double complex *v = <double complex *> malloc(dim * sizeof(double complex))
    if v == NULL:
        raise MemoryError
    try:
        with nogil:
            for p in range(npts):
                point = pts[p]
                v[0] = cexp(-0.5 * cabs(point) * cabs(point))
                for m in range(1, dim):
                    v[m] = v[m - 1] * point * inv_sqrt[m]
                acc = 0
                for n in range(dim):
                    rowsum = 0
                    for m in range(dim):
                        rowsum = rowsum + r[n, m] * v[m]
                    acc = acc + conj(v[n]) * rowsum
                out[p] = creal(acc) / pi
    finally:
        free(v)
    return out
