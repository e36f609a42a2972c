"""Circuit-QED realization: a qubit dispersively coupled to a truncated
Fock-space cavity that records the qubit energy before and after the drive.

The record-drive-record sequence is the echo unitary
exp(-i phi sigma_z a^dag a) U exp(+i phi sigma_z a^dag a) with
phi = lambda g^2 / Delta the per-photon conditional phase.  Tracing out the
qubit leaves

    rho_D(n, m) = sum_{ikj} rho_ik G_n conj(G_m) U_ji conj(U_jk)
                  * exp(i phi [eta_i n - eta_k m - eta_j (n - m)])

in the Fock basis (eta = +-1 the sigma_z eigenvalues; the cavity dynamical
phase exp(-2 i lambda omega_r) is dropped as it carries no work
information).  With U = I nothing happens to the cavity for any phi - the
two kicks echo out - which is what makes the phase a record of the work
actually done.  All closed forms below (Fock-pair characteristic function,
coherent-state Husimi and its angular marginal) are exact consequences of
this state.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernels import impl as _kern
from .errors import (
    CutoffTooSmallError,
    NonRealResidueError,
    NotAQubitError,
    QuadratureNotConvergedError,
    UnnormalizedFockVectorError,
)
from .numerics import erf_complex, require_unitary
from .scheme_a import ExponentialSum, _aggregate

ETA = np.array([-1.0, 1.0])
SQRT_PI = 1.7724538509055160273

FOCK_NORM_TOL = 1e-10
TAIL_MASS_TOL = 1e-8
CLOSED_FORM_IMAG_TOL = 1e-8
ANGULAR_IMAG_TOL = 1e-9
QUADRATURE_REFINE_TOL = 1e-7
MIN_RADIAL_POINTS = 256
DEFAULT_THETA_POINTS = 720


def min_fock_cutoff(alpha):
    """Smallest cutoff keeping the coherent tail mass below 1e-8 (alpha <= 6)."""
    return int(math.ceil(alpha * alpha + 6.0 * alpha + 10.0))


@dataclass(frozen=True)
class DispersiveParams:
    """Conditional phase phi = lambda g^2/Delta, coherent amplitude alpha
    (real), and the Fock cutoff N."""

    phi: float
    alpha: float
    fock_cutoff: int = -1

    def __post_init__(self):
        if not np.isfinite(self.phi):
            raise ValueError(f"phi must be finite, got {self.phi}")
        if not (self.alpha >= 0):
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.fock_cutoff < 0:
            object.__setattr__(self, "fock_cutoff", min_fock_cutoff(self.alpha))
        elif self.fock_cutoff < min_fock_cutoff(self.alpha):
            raise CutoffTooSmallError(
                f"fock_cutoff {self.fock_cutoff} < required "
                f"{min_fock_cutoff(self.alpha)} for alpha = {self.alpha}")


def coherent_amplitudes(alpha, n_cutoff):
    """Fock projections of |alpha>: G_n = e^{-alpha^2/2} alpha^n / sqrt(n!)."""
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if n_cutoff < min_fock_cutoff(alpha):
        raise CutoffTooSmallError(
            f"n_cutoff {n_cutoff} < required {min_fock_cutoff(alpha)} "
            f"for alpha = {alpha}")
    g = np.zeros(n_cutoff + 1)
    g[0] = math.exp(-0.5 * alpha * alpha)
    for n in range(1, n_cutoff + 1):
        g[n] = g[n - 1] * alpha / math.sqrt(n)
    tail = 1.0 - float(np.sum(g * g))
    if tail > TAIL_MASS_TOL:
        raise CutoffTooSmallError(f"coherent tail mass {tail:.3e} above cutoff")
    return g.astype(np.complex128)


def _qubit_in_eta_basis(state, u):
    """Express a computational-basis qubit state and unitary in the sigma_z
    eigenbasis ordered by ascending energy (eta = -1 first)."""
    if state.dim != 2:
        raise NotAQubitError(f"need a two-level system, got dimension {state.dim}")
    u = require_unitary(u, name="U")
    if u.shape != (2, 2):
        raise NotAQubitError(f"need a 2x2 unitary, got shape {u.shape}")
    return state.rho[::-1, ::-1], u[::-1, ::-1]


def _qubit_terms(state, u):
    """(amplitude, i, k, j) for every term rho_ik U_ji conj(U_jk)."""
    rho, ueig = _qubit_in_eta_basis(state, u)
    terms = []
    for i in range(2):
        for k in range(2):
            for j in range(2):
                terms.append((rho[i, k] * ueig[j, i] * np.conj(ueig[j, k]), i, k, j))
    return terms


def cavity_state_after_protocol(state, u, fock_amplitudes, params):
    """Reduced cavity density matrix after the record-drive-record sequence.

    ``fock_amplitudes`` may be shorter than the cutoff (zero-padded); a
    vector longer than the cutoff, or one carrying more than 1e-8 of mass in
    its last two entries, is rejected as truncated.
    """
    g = np.asarray(fock_amplitudes, dtype=np.complex128)
    if g.ndim != 1:
        raise ValueError("fock_amplitudes must be a vector")
    norm = float(np.sum(np.abs(g) ** 2))
    if abs(norm - 1.0) > FOCK_NORM_TOL:
        raise UnnormalizedFockVectorError(f"sum |G_n|^2 = {norm:.12g}, expected 1")
    dim = params.fock_cutoff + 1
    if g.size > dim:
        raise CutoffTooSmallError(
            f"fock vector length {g.size} exceeds cutoff dimension {dim}")
    if g.size == dim and dim >= 3:
        trailing = float(np.sum(np.abs(g[-2:]) ** 2))
        if trailing > TAIL_MASS_TOL:
            raise CutoffTooSmallError(
                f"trailing occupancy {trailing:.3e} presses against the cutoff")
    if g.size < dim:
        g = np.concatenate([g, np.zeros(dim - g.size, dtype=np.complex128)])
    n = np.arange(dim)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for amp, i, k, j in _qubit_terms(state, u):
        if amp == 0:
            continue
        ph_n = np.exp(1j * params.phi * (ETA[i] - ETA[j]) * n)
        ph_m = np.exp(-1j * params.phi * (ETA[k] - ETA[j]) * n)
        out += amp * np.outer(g * ph_n, g.conj() * ph_m)
    return out


def fock_coherence(rho_cavity, nbar, delta_n=1):
    """Raw matrix element <nbar+delta_n|rho|nbar-delta_n>.

    Unlike the characteristic function, this keeps the nbar-dependent phase
    exp(i phi nbar (eta_i - eta_k)) of the coherence terms; comparing the
    two isolates exactly the contribution the phase readout drops.
    """
    return complex(rho_cavity[nbar + delta_n, nbar - delta_n])


def cqed_characteristic_function(state, u, params):
    """Fock-pair phase record as an exponential sum in the variable 2*phi.

    Frequencies sit at eta_j - (eta_i + eta_k)/2 in units of the half
    qubit splitting, i.e. at twice the work for unit splitting; the factor
    is recorded in ``frequency_scale`` so rescaling to work units is an
    explicit, visible step.
    """
    cls_amp, cls_w, int_amp, int_w = [], [], [], []
    for amp, i, k, j in _qubit_terms(state, u):
        freq = ETA[j] - 0.5 * (ETA[i] + ETA[k])
        if i == k:
            cls_amp.append(amp)
            cls_w.append(freq)
        else:
            int_amp.append(amp)
            int_w.append(freq)
    ca, cw = _aggregate(cls_amp, cls_w)
    ia, iw = _aggregate(int_amp, int_w)
    return ExponentialSum(
        amplitudes=np.concatenate([ca, ia]),
        frequencies=np.concatenate([cw, iw]),
        classical=np.concatenate([np.ones(cw.size, dtype=bool),
                                  np.zeros(iw.size, dtype=bool)]),
        frequency_scale=2.0)


# ---------------------------------------------------------------------------
# phase space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseGrid:
    """Rectangular grid in the complex plane."""

    re: np.ndarray
    im: np.ndarray

    @classmethod
    def square(cls, half_width, points):
        axis = np.linspace(-half_width, half_width, points)
        return cls(re=axis, im=axis.copy())

    def points(self):
        """Complex matrix xi[a, b] = re[a] + i im[b]."""
        return self.re[:, None] + 1j * self.im[None, :]


@dataclass(frozen=True)
class HusimiGrid:
    """Husimi-Q values sampled on a PhaseGrid (q[a, b] at re[a], im[b])."""

    grid: PhaseGrid
    q: np.ndarray

    def integral(self):
        inner = np.trapezoid(self.q, self.grid.im, axis=1)
        return float(np.trapezoid(inner, self.grid.re))


def husimi_q(rho_cavity, grid, workers=0):
    """Q(xi) = <xi|rho|xi>/pi on every grid point.

    ``workers`` > 0 splits the grid across a thread pool; cell values are
    independent, so the result does not depend on the split.
    """
    pts = grid.points().ravel()
    if workers and workers > 0 and pts.size > 4 * workers:
        out = np.empty(pts.size)
        chunks = np.array_split(np.arange(pts.size), workers)
        def run(idx):
            out[idx] = _kern.husimi_grid(rho_cavity, pts[idx])
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, chunks))
    else:
        out = _kern.husimi_grid(rho_cavity, pts)
    return HusimiGrid(grid=grid, q=out.reshape(grid.re.size, grid.im.size))


def husimi_q_points(rho_cavity, xi):
    """Q at arbitrary complex points (scalar or array)."""
    arr = np.asarray(xi, dtype=np.complex128)
    q = _kern.husimi_grid(rho_cavity, arr.ravel())
    if arr.ndim == 0:
        return float(q[0])
    return q.reshape(arr.shape)


def _chi(theta, phi, i, k, j):
    lam_ji = phi * (ETA[j] - ETA[i])
    lam_jk = phi * (ETA[j] - ETA[k])
    return np.exp(-1j * (lam_ji + theta)) + np.exp(1j * (lam_jk + theta))


def husimi_closed_form(state, u, params, xi):
    """Coherent-state-input Husimi function without any Fock truncation:

        Q(xi) = (1/pi) sum_{ikj} rho_ik U_ji conj(U_jk)
                e^{-(delta - alpha chi/2)^2} e^{-alpha^2 (1 - chi^2/4)},

    chi = e^{-i(Lambda_ji + theta)} + e^{+i(Lambda_jk + theta)} with
    Lambda_ji = phi (eta_j - eta_i) and xi = delta e^{i theta}.
    """
    arr = np.asarray(xi, dtype=np.complex128)
    scalar = arr.ndim == 0
    pts = np.atleast_1d(arr)
    delta = np.abs(pts)
    theta = np.angle(pts)
    alpha = params.alpha
    total = np.zeros(pts.shape, dtype=np.complex128)
    for amp, i, k, j in _qubit_terms(state, u):
        if amp == 0:
            continue
        chi = _chi(theta, params.phi, i, k, j)
        total += amp * np.exp(-(delta - 0.5 * alpha * chi) ** 2
                              - alpha * alpha * (1.0 - 0.25 * chi * chi))
    resid = float(np.max(np.abs(total.imag))) / np.pi
    if resid > CLOSED_FORM_IMAG_TOL:
        raise NonRealResidueError(f"Husimi imaginary residue {resid:.3e}")
    q = total.real / np.pi
    return float(q[0]) if scalar else q


@dataclass(frozen=True)
class AngularDistribution:
    """P(theta) on a uniform grid over [-pi, pi)."""

    thetas: np.ndarray
    density: np.ndarray

    def integral(self):
        # rectangle rule == periodic trapezoid on the uniform open grid
        return float(np.sum(self.density) * (self.thetas[1] - self.thetas[0]))


def default_theta_grid(points=DEFAULT_THETA_POINTS):
    return np.linspace(-np.pi, np.pi, points, endpoint=False)


def _check_theta_grid(thetas):
    t = np.asarray(thetas, dtype=np.float64)
    if t.size < 2 or np.any(np.diff(t) <= 0):
        raise ValueError("theta grid must be ascending with >= 2 points")
    if t[0] < -np.pi - 1e-12 or t[-1] >= np.pi:
        raise ValueError("theta grid must lie in [-pi, pi)")
    return t


def angular_distribution(state, u, params, thetas=None):
    """Closed-form angular work distribution (radial integral done exactly):

        P(theta) = sum_{ikj} rho_ik U_ji conj(U_jk) { e^{-alpha^2}/(2 pi)
                   + e^{-alpha^2(1 - chi^2/4)} alpha chi
                     [1 + erf(alpha chi / 2)] / (4 sqrt(pi)) }.

    chi is genuinely complex for i != k, so the complex error function is
    required.  Diagonal peaks are centered at theta = -Lambda_jj', i.e. at
    minus the phase imparted per unit of recorded work.
    """
    thetas = default_theta_grid() if thetas is None else _check_theta_grid(thetas)
    alpha = params.alpha
    pref = math.exp(-alpha * alpha) / (2.0 * np.pi)
    total = np.zeros(thetas.shape, dtype=np.complex128)
    for amp, i, k, j in _qubit_terms(state, u):
        if amp == 0:
            continue
        chi = _chi(thetas, params.phi, i, k, j)
        ac = alpha * chi
        body = pref + (np.exp(-alpha * alpha * (1.0 - 0.25 * chi * chi))
                       / (4.0 * SQRT_PI)) * ac * (1.0 + erf_complex(0.5 * ac))
        total += amp * body
    resid = float(np.max(np.abs(total.imag)))
    if resid > ANGULAR_IMAG_TOL:
        raise NonRealResidueError(f"P(theta) imaginary residue {resid:.3e}")
    return AngularDistribution(thetas=thetas, density=total.real)


def angular_distribution_numeric(state, u, params, thetas=None,
                                 radial_points=384, radial_range=None):
    """Radial quadrature route: P(theta) = int_0^inf d delta delta Q(xi)
    with Q evaluated from the truncated Fock-space cavity state.

    The integral is refined (doubled nodes, extended range); disagreement
    above 1e-7 raises QuadratureNotConvergedError.  Fully independent of
    the closed form: no chi, no complex erf.
    """
    if radial_points < MIN_RADIAL_POINTS:
        raise ValueError(f"radial_points must be >= {MIN_RADIAL_POINTS}")
    thetas = default_theta_grid() if thetas is None else _check_theta_grid(thetas)
    r_max = params.alpha + 8.0 if radial_range is None else float(radial_range)
    if r_max <= 0:
        raise ValueError("radial_range must be positive")
    g = coherent_amplitudes(params.alpha, params.fock_cutoff)
    rho_c = cavity_state_after_protocol(state, u, g, params)

    def quad(npts, rmax):
        x, wq = np.polynomial.legendre.leggauss(npts)
        delta = 0.5 * rmax * (x + 1.0)
        weight = 0.5 * rmax * wq * delta
        xi = delta[None, :] * np.exp(1j * thetas)[:, None]
        q = husimi_q_points(rho_c, xi)
        return q @ weight

    coarse = quad(radial_points, r_max)
    fine = quad(2 * radial_points, r_max + 2.0)
    dev = float(np.max(np.abs(fine - coarse)))
    if dev > QUADRATURE_REFINE_TOL:
        raise QuadratureNotConvergedError(
            f"refinement moved P(theta) by {dev:.3e} > {QUADRATURE_REFINE_TOL:.1e}")
    return AngularDistribution(thetas=thetas, density=fine)


def interference_predicate(params, eta_gap):
    """True when the coherent detector cannot resolve the recorded gap:
    |phi * eta_gap| <= sqrt(2)/alpha (always true as alpha -> 0)."""
    if params.alpha == 0:
        return True
    return bool(abs(params.phi * eta_gap) <= math.sqrt(2.0) / params.alpha)
