"""Driven-system definitions: start/end Hamiltonians, initial states, and
the transition amplitudes between the two energy eigenbases.

Energy convention: the qubit Hamiltonian is (omega_a/2) sigma_z, so the
splitting between ground and excited state equals omega_a and eigenvalues
are -omega_a/2 and +omega_a/2.  The first moment of the work equals
Tr[rho (U^dag H_T U - H_0)]; this is the library-wide definition of
average work (it is what the characteristic function generates).
"""

from dataclasses import dataclass

import numpy as np

from .distributions import WorkQuasiDistribution
from .errors import DimensionMismatchError, InvalidStateError, NonPositiveFrequencyError
from .numerics import (
    SpectralPair,
    eig_hermitian,
    require_hermitian,
    require_unitary,
    unitary_from_bloch,
)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)

STATE_TRACE_TOL = 1e-12
STATE_EIGENVALUE_FLOOR = -1e-10


@dataclass(frozen=True)
class SystemScenario:
    """Hamiltonians before/after the drive and the net evolution unitary."""

    h0: np.ndarray
    ht: np.ndarray
    u: np.ndarray

    @property
    def dim(self):
        return self.h0.shape[0]


def scenario(h0, ht, u):
    """Validated scenario from raw matrices (all d x d, d >= 2)."""
    h0 = require_hermitian(h0, name="H0")
    ht = require_hermitian(ht, name="HT")
    u = require_unitary(u, name="U")
    if not (h0.shape == ht.shape == u.shape):
        raise DimensionMismatchError(
            f"H0/HT/U shapes differ: {h0.shape}, {ht.shape}, {u.shape}")
    if h0.shape[0] < 2:
        raise DimensionMismatchError("scenario dimension must be >= 2")
    return SystemScenario(h0=h0, ht=ht, u=u)


def qubit_scenario(omega_a, n):
    """Qubit with H0 = HT = (omega_a/2) sigma_z driven by exp(-i n.sigma)."""
    if not (omega_a > 0):
        raise NonPositiveFrequencyError(f"omega_a must be positive, got {omega_a}")
    h = 0.5 * omega_a * SIGMA_Z
    return SystemScenario(h0=h, ht=h.copy(), u=unitary_from_bloch(n))


@dataclass(frozen=True)
class InitialState:
    """Validated density matrix."""

    rho: np.ndarray

    @property
    def dim(self):
        return self.rho.shape[0]

    def purity(self):
        return float(np.real(np.trace(self.rho @ self.rho)))


def initial_state(rho):
    """Check Hermiticity, unit trace, and positivity of a density matrix."""
    rho = require_hermitian(rho, name="rho")
    tr = np.trace(rho)
    if abs(tr - 1.0) > STATE_TRACE_TOL:
        raise InvalidStateError(f"trace = {tr:.15g}, expected 1")
    evals = eig_hermitian(rho).values
    if evals.min() < STATE_EIGENVALUE_FLOOR:
        raise InvalidStateError(f"negative eigenvalue {evals.min():.3e}")
    return InitialState(rho=rho)


def state_from_bloch(r):
    """Qubit state (I + r.sigma)/2 from a Bloch vector with |r| <= 1."""
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (3,):
        raise ValueError(f"Bloch vector must have 3 components, got shape {r.shape}")
    if np.linalg.norm(r) > 1.0 + 1e-12:
        raise InvalidStateError(f"Bloch vector length {np.linalg.norm(r):.6f} > 1")
    rho = 0.5 * (np.eye(2) + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z)
    return InitialState(rho=rho)


def state_in_eigenbasis(state, basis):
    """Full matrix <eps_i|rho|eps_k>."""
    if basis.dim != state.dim:
        raise DimensionMismatchError(
            f"basis dimension {basis.dim} != state dimension {state.dim}")
    v = basis.vectors
    return v.conj().T @ state.rho @ v


def dephase(state, basis):
    """Drop all coherences of the state in the given eigenbasis.

    Idempotent; diagonal entries (hence the trace) are preserved and purity
    never increases.
    """
    rho_eig = state_in_eigenbasis(state, basis)
    populations = np.real(np.diag(rho_eig))
    v = basis.vectors
    rho = (v * populations) @ v.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return InitialState(rho=rho)


@dataclass(frozen=True)
class TransitionTable:
    """Amplitudes <eps_j^T|U|eps_i^0> plus both energy ladders and bases."""

    amplitudes: np.ndarray
    eps0: np.ndarray
    eps_t: np.ndarray
    basis0: SpectralPair
    basis_t: SpectralPair

    @property
    def dim(self):
        return self.eps0.shape[0]

    def probabilities(self):
        """Classical transition matrix with entry (j, i) = |U_ji|^2."""
        return np.abs(self.amplitudes) ** 2


def transition_table(scn):
    """Diagonalize both Hamiltonians and express the drive between the bases."""
    pair0 = eig_hermitian(scn.h0)
    pair_t = eig_hermitian(scn.ht)
    amplitudes = pair_t.vectors.conj().T @ scn.u @ pair0.vectors
    require_unitary(amplitudes, name="transition amplitudes")
    return TransitionTable(amplitudes=amplitudes, eps0=pair0.values,
                           eps_t=pair_t.values, basis0=pair0, basis_t=pair_t)


def classical_tmp_distribution(state, table):
    """Two-measurement-protocol work distribution: P_i^0 P_{i->j} at
    W = eps_j^T - eps_i^0, aggregated over coincident work values."""
    if state.dim != table.dim:
        raise DimensionMismatchError(
            f"state dimension {state.dim} != table dimension {table.dim}")
    populations = np.real(np.diag(state_in_eigenbasis(state, table.basis0)))
    probs = table.probabilities()
    d = table.dim
    ws, weights = [], []
    for i in range(d):
        for j in range(d):
            ws.append(table.eps_t[j] - table.eps0[i])
            weights.append(populations[i] * probs[j, i])
    return WorkQuasiDistribution.from_parts(ws, weights)
