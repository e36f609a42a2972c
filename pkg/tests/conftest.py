"""Shared fixtures and random-matrix helpers."""

from pathlib import Path

import numpy as np
import pytest

import workdist.system as system
from workdist import KERNEL_BACKEND

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

# golden bytes are generated with the compiled kernels; under the pure
# fallback the same values can differ in the last float digits, so the
# comparison degrades to parsed values at 1e-10
GOLDEN_BYTES_EXACT = KERNEL_BACKEND == "cython"


def csv_matches_golden(payload, golden_bytes):
    """Byte equality on the default backend, value equality otherwise."""
    payload = payload.replace(b"\r\n", b"\n")
    golden_bytes = golden_bytes.replace(b"\r\n", b"\n")
    if GOLDEN_BYTES_EXACT:
        return payload == golden_bytes
    got = payload.decode().splitlines()
    want = golden_bytes.decode().splitlines()
    if len(got) != len(want):
        return False
    for g, w in zip(got, want):
        if g.startswith("#") or w.startswith("#"):
            if g != w:
                return False
            continue
        gv = np.array([float(x) for x in g.split(",")])
        wv = np.array([float(x) for x in w.split(",")])
        if gv.shape != wv.shape:
            return False
        if np.max(np.abs(gv - wv) / np.maximum(1.0, np.abs(wv))) > 1e-10:
            return False
    return True


def random_hermitian(rng, d, scale=1.0):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * 0.5 * (a + a.conj().T)


def random_density(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.real(np.trace(rho))


def random_unitary(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(a)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


@pytest.fixture(scope="session")
def flagship():
    """Coherent initial state, pi/4 x-rotation, unit splitting."""
    scn = system.qubit_scenario(1.0, (np.pi / 4, 0.0, 0.0))
    state = system.state_from_bloch((0.0, 1.0, 0.0))
    table = system.transition_table(scn)
    return scn, state, table


@pytest.fixture(scope="session")
def flagship_dephased(flagship):
    scn, state, table = flagship
    return system.dephase(state, table.basis0)
