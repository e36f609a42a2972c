"""Circuit-QED detector: cavity protocol state, Fock-pair phase record,
Husimi maps (Fock-space and closed form), and the angular work
distribution with its interference regimes."""

import numpy as np
import pytest

import workdist.cqed as cqed
import workdist.scheme_a as scheme_a
import workdist.system as system
from workdist.errors import (
    CutoffTooSmallError,
    NonRealResidueError,
    NotAQubitError,
    QuadratureNotConvergedError,
    UnnormalizedFockVectorError,
)
from conftest import random_density


def ground_state():
    return system.initial_state(np.diag([0.0, 1.0]).astype(complex))


def flip_unitary():
    return (-1j * system.SIGMA_X).astype(np.complex128)


@pytest.fixture(scope="module")
def flag_state():
    return system.state_from_bloch((0.0, 1.0, 0.0))


@pytest.fixture(scope="module")
def flag_unitary():
    return system.qubit_scenario(1.0, (np.pi / 4, 0, 0)).u


@pytest.fixture(scope="module")
def flag_dephased(flag_state):
    from workdist.numerics import eig_hermitian
    return system.dephase(flag_state, eig_hermitian(system.SIGMA_Z))


class TestDispersiveParams:
    def test_cutoff_rule_applied(self):
        params = cqed.DispersiveParams(phi=0.3, alpha=2.5)
        assert params.fock_cutoff == int(np.ceil(2.5 ** 2 + 6 * 2.5 + 10))

    def test_explicit_cutoff_below_rule(self):
        with pytest.raises(CutoffTooSmallError):
            cqed.DispersiveParams(phi=0.3, alpha=2.5, fock_cutoff=20)

    def test_invalid_alpha(self):
        with pytest.raises(ValueError):
            cqed.DispersiveParams(phi=0.3, alpha=-1.0)


class TestCoherentAmplitudes:
    def test_vacuum(self):
        g = cqed.coherent_amplitudes(0.0, 12)
        assert g[0] == 1.0
        assert np.all(g[1:] == 0)

    def test_ratio_identities(self):
        g = cqed.coherent_amplitudes(1.0, 20)
        assert g[1] / g[0] == pytest.approx(1.0, abs=1e-14)
        assert g[2] / g[0] == pytest.approx(1 / np.sqrt(2), abs=1e-14)

    def test_mean_photon_number(self):
        # summation oracle: <n> = sum n |G_n|^2 = alpha^2
        g = cqed.coherent_amplitudes(5.0, 80)
        mean_n = float(np.sum(np.arange(81) * np.abs(g) ** 2))
        assert mean_n == pytest.approx(25.0, abs=1e-6)

    def test_cutoff_too_small(self):
        with pytest.raises(CutoffTooSmallError):
            cqed.coherent_amplitudes(5.0, 40)


class TestCavityStateAfterProtocol:
    def test_zero_phi_leaves_cavity_unchanged(self, flag_state, flag_unitary):
        params = cqed.DispersiveParams(phi=0.0, alpha=0.0, fock_cutoff=10)
        g = np.zeros(11, dtype=complex)
        g[0] = g[1] = 1 / np.sqrt(2)
        rho = cqed.cavity_state_after_protocol(flag_state, flag_unitary, g, params)
        np.testing.assert_allclose(rho, np.outer(g, g.conj()), atol=1e-14)

    def test_identity_drive_echoes_out(self):
        # the two kicks cancel when no work is done, for any phi
        params = cqed.DispersiveParams(phi=0.77, alpha=0.0, fock_cutoff=10)
        g = np.zeros(11, dtype=complex)
        g[0] = g[1] = 1 / np.sqrt(2)
        rho = cqed.cavity_state_after_protocol(ground_state(), np.eye(2, dtype=complex),
                                               g, params)
        np.testing.assert_allclose(rho, np.outer(g, g.conj()), atol=1e-14)

    def test_flip_imprints_conditional_phase(self):
        # two-term hand evaluation: |g>, deterministic flip, phi = 0.3:
        # entry (0,1) = (1/2) e^{i phi (eta_e - eta_g)} = (1/2) e^{2 i phi}
        phi = 0.3
        params = cqed.DispersiveParams(phi=phi, alpha=0.0, fock_cutoff=10)
        g = np.zeros(11, dtype=complex)
        g[0] = g[1] = 1 / np.sqrt(2)
        rho = cqed.cavity_state_after_protocol(ground_state(), flip_unitary(), g, params)
        assert abs(rho[0, 1]) == pytest.approx(0.5, abs=1e-14)
        assert rho[0, 1] == pytest.approx(0.5 * np.exp(2j * phi), abs=1e-14)

    def test_random_inputs_trace_one_hermitian(self):
        rng = np.random.default_rng(70)
        for _ in range(25):
            alpha = rng.uniform(0.0, 4.0)
            params = cqed.DispersiveParams(phi=rng.uniform(-1, 1), alpha=alpha)
            g = cqed.coherent_amplitudes(alpha, params.fock_cutoff)
            st = system.initial_state(random_density(rng, 2))
            from conftest import random_unitary
            u = random_unitary(rng, 2)
            rho = cqed.cavity_state_after_protocol(st, u, g, params)
            assert abs(np.trace(rho).real - 1.0) <= 1e-10
            assert abs(np.trace(rho).imag) <= 1e-12
            assert np.max(np.abs(rho - rho.conj().T)) <= 1e-12

    def test_unnormalized_vector_rejected(self, flag_state, flag_unitary):
        params = cqed.DispersiveParams(phi=0.1, alpha=0.0, fock_cutoff=10)
        g = np.ones(4, dtype=complex)
        with pytest.raises(UnnormalizedFockVectorError):
            cqed.cavity_state_after_protocol(flag_state, flag_unitary, g, params)

    def test_pressed_tail_rejected(self, flag_state, flag_unitary):
        params = cqed.DispersiveParams(phi=0.1, alpha=0.0, fock_cutoff=10)
        g = np.full(11, 1 / np.sqrt(11), dtype=complex)
        with pytest.raises(CutoffTooSmallError):
            cqed.cavity_state_after_protocol(flag_state, flag_unitary, g, params)

    def test_not_a_qubit(self):
        params = cqed.DispersiveParams(phi=0.1, alpha=0.0, fock_cutoff=10)
        st = system.initial_state(np.eye(3, dtype=complex) / 3)
        g = np.zeros(11, dtype=complex)
        g[0] = 1.0
        with pytest.raises(NotAQubitError):
            cqed.cavity_state_after_protocol(st, np.eye(3, dtype=complex), g, params)


class TestFockCoherenceAccessor:
    def test_matches_phase_record_without_initial_coherence(self, flag_dephased,
                                                            flag_unitary):
        # for a diagonal state the dropped nbar-dependent phase is absent, so
        # the normalized raw coherence <nbar-1|rho|nbar+1> equals G at 2 phi
        phi, alpha, nbar = 0.21, 2.0, 4
        params = cqed.DispersiveParams(phi=phi, alpha=alpha)
        g = cqed.coherent_amplitudes(alpha, params.fock_cutoff)
        rho = cqed.cavity_state_after_protocol(flag_dephased, flag_unitary, g, params)
        raw = np.conj(cqed.fock_coherence(rho, nbar, 1))
        norm = float(g[nbar - 1].real * g[nbar + 1].real)
        csum = cqed.cqed_characteristic_function(flag_dephased, flag_unitary, params)
        assert raw / norm == pytest.approx(scheme_a.evaluate(csum, 2 * phi), abs=1e-12)

    def test_coherence_terms_carry_nbar_phase(self, flag_state, flag_unitary):
        # with initial coherence the raw record differs from G by exactly the
        # neglected exp(i phi nbar (eta_i - eta_k)) factor; they disagree
        phi, alpha, nbar = 0.21, 2.0, 6
        params = cqed.DispersiveParams(phi=phi, alpha=alpha)
        g = cqed.coherent_amplitudes(alpha, params.fock_cutoff)
        rho = cqed.cavity_state_after_protocol(flag_state, flag_unitary, g, params)
        raw = np.conj(cqed.fock_coherence(rho, nbar, 1))
        norm = float(g[nbar - 1].real * g[nbar + 1].real)
        csum = cqed.cqed_characteristic_function(flag_state, flag_unitary, params)
        assert abs(raw / norm - scheme_a.evaluate(csum, 2 * phi)) > 1e-3


class TestCqedCharacteristicFunction:
    def test_ground_identity_is_constant_one(self):
        params = cqed.DispersiveParams(phi=0.4, alpha=0.0, fock_cutoff=10)
        csum = cqed.cqed_characteristic_function(ground_state(), np.eye(2, dtype=complex),
                                                 params)
        for u in (0.0, 0.5, 2.0):
            assert scheme_a.evaluate(csum, u) == pytest.approx(1.0, abs=1e-14)

    def test_normalization_at_zero(self, flag_state, flag_unitary):
        params = cqed.DispersiveParams(phi=0.4, alpha=2.5)
        csum = cqed.cqed_characteristic_function(flag_state, flag_unitary, params)
        assert scheme_a.evaluate(csum, 0.0) == pytest.approx(1.0, abs=1e-14)

    def test_flagship_matches_scheme_a_at_double_splitting(self, flag_state, flag_unitary):
        # cross-module oracle: eta gaps are 2, so the record equals the
        # free-detector scheme with omega_a = 2
        params = cqed.DispersiveParams(phi=0.4, alpha=2.5)
        csum = cqed.cqed_characteristic_function(flag_state, flag_unitary, params)
        assert csum.frequency_scale == 2.0
        dist = scheme_a.quasiprobability(csum)
        table2 = system.transition_table(system.qubit_scenario(2.0, (np.pi / 4, 0, 0)))
        want = scheme_a.quasiprobability(
            scheme_a.characteristic_function(flag_state, table2))
        np.testing.assert_allclose(dist.ws, want.ws, atol=1e-12)
        np.testing.assert_allclose(dist.weights, want.weights, atol=1e-13)
        # rescaling by the recorded factor 2 recovers unit-splitting work values
        work = dist.rescaled(1.0 / csum.frequency_scale)
        np.testing.assert_allclose(work.ws, [-1.0, -0.5, 0.0, 0.5, 1.0], atol=1e-12)

    def test_not_a_qubit(self):
        params = cqed.DispersiveParams(phi=0.4, alpha=0.0, fock_cutoff=10)
        st = system.initial_state(np.eye(3, dtype=complex) / 3)
        with pytest.raises(NotAQubitError):
            cqed.cqed_characteristic_function(st, np.eye(3, dtype=complex), params)


class TestHusimiQ:
    def test_vacuum_closed_form(self):
        rho = np.zeros((12, 12), dtype=complex)
        rho[0, 0] = 1.0
        grid = cqed.PhaseGrid.square(3.0, 41)
        hus = cqed.husimi_q(rho, grid)
        xi = grid.points()
        np.testing.assert_allclose(hus.q, np.exp(-np.abs(xi) ** 2) / np.pi, atol=1e-12)

    def test_coherent_displacement_closed_form(self):
        # cutoff comfortably above the rule so truncation sits below 1e-10
        alpha = 2.5
        g = cqed.coherent_amplitudes(alpha, 45)
        rho = np.outer(g, g.conj())
        grid = cqed.PhaseGrid.square(alpha + 4, 31)
        hus = cqed.husimi_q(rho, grid)
        xi = grid.points()
        np.testing.assert_allclose(hus.q, np.exp(-np.abs(xi - alpha) ** 2) / np.pi,
                                   atol=1e-10)

    def test_normalized_on_wide_grid(self, flag_state, flag_unitary):
        alpha = 2.5
        params = cqed.DispersiveParams(phi=0.5, alpha=alpha)
        g = cqed.coherent_amplitudes(alpha, params.fock_cutoff)
        rho = cqed.cavity_state_after_protocol(flag_state, flag_unitary, g, params)
        grid = cqed.PhaseGrid.square(alpha + 6, 171)
        hus = cqed.husimi_q(rho, grid)
        assert hus.integral() == pytest.approx(1.0, abs=2e-3)
        assert hus.q.min() >= -1e-12

    def test_three_lobes_after_protocol(self, flag_dephased, flag_unitary):
        # incoherent input, alpha = 5: three angular Gaussians at the work
        # angles 0 and -+2 phi with weights (1/2, 1/4, 1/4)
        phi, alpha = 0.5, 5.0
        params = cqed.DispersiveParams(phi=phi, alpha=alpha)
        ang = cqed.angular_distribution(flag_dephased, flag_unitary, params)
        dens = ang.density
        peaks = [t for idx, t in enumerate(ang.thetas)
                 if dens[idx] > dens[idx - 1] and dens[idx] > dens[(idx + 1) % dens.size]
                 and dens[idx] > 0.05]
        assert len(peaks) == 3
        np.testing.assert_allclose(sorted(peaks), [-2 * phi, 0.0, 2 * phi], atol=0.02)

    def test_three_phase_space_lobes(self, flag_dephased, flag_unitary):
        # same structure on the Husimi map itself: blobs of common radius
        # alpha at the three work angles, heaviest on the no-transition branch
        phi, alpha = 0.5, 5.0
        params = cqed.DispersiveParams(phi=phi, alpha=alpha)
        g = cqed.coherent_amplitudes(alpha, params.fock_cutoff)
        rho = cqed.cavity_state_after_protocol(flag_dephased, flag_unitary, g, params)
        centers = alpha * np.exp(1j * np.array([-2 * phi, 0.0, 2 * phi]))
        q_centers = cqed.husimi_q_points(rho, centers)
        np.testing.assert_allclose(q_centers, np.array([0.25, 0.5, 0.25]) / np.pi,
                                   rtol=0.05)
        # midpoints between lobes are empty: well-separated Gaussians
        mids = alpha * np.exp(1j * np.array([-phi, phi]))
        assert np.all(cqed.husimi_q_points(rho, mids) < 0.02 * q_centers.max())

    def test_workers_do_not_change_values(self, flag_state, flag_unitary):
        params = cqed.DispersiveParams(phi=0.3, alpha=1.0)
        g = cqed.coherent_amplitudes(1.0, params.fock_cutoff)
        rho = cqed.cavity_state_after_protocol(flag_state, flag_unitary, g, params)
        grid = cqed.PhaseGrid.square(4.0, 33)
        seq = cqed.husimi_q(rho, grid, workers=0)
        par = cqed.husimi_q(rho, grid, workers=3)
        np.testing.assert_array_equal(seq.q, par.q)


class TestHusimiClosedForm:
    def test_fock_space_oracle_10x10(self, flag_state, flag_unitary):
        rng = np.random.default_rng(71)
        alpha = 2.5
        params = cqed.DispersiveParams(phi=0.37, alpha=alpha)
        g = cqed.coherent_amplitudes(alpha, params.fock_cutoff)
        rho = cqed.cavity_state_after_protocol(flag_state, flag_unitary, g, params)
        r = (alpha + 4) * np.sqrt(rng.uniform(0, 1, 100))
        th = rng.uniform(-np.pi, np.pi, 100)
        xi = (r * np.exp(1j * th)).reshape(10, 10)
        got = cqed.husimi_closed_form(flag_state, flag_unitary, params, xi)
        want = cqed.husimi_q_points(rho, xi)
        assert np.max(np.abs(got - want)) <= 5e-8

    def test_peak_of_single_branch(self):
        # ground state, no drive: coherent blob stays at alpha; Q(alpha) = 1/pi
        alpha = 2.5
        params = cqed.DispersiveParams(phi=0.4, alpha=alpha)
        got = cqed.husimi_closed_form(ground_state(), np.eye(2, dtype=complex),
                                      params, complex(alpha))
        assert got == pytest.approx(1.0 / np.pi, abs=1e-12)

    def test_origin_reduces_to_global_exponential(self, flag_state, flag_unitary):
        # at delta = 0 the chi dependence cancels exactly: Q(0) = e^{-alpha^2}/pi
        for alpha in (0.5, 1.5, 2.5):
            params = cqed.DispersiveParams(phi=0.62, alpha=alpha)
            got = cqed.husimi_closed_form(flag_state, flag_unitary, params, 0j)
            assert got == pytest.approx(np.exp(-alpha ** 2) / np.pi, abs=1e-14)

    def test_non_real_residue_rejected(self):
        # a non-Hermitian "state" smuggled past validation leaves a complex sum
        params = cqed.DispersiveParams(phi=0.4, alpha=1.5)
        broken = system.InitialState(
            rho=np.array([[0.5 + 0.3j, 0], [0, 0.5 - 0.3j]], dtype=complex))
        with pytest.raises(NonRealResidueError):
            cqed.husimi_closed_form(broken, flip_unitary(), params,
                                    np.array([1.2 + 0.4j, -0.3 + 1j]))
        with pytest.raises(NonRealResidueError):
            cqed.angular_distribution(broken, flip_unitary(), params)


class TestAngularDistribution:
    def test_no_drive_single_peak_with_quadrature_oracle(self):
        alpha = 5.0
        params = cqed.DispersiveParams(phi=0.5, alpha=alpha)
        thetas = cqed.default_theta_grid(180)
        ang = cqed.angular_distribution(ground_state(), np.eye(2, dtype=complex),
                                        params, thetas)
        assert ang.integral() == pytest.approx(1.0, abs=1e-6)
        peak = ang.thetas[np.argmax(ang.density)]
        assert abs(peak) <= ang.thetas[1] - ang.thetas[0] + 1e-12
        num = cqed.angular_distribution_numeric(ground_state(), np.eye(2, dtype=complex),
                                                params, thetas, radial_points=256)
        assert np.max(np.abs(num.density - ang.density)) <= 1e-6

    def test_vacuum_protocol_quadrature(self):
        # alpha = 0: rotation-invariant vacuum, P(theta) = 1/(2 pi)
        params = cqed.DispersiveParams(phi=0.5, alpha=0.0, fock_cutoff=10)
        thetas = cqed.default_theta_grid(60)
        ang = cqed.angular_distribution(ground_state(), flip_unitary(), params, thetas)
        np.testing.assert_allclose(ang.density, 1 / (2 * np.pi), atol=1e-12)
        num = cqed.angular_distribution_numeric(ground_state(), flip_unitary(), params,
                                                thetas, radial_points=256)
        assert np.max(np.abs(num.density - ang.density)) <= 1e-8

    def test_flagship_closed_vs_quadrature(self, flag_state, flag_unitary):
        params = cqed.DispersiveParams(phi=0.5, alpha=2.5)
        thetas = cqed.default_theta_grid(120)
        ang = cqed.angular_distribution(flag_state, flag_unitary, params, thetas)
        num = cqed.angular_distribution_numeric(flag_state, flag_unitary, params,
                                                thetas, radial_points=256)
        assert np.max(np.abs(num.density - ang.density)) <= 1e-6

    def test_resolved_regime_blind_to_coherence(self, flag_state, flag_dephased,
                                                flag_unitary):
        params = cqed.DispersiveParams(phi=0.5, alpha=5.0)
        coh = cqed.angular_distribution(flag_state, flag_unitary, params)
        inc = cqed.angular_distribution(flag_dephased, flag_unitary, params)
        assert np.max(np.abs(coh.density - inc.density)) <= 1e-3

    def test_interference_regime_sees_coherence(self, flag_state, flag_dephased,
                                                flag_unitary):
        params = cqed.DispersiveParams(phi=0.5, alpha=2.5)
        coh = cqed.angular_distribution(flag_state, flag_unitary, params)
        inc = cqed.angular_distribution(flag_dephased, flag_unitary, params)
        assert np.max(np.abs(coh.density - inc.density)) > 1e-2

    def test_density_never_negative(self, flag_state, flag_unitary):
        for phi, alpha in ((0.1, 0.5), (0.5, 2.5), (0.3, 5.0)):
            params = cqed.DispersiveParams(phi=phi, alpha=alpha)
            ang = cqed.angular_distribution(flag_state, flag_unitary, params)
            assert ang.density.min() >= -1e-9

    def test_truncated_radial_range_detected(self, flag_state, flag_unitary):
        params = cqed.DispersiveParams(phi=0.5, alpha=2.5)
        with pytest.raises(QuadratureNotConvergedError):
            cqed.angular_distribution_numeric(flag_state, flag_unitary, params,
                                              cqed.default_theta_grid(60),
                                              radial_points=256, radial_range=1.25)

    def test_radial_points_floor(self, flag_state, flag_unitary):
        params = cqed.DispersiveParams(phi=0.5, alpha=2.5)
        with pytest.raises(ValueError):
            cqed.angular_distribution_numeric(flag_state, flag_unitary, params,
                                              radial_points=128)


class TestInterferencePredicate:
    def test_interference_regime(self):
        assert cqed.interference_predicate(cqed.DispersiveParams(0.2, 2.5), 2.0) is True

    def test_resolved_regime(self):
        assert cqed.interference_predicate(cqed.DispersiveParams(0.2, 5.0), 2.0) is False

    def test_vanishing_alpha_always_true(self):
        assert cqed.interference_predicate(
            cqed.DispersiveParams(10.0, 0.0, fock_cutoff=10), 2.0) is True


class TestWeakFieldCrossover:
    def test_block_agreement(self, flag_state, flag_unitary):
        # |alpha> ~ |0> + alpha|1>: the {0,1} block of the coherent-state run
        # matches the two-Fock phase-record run up to O(alpha^2)
        alpha, phi = 0.1, 0.3
        params = cqed.DispersiveParams(phi=phi, alpha=alpha)
        coh = cqed.cavity_state_after_protocol(
            flag_state, flag_unitary, cqed.coherent_amplitudes(alpha, params.fock_cutoff),
            params)
        two = np.zeros(params.fock_cutoff + 1, dtype=complex)
        two[0] = 1 / np.sqrt(1 + alpha ** 2)
        two[1] = alpha / np.sqrt(1 + alpha ** 2)
        rec = cqed.cavity_state_after_protocol(flag_state, flag_unitary, two, params)
        assert np.max(np.abs(coh[:2, :2] - rec[:2, :2])) <= 5 * alpha ** 2


class TestTracePreservation:
    def test_500_random_draws(self):
        rng = np.random.default_rng(72)
        from conftest import random_unitary
        for _ in range(500):
            alpha = rng.uniform(0.0, 5.0)
            params = cqed.DispersiveParams(phi=rng.uniform(-0.8, 0.8), alpha=alpha)
            g = cqed.coherent_amplitudes(alpha, params.fock_cutoff)
            st = system.initial_state(random_density(rng, 2))
            rho = cqed.cavity_state_after_protocol(st, random_unitary(rng, 2), g, params)
            assert abs(np.trace(rho).real - 1.0) <= 1e-10
