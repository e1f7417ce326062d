import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st

from phasebell import bell, fock_oracle as fo, noise, states
from phasebell.noise import DetectionEfficiency, NoiseChannel, ThermalChannel
from phasebell.states import GhzEcs, PhasePoint3, SinglePhotonW, SqueezedVacuum3

from support import quad_2d, rand_point, rand_settings


class TestEffectiveSDetection:
    def test_perfect_detector_is_identity(self):
        assert noise.effective_s_detection(0.0, 1.0) == pytest.approx(0.0)
        assert noise.effective_s_detection(-0.7, 1.0) == pytest.approx(-0.7)

    def test_arithmetic(self):
        assert noise.effective_s_detection(0.0, 0.5) == pytest.approx(-1.0)
        assert noise.effective_s_detection(-1.0, 0.5) == pytest.approx(-3.0)

    def test_rejects_nonpositive_eta(self):
        with pytest.raises(ValueError):
            noise.effective_s_detection(0.0, 0.0)

    @given(
        s=st.floats(-2.0, 0.0),
        eta1=st.floats(0.05, 1.0),
        eta2=st.floats(0.05, 1.0),
    )
    @hyp_settings(max_examples=150, deadline=None)
    def test_composition_law(self, s, eta1, eta2):
        chained = noise.effective_s_detection(noise.effective_s_detection(s, eta1), eta2)
        direct = noise.effective_s_detection(s, eta1 * eta2)
        assert chained == pytest.approx(direct, abs=1e-12, rel=1e-12)


class TestMeasuredW3:
    def test_perfect_detectors_reduce_to_w3(self, rng):
        eff = DetectionEfficiency.symmetric(1.0)
        for spec in (SinglePhotonW(0.8), SqueezedVacuum3(0.5), GhzEcs(0.9)):
            for _ in range(4):
                pt = rand_point(rng)
                s = -float(rng.uniform(0, 1.5))
                assert noise.measured_w3_detection(spec, pt, s, eff) == pytest.approx(
                    states.w3(spec, pt, s), rel=1e-12
                )

    def test_single_photon_origin_binomial_identity(self):
        # Measured value at the origin equals the weighted sum over the
        # binomially degraded photon distribution of the state.
        eta, s = 0.75, -0.4
        p_n = np.zeros(6)
        p_n[1] = 1.0  # number state |1>
        s_prime = noise.effective_s_detection(s, eta)
        q = (s + 1.0) / (s - 1.0)
        p_eta = np.zeros_like(p_n)
        for m_out in range(6):
            for n in range(m_out, 6):
                p_eta[m_out] += (
                    p_n[n] * math.comb(n, m_out) * (1 - eta) ** (n - m_out) * eta**m_out
                )
        finite_sum = 2.0 / (math.pi * (1.0 - s)) * sum(
            q**m * p_eta[m] for m in range(6)
        )
        # |1>: W(0; s) = -(2/(pi(1-s))) (1+s)/(1-s)
        w_ideal = -(2.0 / (math.pi * (1.0 - s_prime))) * (1.0 + s_prime) / (1.0 - s_prime)
        assert finite_sum == pytest.approx(w_ideal / eta, abs=1e-12)

    def test_arbitrary_state_origin_identity(self, rng):
        # Same identity for random single-mode kets, degraded exactly.
        n_max = 18
        for _ in range(4):
            vec = rng.normal(0, 1, n_max + 1) + 1j * rng.normal(0, 1, n_max + 1)
            vec[8:] *= 0.01
            vec /= np.linalg.norm(vec)
            p_n = np.abs(vec) ** 2
            for eta, s in ((0.85, 0.0), (0.6, -1.0)):
                s_prime = noise.effective_s_detection(s, eta)
                q = (s + 1.0) / (s - 1.0)
                p_eta = np.zeros(n_max + 1)
                for m_out in range(n_max + 1):
                    for n in range(m_out, n_max + 1):
                        p_eta[m_out] += (
                            p_n[n]
                            * math.comb(n, m_out)
                            * (1 - eta) ** (n - m_out)
                            * eta**m_out
                        )
                measured = (
                    2.0 / (math.pi * (1.0 - s))
                    * sum(q**m * p_eta[m] for m in range(n_max + 1))
                )
                rho = fo.FockState(n_max=n_max, modes=1, rho=np.outer(vec, vec.conj()))
                ideal = fo.w1_trace(rho, 0.0, s_prime)
                assert measured == pytest.approx(ideal / eta, abs=1e-8)

    def test_noisy_correlation_matches_lossy_oracle(self, rng, oracle_states):
        # Validates the per-mode substitution rule for the marginals too:
        # the closed-form noisy correlation equals the trace with each
        # observable degraded by its own detector loss channel.
        spec, built = oracle_states["ecs"]
        etas = (0.9, 0.7, 0.95)
        ch = NoiseChannel(efficiency=DetectionEfficiency(*etas))
        for _ in range(3):
            m = rand_settings(rng)
            for s in (0.0, -1.0):
                ops = []
                for z, eta in zip((m.alpha, m.beta, m.gamma), etas):
                    d = fo.displacement_matrix(z, built.n_max)
                    lossy = fo.lossy_observable(fo.o_operator(0.0, s, built.n_max), eta)
                    ops.append(d @ lossy @ d.conj().T)
                assert bell.correlation(spec, m.alpha, m.beta, m.gamma, s, ch) == pytest.approx(
                    fo.correlator(built, *ops), abs=1e-9
                )

    def test_symmetric_channel_uses_kernel_path(self, rng):
        spec = GhzEcs(0.8)
        ch = NoiseChannel(efficiency=DetectionEfficiency.symmetric(0.9))
        m = rand_settings(rng)
        grouped = bell.mk_pair(spec, m, -0.5, ch)
        summed = (
            bell.mk_parameter(spec, m, -0.5, ch),
            bell.mk_prime(spec, m, -0.5, ch),
        )
        assert grouped[0] == pytest.approx(summed[0], abs=1e-10)
        assert grouped[1] == pytest.approx(summed[1], abs=1e-10)


class TestDamping:
    def test_no_damping_identity(self):
        s_prime, t = noise.effective_s_damping(-0.3, ThermalChannel(0.0, 0.5))
        assert (s_prime, t) == (-0.3, 1.0)

    def test_arithmetic(self):
        s_prime, t = noise.effective_s_damping(0.0, ThermalChannel(math.log(2.0), 0.0))
        assert s_prime == pytest.approx(-1.0)
        assert t == pytest.approx(1.0 / math.sqrt(2.0))
        s_prime, t = noise.effective_s_damping(0.0, ThermalChannel(math.log(2.0), 1.0))
        assert s_prime == pytest.approx(-3.0)

    def test_damped_w3_reduces_at_zero_time(self, rng):
        spec = GhzEcs(0.6)
        for _ in range(4):
            pt = rand_point(rng)
            assert noise.damped_w3(spec, pt, -0.4, ThermalChannel(0.0)) == pytest.approx(
                states.w3(spec, pt, -0.4), rel=1e-14
            )

    def test_semigroup_law(self, rng):
        # damping for t1 then t2 equals damping for t1 + t2
        spec = SqueezedVacuum3(0.5)
        gt1, gt2 = 0.3, 0.45
        for nbar in (0.0, 0.8):
            for _ in range(4):
                pt = rand_point(rng)
                s = -0.2
                direct = noise.damped_w3(spec, pt, s, ThermalChannel(gt1 + gt2, nbar))
                s_mid, t2 = noise.effective_s_damping(s, ThermalChannel(gt2, nbar))
                inner_pt = PhasePoint3(pt.alpha / t2, pt.beta / t2, pt.gamma / t2)
                chained = noise.damped_w3(
                    spec, inner_pt, s_mid, ThermalChannel(gt1, nbar)
                ) / t2**6
                assert chained == pytest.approx(direct, abs=1e-8, rel=1e-8)

    def test_damped_correlation_matches_loss_oracle(self, rng, oracle_states):
        # nbar = 0 damping is a pure loss channel acting before the local
        # displacement, hence on the full displaced observable.
        spec, built = oracle_states["ecs"]
        gt = 0.35
        ch = NoiseChannel(thermal=ThermalChannel(gt, 0.0))
        t_sq = math.exp(-gt)
        for _ in range(3):
            m = rand_settings(rng)
            for s in (0.0, -0.8):
                ops = [
                    fo.lossy_observable(fo.o_operator(z, s, built.n_max), t_sq)
                    for z in (m.alpha, m.beta, m.gamma)
                ]
                assert bell.correlation(
                    spec, m.alpha, m.beta, m.gamma, s, ch
                ) == pytest.approx(fo.correlator(built, *ops), abs=1e-9)

    def test_vacuum_damps_to_thermal_marginal(self):
        # For long times every mode thermalizes: the damped one-mode
        # marginal of the vacuum state approaches the bath distribution.
        spec = SqueezedVacuum3(0.0)
        nbar, s = 0.6, -0.5
        gt = 12.0
        s_prime, t = noise.effective_s_damping(s, ThermalChannel(gt, nbar))
        for a in (0.2 + 0.1j, -0.5j):
            damped = states.w1_marginal(spec, 0, a / t, s_prime) / t**2
            assert damped == pytest.approx(noise.thermal_w1(a, nbar, s), rel=1e-4)


class TestThermalW1:
    def test_vacuum_peak(self):
        assert noise.thermal_w1(0.0, 0.0, 0.0) == pytest.approx(2.0 / math.pi)

    def test_occupied_husimi_value(self):
        assert noise.thermal_w1(0.0, 1.0, -1.0) == pytest.approx(1.0 / (2.0 * math.pi))

    def test_normalization(self):
        def integrand(xs, ys):
            return np.array(
                [noise.thermal_w1(complex(x, y), 0.7, -0.3) for x, y in zip(xs, ys)]
            )

        assert quad_2d(integrand, 6.0) == pytest.approx(1.0, abs=1e-6)

    def test_rejects_negative_nbar(self):
        with pytest.raises(ValueError):
            noise.thermal_w1(0.0, -0.1, 0.0)


class TestConvolution:
    def test_matches_damped_w3_at_origin(self):
        spec = GhzEcs(0.3)
        ch = ThermalChannel(0.1, 0.0)
        origin = PhasePoint3(0, 0, 0)
        assert noise.convolution_check(spec, origin, 0.0, ch, nodes=10) == pytest.approx(
            noise.damped_w3(spec, origin, 0.0, ch), abs=1e-3
        )

    def test_matches_damped_w3_offset_thermal(self):
        spec = SqueezedVacuum3(0.4)
        ch = ThermalChannel(0.25, 0.5)
        pt = PhasePoint3(0.2 + 0.1j, -0.1 + 0.2j, 0.15)
        assert noise.convolution_check(spec, pt, -0.4, ch, nodes=12) == pytest.approx(
            noise.damped_w3(spec, pt, -0.4, ch), abs=1e-3
        )

    def test_zero_time_limit(self):
        spec = SinglePhotonW(1.0)
        pt = PhasePoint3(0.3, -0.2j, 0.1 + 0.1j)
        assert noise.convolution_check(spec, pt, -0.5, ThermalChannel(0.0)) == pytest.approx(
            states.w3(spec, pt, -0.5), rel=1e-12
        )

    def test_hotter_bath_flattens_peak(self):
        spec = SqueezedVacuum3(0.5)
        origin = PhasePoint3(0, 0, 0)
        cold = noise.damped_w3(spec, origin, 0.0, ThermalChannel(0.4, 0.0))
        hot = noise.damped_w3(spec, origin, 0.0, ThermalChannel(0.4, 1.5))
        assert abs(hot) < abs(cold)

    def test_grid_cap(self):
        with pytest.raises(MemoryError):
            noise.convolution_check(
                GhzEcs(0.3), PhasePoint3(0, 0, 0), 0.0, ThermalChannel(0.1), nodes=40
            )


class TestChannelReductions:
    def test_trivial_channel_matches_noiseless(self, rng):
        spec = GhzEcs(0.7)
        ch = NoiseChannel(
            efficiency=DetectionEfficiency.symmetric(1.0), thermal=ThermalChannel(0.0)
        )
        for _ in range(5):
            m = rand_settings(rng)
            assert bell.svetlichny(spec, m, -0.6, 1, ch) == pytest.approx(
                bell.svetlichny(spec, m, -0.6, 1), abs=1e-12
            )

    def test_chained_parameters(self):
        # damping first, detection second
        ch = NoiseChannel(
            efficiency=DetectionEfficiency.symmetric(0.8),
            thermal=ThermalChannel(0.5, 0.3),
        )
        s = -0.25
        s_damped, t = noise.effective_s_damping(s, ch.thermal)
        expected_s = noise.effective_s_detection(s_damped, 0.8)
        s_modes, prefs, inv_scale = noise.effective_parameters(s, ch)
        assert s_modes == (expected_s,) * 3
        assert inv_scale == pytest.approx(1.0 / t)
        assert prefs[0] == pytest.approx(1.0 / (0.8 * t * t))

    def test_degraded_optimum_is_smaller(self):
        from phasebell import optimize

        cfg = optimize.OptimizerConfig(multistart_count=6, rng_seed=7)
        spec = GhzEcs(1.0)
        clean = optimize.maximize_svetlichny(spec, 0.0, cfg)
        noisy = optimize.maximize_svetlichny(
            spec, 0.0, cfg,
            NoiseChannel(efficiency=DetectionEfficiency.symmetric(0.9)),
            extra_seeds=(clean.settings.to_array(),),
        )
        assert noisy.value < clean.value
