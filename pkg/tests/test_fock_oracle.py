import math

import numpy as np
import pytest

from phasebell import bell, fock_oracle as fo, states
from phasebell.states import GhzEcs, PhasePoint3, SinglePhotonW, SqueezedVacuum3

from support import rand_settings


class TestDisplacement:
    def test_zero_is_identity(self):
        assert np.allclose(fo.displacement_matrix(0.0, 12), np.eye(13))

    def test_first_column_is_coherent_state(self):
        a = 0.7 - 0.3j
        d = fo.displacement_matrix(a, 30)
        expected = fo.coherent_ket(a, 30)
        assert np.max(np.abs(d[:, 0] - expected)) < 1e-14

    def test_inverse_composition(self):
        # Unitarity holds away from the truncation corner: the low-n block
        # of D(a)D(-a) is the identity once n_max leaves room for the
        # coherent spread of the intermediate states.
        for a in (0.5, 1.3 + 0.8j, -2.0j):
            d = fo.displacement_matrix(a, 40)
            dm = fo.displacement_matrix(-a, 40)
            block = (d @ dm)[:8, :8]
            assert np.max(np.abs(block - np.eye(8))) < 1e-8


class TestPiOperator:
    def test_undisplaced_parity(self):
        pi0 = fo.pi_operator(0.0, 0.0, 8)
        assert np.allclose(pi0, np.diag([(-1.0) ** n for n in range(9)]))

    def test_undisplaced_vacuum_projector(self):
        pi_m1 = fo.pi_operator(0.0, -1.0, 8)
        expected = np.zeros((9, 9))
        expected[0, 0] = 1.0
        assert np.max(np.abs(pi_m1 - expected)) < 1e-14

    def test_vacuum_expectation_is_gaussian(self):
        for a in (0.4 + 0.2j, -1.1j):
            for s in (0.0, -0.6, -2.0):
                op = fo.pi_operator(a, s, 40)
                expected = math.exp(-2.0 * abs(a) ** 2 / (1.0 - s))
                assert op[0, 0].real == pytest.approx(expected, abs=1e-10)
                assert abs(op[0, 0].imag) < 1e-12

    def test_rejects_positive_s(self):
        with pytest.raises(ValueError):
            fo.pi_operator(0.0, 0.5, 8)

    def test_hermitian_and_spectrum_matches_eigenvalues(self):
        a, s, n_max = 0.6 - 0.4j, -0.7, 35
        op = fo.pi_operator(a, s, n_max)
        assert np.max(np.abs(op - op.conj().T)) < 1e-12
        eigs = np.sort(np.linalg.eigvalsh(op))
        q = (s + 1.0) / (s - 1.0)
        expected = np.sort(np.power(q, np.arange(n_max + 1)))
        # compare away from the truncation-affected extremes
        assert np.max(np.abs(eigs[:20] - expected[:20])) < 1e-10


class TestOObservable:
    def test_husimi_branch_is_coherent_projector(self):
        a = 0.8 + 0.1j
        op = fo.o_operator(a, -1.0, 30)
        ket = fo.coherent_ket(a, 30)
        expected = 2.0 * np.outer(ket, ket.conj()) - np.eye(31)
        assert np.max(np.abs(op - expected)) < 1e-10

    def test_wigner_branch_is_displaced_parity(self):
        a = 0.5j
        assert np.allclose(fo.o_operator(a, 0.0, 20), fo.pi_operator(a, 0.0, 20))

    def test_branches_agree_at_minus_one(self):
        a = 0.3 - 0.9j
        upper = (1.0 - (-1.0)) * fo.pi_operator(a, -1.0, 20) + (-1.0) * np.eye(21)
        lower = fo.o_operator(a, -1.0, 20)
        assert np.max(np.abs(upper - lower)) < 1e-12

    @pytest.mark.parametrize("s", [0.0, -0.5, -1.0, -2.5])
    def test_spectrum_within_unit_interval(self, s):
        for a in (0.0, 0.7 + 0.2j):
            eigs = np.linalg.eigvalsh(fo.o_operator(a, s, 30))
            assert eigs.max() <= 1.0 + 1e-10
            assert eigs.min() >= -1.0 - 1e-10


class TestEigenvalueSpectrum:
    def test_wigner_point_is_parity(self):
        for n in range(6):
            assert fo.eigenvalue_spectrum(0.0, n) == pytest.approx((-1.0) ** n)

    @pytest.mark.parametrize("s", [-0.999, -0.5, -1e-9, 0.0])
    def test_first_excited_always_minus_one(self, s):
        assert fo.eigenvalue_spectrum(s, 1) == pytest.approx(-1.0, abs=1e-12)

    def test_lower_branch_value(self):
        assert fo.eigenvalue_spectrum(-3.0, 1) == pytest.approx(0.0, abs=1e-15)

    def test_bounded_with_unit_top(self):
        for s in (0.0, -0.3, -1.0, -4.0):
            assert fo.eigenvalue_spectrum(s, 0) == pytest.approx(1.0)
            for n in range(12):
                assert abs(fo.eigenvalue_spectrum(s, n)) <= 1.0 + 1e-12


class TestBuildState:
    def test_symmetric_photon_amplitudes(self):
        st = fo.build_state(SinglePhotonW(1.0), 4)
        amp = 1.0 / math.sqrt(3.0)
        assert st.ket[0, 0, 1] == pytest.approx(amp)
        assert st.ket[0, 1, 0] == pytest.approx(amp)
        assert st.ket[1, 0, 0] == pytest.approx(amp)
        assert st.trace() == pytest.approx(1.0, abs=1e-14)

    def test_cat_branch_overlap(self):
        zeta = 0.8
        plus = fo.coherent_ket(zeta, 25)
        minus = fo.coherent_ket(-zeta, 25)
        overlap = abs(np.vdot(plus, minus)) ** 3
        assert overlap == pytest.approx(math.exp(-6.0 * zeta**2), abs=1e-12)
        st = fo.build_state(GhzEcs(zeta), 25)
        assert st.trace() == pytest.approx(1.0, abs=1e-12)

    def test_cutoff_error_when_too_small(self):
        with pytest.raises(fo.FockCutoffError):
            fo.build_state(GhzEcs(2.0), 4)

    def test_squeezed_wigner_matches_closed_form(self):
        # Tritter-convention calibration: pointwise Wigner agreement.
        spec = SqueezedVacuum3(0.3)
        st = fo.build_state(spec, 20)
        rng = np.random.default_rng(11)
        for _ in range(8):
            v = rng.normal(0, 0.5, 6)
            pt = PhasePoint3(complex(v[0], v[1]), complex(v[2], v[3]), complex(v[4], v[5]))
            assert fo.w3_trace(st, pt, 0.0) == pytest.approx(
                states.w3(spec, pt, 0.0), abs=1e-6
            )

    def test_squeezed_matches_literal_tritter_unitary(self):
        # The pair-creation normal form equals the blockwise tritter unitary
        # applied to one p-squeezed and two x-squeezed vacua.
        r, n_max = 0.25, 12
        product = np.einsum(
            "a,b,c->abc",
            fo.squeezed_ket(r, math.pi, n_max),
            fo.squeezed_ket(r, 0.0, n_max),
            fo.squeezed_ket(r, 0.0, n_max),
        )
        mixed = fo.apply_passive_interferometer(product, fo.tritter_matrix())
        normal_form = fo.build_state(SqueezedVacuum3(r), n_max).ket
        mixed = mixed / np.linalg.norm(mixed)
        phase = np.vdot(mixed, normal_form)
        phase /= abs(phase)
        # total-photon sectors <= n_max transform within complete blocks, so
        # those amplitudes must agree exactly; higher sectors are clipped by
        # the per-mode cutoff in the literal route.
        diff = np.abs(mixed * phase - normal_form)
        for idx in np.ndindex(*diff.shape):
            if sum(idx) <= n_max // 2:
                assert diff[idx] < 5e-9

    def test_default_cutoffs(self):
        assert fo.default_cutoff(SinglePhotonW(0.2)) == 5
        assert fo.default_cutoff(SqueezedVacuum3(1.0)) >= 28
        assert fo.default_cutoff(GhzEcs(2.0)) >= 28


class TestCorrelator:
    def test_vacuum_parity_product(self):
        st = fo.build_state(SqueezedVacuum3(0.0), 6)
        op = fo.o_operator(0.0, 0.0, 6)
        assert fo.correlator(st, op, op, op) == pytest.approx(1.0, abs=1e-12)

    def test_vacuum_projector_product(self):
        st = fo.build_state(SqueezedVacuum3(0.0), 6)
        op = fo.o_operator(0.0, -1.0, 6)
        assert fo.correlator(st, op, op, op) == pytest.approx(1.0, abs=1e-12)

    def test_matches_quasiprobability_combination(self, rng, oracle_states):
        spec, st = oracle_states["ecs"]
        for _ in range(6):
            m = rand_settings(rng)
            for s in (0.0, -0.8, -1.4):
                ops = [fo.o_operator(z, s, st.n_max) for z in (m.alpha, m.beta, m.gamma)]
                trace_val = fo.correlator(st, *ops)
                closed = bell.correlation(spec, m.alpha, m.beta, m.gamma, s)
                assert closed == pytest.approx(trace_val, abs=1e-8)

    def test_dimension_mismatch(self):
        st = fo.build_state(SinglePhotonW(1.0), 5)
        with pytest.raises(ValueError):
            fo.correlator(st, np.eye(3), np.eye(6), np.eye(6))

    def test_cutoff_convergence(self):
        spec = GhzEcs(0.5)
        m = bell.MeasurementSettings(0.2 + 0.1j, -0.3j, 0.1, 0.4 - 0.2j, -0.1 + 0.3j, 0.2)
        vals = []
        for n_max in (16, 32):
            st = fo.build_state(spec, n_max)
            ops = [fo.o_operator(z, -0.5, n_max) for z in (m.alpha, m.beta, m.gamma)]
            vals.append(fo.correlator(st, *ops))
        assert abs(vals[1] - vals[0]) < 1e-8


class TestPartialTrace:
    def test_product_state_factor(self):
        a = fo.coherent_ket(0.4 + 0.2j, 10)
        b = fo.coherent_ket(-0.6j, 10)
        c = fo.coherent_ket(0.9, 10)
        st = fo.FockState(n_max=10, modes=3, ket=np.einsum("a,b,c->abc", a, b, c))
        reduced = fo.partial_trace(st, 1)
        expected = np.kron(np.outer(a, a.conj()), np.outer(c, c.conj()))
        assert np.max(np.abs(reduced.rho - expected)) < 1e-12

    def test_symmetric_photon_reduction_spectrum(self):
        st = fo.build_state(SinglePhotonW(1.0), 5)
        for mode in range(3):
            reduced = fo.partial_trace(st, mode)
            eigs = np.sort(np.linalg.eigvalsh(reduced.rho))[::-1]
            assert eigs[0] == pytest.approx(2.0 / 3.0, abs=1e-12)
            assert eigs[1] == pytest.approx(1.0 / 3.0, abs=1e-12)
            assert np.all(eigs[2:] < 1e-12)

    def test_trace_preserved(self, oracle_states):
        _, st = oracle_states["sv"]
        reduced = fo.partial_trace(st, 0)
        assert reduced.trace() == pytest.approx(1.0, abs=1e-10)

    def test_invalid_mode(self, oracle_states):
        _, st = oracle_states["w"]
        with pytest.raises(ValueError):
            fo.partial_trace(st, 3)
