import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticelight import (
    FockBasis,
    TruncationWarning,
    analytic_moments_tmsv,
    build_coherent,
    build_fock,
    build_path_entangled,
    build_tmsv,
    expectation_n,
    moments_of,
)

R_HALF = float(np.arcsinh(2**-0.5))  # half a photon per squeezed mode


class TestFockBasis:
    @pytest.mark.parametrize("N,n_max", [(2, 12), (4, 12), (3, 5)])
    def test_sector_sizes(self, N, n_max):
        basis = FockBasis(N, n_max)
        for n in range(n_max + 1):
            start, stop = basis.sector(n)
            assert stop - start == math.comb(n + N - 1, N - 1)
        assert basis.size == sum(
            math.comb(n + N - 1, N - 1) for n in range(n_max + 1)
        )

    def test_sector_ordering(self):
        basis = FockBasis(2, 2)
        occs = [tuple(int(x) for x in row) for row in basis.occupations]
        assert occs == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]

    def test_one_photon_sector_follows_mode_order(self):
        basis = FockBasis(4, 2)
        start, stop = basis.sector(1)
        block = basis.occupations[start:stop]
        assert np.array_equal(block, np.eye(4, dtype=np.int64))

    @settings(max_examples=50, deadline=None)
    @given(data=st.data())
    def test_index_round_trip(self, data):
        N = data.draw(st.integers(1, 4))
        n_max = data.draw(st.integers(0, 6))
        basis = FockBasis(N, n_max)
        i = data.draw(st.integers(0, basis.size - 1))
        assert basis.index_of(basis.occupations[i]) == i

    def test_unknown_occupation(self):
        basis = FockBasis(2, 3)
        with pytest.raises(ValueError):
            basis.index_of((4, 0))


class TestBuildFock:
    def test_single_photon(self, basis2):
        state = build_fock(basis2, (1, 0))
        assert state.amplitudes[basis2.index_of((1, 0))] == 1.0
        assert state.tail_mass == 0.0
        assert np.count_nonzero(state.amplitudes) == 1

    def test_vacuum(self, basis2):
        state = build_fock(basis2, (0, 0))
        assert state.amplitudes[0] == 1.0

    def test_first_waveguide_of_four(self, basis4):
        state = build_fock(basis4, (1, 0, 0, 0))
        assert state.amplitudes[basis4.index_of((1, 0, 0, 0))] == 1.0

    def test_occupation_outside_basis(self, basis2):
        with pytest.raises(ValueError):
            build_fock(basis2, (13, 0))
        with pytest.raises(ValueError):
            build_fock(basis2, (1, 0, 0))


class TestBuildCoherent:
    def test_amplitude_law(self, basis2):
        state = build_coherent(basis2, [1.0, 0.0])
        for j in range(13):
            amp = state.amplitudes[basis2.index_of((j, 0))]
            expected = math.exp(-0.5) / math.sqrt(math.factorial(j))
            assert amp == pytest.approx(expected, abs=1e-9)

    def test_vacuum_component(self, basis2):
        state = build_coherent(basis2, [1.0, 0.0])
        assert abs(state.amplitudes[0]) == pytest.approx(math.exp(-0.5), abs=1e-9)

    def test_tail_matches_poisson_sum(self, basis2):
        state = build_coherent(basis2, [1.0, 0.0])
        tail = math.fsum(
            math.exp(-1.0) / math.factorial(j) for j in range(13, 80)
        )
        assert state.tail_mass == pytest.approx(tail, abs=1e-13)
        assert state.tail_mass < 1e-9

    def test_zero_amplitude_gives_vacuum(self, basis2):
        state = build_coherent(basis2, [0.0, 0.0])
        assert state.tail_mass == 0.0
        assert state.amplitudes[0] == 1.0
        assert np.count_nonzero(state.amplitudes) == 1

    def test_unit_norm(self, basis2):
        state = build_coherent(basis2, [1.0, 0.5j])
        assert state.norm() == pytest.approx(1.0, abs=1e-14)

    def test_warns_when_tail_exceeds_bound(self):
        basis = FockBasis(2, 3)
        with pytest.warns(TruncationWarning):
            build_coherent(basis, [1.5, 0.0])


class TestBuildPathEntangled:
    def test_two_modes(self, basis2):
        state = build_path_entangled(basis2, 0, 1)
        assert state.amplitudes[basis2.index_of((1, 0))] == pytest.approx(2**-0.5)
        assert state.amplitudes[basis2.index_of((0, 1))] == pytest.approx(2**-0.5)
        assert state.tail_mass == 0.0

    def test_half_photon_per_mode(self, basis2):
        state = build_path_entangled(basis2, 0, 1)
        assert expectation_n(state, 0) == pytest.approx(0.5, abs=1e-14)
        assert expectation_n(state, 1) == pytest.approx(0.5, abs=1e-14)

    def test_first_two_of_four(self, basis4):
        state = build_path_entangled(basis4, 0, 1)
        assert state.amplitudes[basis4.index_of((1, 0, 0, 0))] == pytest.approx(
            2**-0.5
        )
        assert state.amplitudes[basis4.index_of((0, 1, 0, 0))] == pytest.approx(
            2**-0.5
        )

    def test_rejects_equal_modes(self, basis2):
        with pytest.raises(ValueError):
            build_path_entangled(basis2, 1, 1)
        with pytest.raises(ValueError):
            build_path_entangled(basis2, 0, 5)


class TestBuildTmsv:
    def test_amplitude_law(self, basis2):
        with pytest.warns(TruncationWarning):
            state = build_tmsv(basis2, 0, 1, R_HALF)
        norm = math.sqrt(1.0 - state.tail_mass)
        for j in range(7):
            amp = state.amplitudes[basis2.index_of((j, j))]
            expected = math.tanh(R_HALF) ** j / math.cosh(R_HALF) / norm
            assert amp == pytest.approx(expected, abs=1e-13)

    def test_tail_is_geometric(self, basis2):
        # kept pair terms run to j = 6; the rest is an exact geometric tail
        with pytest.warns(TruncationWarning):
            state = build_tmsv(basis2, 0, 1, R_HALF)
        x = math.tanh(R_HALF) ** 2
        geometric_tail = math.fsum((1.0 - x) * x**j for j in range(7, 200))
        assert x == pytest.approx(1.0 / 3.0, abs=1e-14)
        assert state.tail_mass == pytest.approx(geometric_tail, abs=1e-15)
        assert state.tail_mass == pytest.approx(x**7, abs=1e-15)

    def test_zero_squeezing_is_vacuum(self, basis2):
        state = build_tmsv(basis2, 0, 1, 0.0)
        assert state.tail_mass == 0.0
        assert state.amplitudes[0] == 1.0
        assert np.count_nonzero(state.amplitudes) == 1

    def test_half_photon_per_mode(self, basis2):
        with pytest.warns(TruncationWarning):
            state = build_tmsv(basis2, 0, 1, R_HALF)
        tol = 10.0 * state.tail_mass
        assert expectation_n(state, 0) == pytest.approx(0.5, abs=tol)
        assert expectation_n(state, 1) == pytest.approx(0.5, abs=tol)

    def test_rejects_negative_squeezing(self, basis2):
        with pytest.raises(ValueError):
            build_tmsv(basis2, 0, 1, -0.1)


class TestMomentsOf:
    def test_single_photon(self, basis2):
        moments = moments_of(build_fock(basis2, (1, 0)))
        assert np.allclose(moments.second, [[1.0, 0.0], [0.0, 0.0]], atol=1e-15)
        assert np.max(np.abs(moments.fourth)) == 0.0

    def test_path_entangled(self, basis2):
        moments = moments_of(build_path_entangled(basis2, 0, 1))
        assert np.allclose(
            moments.second, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15
        )
        assert np.max(np.abs(moments.fourth)) == 0.0

    def test_coherent_eigenvalue_property(self, basis2):
        moments = moments_of(build_coherent(basis2, [1.0, 0.0]))
        assert abs(moments.second[0, 0] - 1.0) < 1e-8
        assert abs(moments.fourth[0, 0, 0, 0] - 1.0) < 1e-7

    def test_fourth_moment_symmetries(self, basis2):
        with pytest.warns(TruncationWarning):
            state = build_tmsv(basis2, 0, 1, R_HALF)
        fourth = moments_of(state).fourth
        assert np.array_equal(fourth, fourth.transpose(1, 0, 2, 3))
        assert np.array_equal(fourth, fourth.transpose(0, 1, 3, 2))
        assert np.array_equal(fourth, fourth.transpose(2, 3, 0, 1).conj())

    def test_second_moment_is_hermitian_psd(self, basis2):
        state = build_coherent(basis2, [0.7, 0.4j])
        second = moments_of(state).second
        assert np.array_equal(second, second.conj().T)
        assert np.min(np.linalg.eigvalsh(second)) > -1e-14

    @pytest.mark.parametrize(
        "factory,total,tol_scale",
        [
            (lambda b: build_fock(b, (1, 0)), 1.0, 0.0),
            (lambda b: build_path_entangled(b, 0, 1), 1.0, 0.0),
            (lambda b: build_coherent(b, [1.0, 0.0]), 1.0, 1.0),
            (lambda b: build_tmsv(b, 0, 1, R_HALF), 1.0, 1.0),
        ],
    )
    def test_total_photon_number(self, basis2, factory, total, tol_scale):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            state = factory(basis2)
        # photon-weighted truncation tails scale with n_max times the
        # probability tail
        tol = max(1e-8, tol_scale * 2 * basis2.max_total * state.tail_mass)
        assert moments_of(state).total_photons() == pytest.approx(total, abs=tol)


class TestAnalyticTmsvMoments:
    def test_zero_squeezing(self):
        moments = analytic_moments_tmsv(0.0, 0, 1, 2)
        assert np.max(np.abs(moments.second)) == 0.0
        assert np.max(np.abs(moments.fourth)) == 0.0

    def test_half_photon_values(self):
        moments = analytic_moments_tmsv(R_HALF, 0, 1, 2)
        assert moments.second[0, 0] == pytest.approx(0.5, abs=1e-14)
        assert moments.second[1, 1] == pytest.approx(0.5, abs=1e-14)
        # pair correlation sinh(r) cosh(r) = sqrt(3)/2 for this squeezing
        assert moments.fourth[0, 1, 0, 1].real == pytest.approx(1.0, abs=1e-14)

    def test_pair_number_correlation_matches_brute_force(self):
        # direct series sum over the pair expansion: sum_j j^2 (1-x) x^j
        x = math.tanh(R_HALF) ** 2
        brute_force = math.fsum(j * j * (1.0 - x) * x**j for j in range(400))
        moments = analytic_moments_tmsv(R_HALF, 0, 1, 2)
        assert moments.fourth[0, 1, 0, 1].real == pytest.approx(
            brute_force, abs=1e-12
        )

    def test_embedding_into_larger_arrays(self):
        moments = analytic_moments_tmsv(R_HALF, 0, 1, 4)
        assert moments.second.shape == (4, 4)
        assert moments.total_photons() == pytest.approx(1.0, abs=1e-14)
        assert np.max(np.abs(moments.second[2:, 2:])) == 0.0

    def test_rejects_bad_modes(self):
        with pytest.raises(ValueError):
            analytic_moments_tmsv(0.5, 0, 0, 2)
        with pytest.raises(ValueError):
            analytic_moments_tmsv(-0.5, 0, 1, 2)


class TestTruncatedVersusAnalytic:
    def test_truncated_moments_approach_exact_ones(self, basis2):
        with pytest.warns(TruncationWarning):
            state = build_tmsv(basis2, 0, 1, R_HALF)
        truncated = moments_of(state)
        exact = analytic_moments_tmsv(R_HALF, 0, 1, 2)
        tail = state.tail_mass
        assert np.max(np.abs(truncated.second - exact.second)) < 10.0 * tail
        # photon-number-squared weighting amplifies the truncation tail by
        # the square of the kept pair count
        assert np.max(np.abs(truncated.fourth - exact.fourth)) < 100.0 * tail

    def test_agreement_tightens_with_depth(self):
        basis = FockBasis(2, 40)
        state = build_tmsv(basis, 0, 1, R_HALF)
        truncated = moments_of(state)
        exact = analytic_moments_tmsv(R_HALF, 0, 1, 2)
        assert np.max(np.abs(truncated.second - exact.second)) < 1e-7
        assert np.max(np.abs(truncated.fourth - exact.fourth)) < 1e-6
