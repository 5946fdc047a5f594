"""Core types: construction, validation, phases, readout."""

import math

import numpy as np
import pytest

from phasewalk import (
    CoinBias,
    DecoherenceConfig,
    DensityState,
    Harmonic,
    Line,
    PositionDistribution,
    PureState,
    Ring,
    Table,
    WalkParams,
    dephasing_equivalent_gamma,
    distribution_of,
    make_initial,
    make_symmetric_initial,
    phase_at,
)
from phasewalk.core import phase_factors


class TestCoinBias:
    def test_tunneling_amplitude(self):
        assert CoinBias(0.0).tunneling == 1.0
        assert abs(CoinBias(math.pi / 3).tunneling - 0.5) < 1e-15
        assert CoinBias(math.pi / 2).tunneling == math.cos(math.pi / 2)

    @pytest.mark.parametrize("theta", [-0.01, math.pi / 2 + 0.01, 3.0])
    def test_rejects_out_of_range(self, theta):
        with pytest.raises(ValueError):
            CoinBias(theta)


class TestTopology:
    def test_line_sites(self):
        line = Line(3)
        assert line.n_sites == 7
        assert list(line.sites()) == [-3, -2, -1, 0, 1, 2, 3]
        assert line.index_of(0) == line.origin_index == 3

    def test_line_rejects_bad_t_max(self):
        with pytest.raises(ValueError):
            Line(0)

    def test_ring_sites(self):
        ring = Ring(4)
        assert list(ring.sites()) == [0, 1, 2, 3]
        with pytest.raises(ValueError):
            ring.index_of(4)

    def test_ring_rejects_too_small(self):
        with pytest.raises(ValueError):
            Ring(1)


class TestPhaseProfile:
    def test_harmonic_examples(self):
        assert phase_at(Harmonic(1, 4), 1) == math.pi / 2
        assert phase_at(Harmonic(1, 4), 4) == 0.0
        assert all(phase_at(Harmonic(0, 1), x) == 0.0 for x in range(-5, 6))

    def test_harmonic_period(self):
        profile = Harmonic(3, 8)
        for x in range(-50, 50):
            assert phase_at(profile, x + 8) == phase_at(profile, x)

    def test_harmonic_exact_at_large_sites(self):
        # integer reduction keeps the phase exact far from the origin
        assert phase_at(Harmonic(1, 4), 10**15 + 1) == math.pi / 2

    def test_harmonic_rejects_non_coprime(self):
        with pytest.raises(ValueError):
            Harmonic(2, 4)
        with pytest.raises(ValueError):
            Harmonic(0, 4)

    def test_harmonic_rejects_negative_q(self):
        with pytest.raises(ValueError):
            Harmonic(-1, 4)

    def test_table_reduces_to_principal_range(self):
        table = Table((7.0, -0.5, 2 * math.pi), first_site=-1)
        assert all(0.0 <= v < 2 * math.pi for v in table.phases)
        assert phase_at(table, -1) == 7.0 - 2 * math.pi

    def test_table_out_of_range(self):
        table = Table((0.1, 0.2), first_site=0)
        with pytest.raises(ValueError):
            phase_at(table, 2)

    def test_table_must_cover_topology(self):
        with pytest.raises(ValueError):
            phase_factors(Table((0.1, 0.2), first_site=0), Line(2))

    def test_ring_harmonic_divisibility(self):
        with pytest.raises(ValueError):
            WalkParams(CoinBias(0.5), Harmonic(1, 4), Ring(6))
        WalkParams(CoinBias(0.5), Harmonic(1, 4), Ring(8))  # fine


class TestStates:
    def test_symmetric_initial_amplitudes(self):
        state = make_symmetric_initial(Line(10))
        amp = state.amplitudes
        origin = Line(10).origin_index
        assert abs(amp[origin, 0] - 1 / math.sqrt(2)) < 1e-15
        assert abs(amp[origin, 1] - 1j / math.sqrt(2)) < 1e-15
        mask = np.ones(amp.shape[0], dtype=bool)
        mask[origin] = False
        assert np.all(amp[mask] == 0)
        assert abs(np.sum(np.abs(amp) ** 2) - 1.0) < 1e-15

    def test_make_initial_matches_symmetric(self):
        a = make_initial(Line(5), 1 / math.sqrt(2), 1j / math.sqrt(2), 0)
        b = make_symmetric_initial(Line(5))
        assert np.array_equal(a.amplitudes, b.amplitudes)

    def test_make_initial_localized(self):
        state = make_initial(Line(5), 0.6, 0.8j, 3)
        dist = distribution_of(state)
        assert abs(np.sum(np.abs(state.amplitudes) ** 2) - 1.0) < 1e-15
        assert dist.probs[Line(5).index_of(3)] == pytest.approx(1.0, abs=1e-15)

    def test_make_initial_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            make_initial(Line(5), 0.9, 0.8j, 0)  # not normalized
        with pytest.raises(ValueError):
            make_initial(Line(5), 1.0, 0.0, 6)  # outside the window

    def test_pure_state_rejects_non_normalized(self):
        amp = np.zeros((5, 2), dtype=complex)
        amp[2, 0] = 0.5
        with pytest.raises(ValueError):
            PureState(amp, Line(2))

    def test_density_from_pure(self):
        rho = DensityState.from_pure(make_symmetric_initial(Line(2)))
        assert abs(np.trace(rho.matrix) - 1.0) < 1e-15
        assert np.allclose(rho.matrix, rho.matrix.conj().T)

    def test_density_rejects_violations(self):
        topo = Line(1)
        good = DensityState.from_pure(make_symmetric_initial(topo)).matrix
        bad_herm = np.array(good)
        bad_herm[0, 1] += 1e-6
        with pytest.raises(ValueError):
            DensityState(bad_herm, topo)
        with pytest.raises(ValueError):
            DensityState(good * 1.5, topo)  # trace
        bad_diag = np.array(good)
        bad_diag[0, 0] = -1e-6
        bad_diag[2, 2] = bad_diag[2, 2] + 1e-6
        with pytest.raises(ValueError):
            DensityState(bad_diag, topo)

    def test_density_dimension_guard(self):
        ring = Ring(513)  # dimension 1026 > 1024
        with pytest.raises(ValueError):
            DensityState(np.eye(1026) / 1026, ring)


class TestDistributionOf:
    def test_initial_spike(self):
        dist = distribution_of(make_symmetric_initial(Line(3)))
        assert dist.at_origin() == pytest.approx(1.0, abs=1e-15)
        assert float(dist.probs.sum()) == pytest.approx(1.0, abs=1e-15)

    def test_two_site_pure(self):
        amp = np.zeros((5, 2), dtype=complex)
        amp[Line(2).index_of(1), 0] = 1 / math.sqrt(2)
        amp[Line(2).index_of(-1), 1] = 1 / math.sqrt(2)
        dist = distribution_of(PureState(amp, Line(2)))
        assert dist.probs[Line(2).index_of(1)] == pytest.approx(0.5, abs=1e-15)
        assert dist.probs[Line(2).index_of(-1)] == pytest.approx(0.5, abs=1e-15)

    def test_mixed_density_diagonal_readout(self):
        topo = Line(2)
        dim = 2 * topo.n_sites
        rho = np.zeros((dim, dim), dtype=complex)
        rho[2 * topo.index_of(0) + 0, 2 * topo.index_of(0) + 0] = 0.5
        rho[2 * topo.index_of(2) + 1, 2 * topo.index_of(2) + 1] = 0.5
        dist = distribution_of(DensityState(rho, topo))
        assert dist.probs[topo.index_of(0)] == 0.5
        assert dist.probs[topo.index_of(2)] == 0.5

    def test_dust_is_clamped_not_negative(self):
        probs = np.full(5, 0.2)
        probs[0] -= 1e-16
        probs[1] += 1e-16
        dist = PositionDistribution(probs, Line(2))
        assert np.all(dist.probs >= 0.0)

    def test_distribution_rejects_negative(self):
        probs = np.array([0.6, 0.5, -0.1])
        with pytest.raises(ValueError):
            PositionDistribution(probs, Ring(3))

    def test_distribution_rejects_bad_sum(self):
        with pytest.raises(ValueError):
            PositionDistribution(np.array([0.6, 0.6, 0.0]), Ring(3))


class TestDecoherenceConfig:
    def test_bridge_values(self):
        assert dephasing_equivalent_gamma(0.0) == 0.0
        assert abs(dephasing_equivalent_gamma(1.0) - 1.0) < 1e-15
        expected = 1.0 - (2.0 / math.pi) ** 2  # sinc(pi/2) = 2/pi
        assert abs(dephasing_equivalent_gamma(0.5) - expected) < 1e-15

    def test_config_validation(self):
        DecoherenceConfig(gamma=0.3)
        assert DecoherenceConfig(eta=0.5).matched_gamma() == dephasing_equivalent_gamma(0.5)
        with pytest.raises(ValueError):
            DecoherenceConfig(gamma=1.5)
        with pytest.raises(ValueError):
            DecoherenceConfig(eta=-0.1)
