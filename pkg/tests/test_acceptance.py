"""Acceptance gate: one test per exit criterion, one printed line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
Every tolerance is pinned here; nothing is deferred to calibration.
"""

import math
import shutil
import time
from contextlib import contextmanager

import numpy as np

from helpers import random_distribution
from phasewalk import (
    CoinBias,
    DensityState,
    Harmonic,
    Line,
    PositionDistribution,
    PureState,
    Ring,
    TimeSeries,
    WalkParams,
    Zero,
    apply_coin,
    band_analysis,
    bloch_blocks,
    build_step_unitary,
    classical_walk_oracle,
    detect_quasi_period,
    distribution_of,
    evolve_density,
    evolve_trajectories,
    fit_spreading_exponent,
    identity_proximity,
    l1_distance,
    make_symmetric_initial,
    pure_distributions,
    quasi_energies,
    recurrence,
    variance,
)
from phasewalk.cli import cmd_reproduce
from phasewalk.core import dephasing_equivalent_gamma, phase_at
from phasewalk.core import Table


@contextmanager
def criterion(number: int, description: str):
    try:
        yield
    except Exception:
        print(f"criterion {number:2d}: FAIL - {description}")
        raise
    print(f"criterion {number:2d}: PASS - {description}")


def symmetric_run(theta, profile, t_max, t):
    topo = Line(t_max)
    params = WalkParams(CoinBias(theta), profile, topo)
    return pure_distributions(make_symmetric_initial(topo), params, t)


def test_criterion_1_quasi_period_revival():
    with criterion(1, "quasi-period revival: tau=4 with extrema at t=4 and t=8"):
        started = time.perf_counter()
        for label, theta in (("2*pi/5", 2 * math.pi / 5), ("pi/3", math.pi / 3),
                             ("2*pi/7", 2 * math.pi / 7)):
            dists = symmetric_run(theta, Harmonic(1, 4), 10, 10)
            rec = [recurrence(d) for d in dists]
            var = [variance(d) for d in dists]
            tau = detect_quasi_period(TimeSeries(np.array(rec)), 5)["tau"]
            assert tau == 4, f"theta={label}: detected tau={tau}, expected 4"
            for t in (4, 8):
                assert rec[t] > rec[t - 1] and rec[t] > rec[t + 1], (
                    f"theta={label}: recurrence not a strict local maximum at t={t} "
                    f"({rec[t - 1]:.6f}, {rec[t]:.6f}, {rec[t + 1]:.6f})"
                )
                assert var[t] < var[t - 1] and var[t] < var[t + 1], (
                    f"theta={label}: variance not a strict local minimum at t={t} "
                    f"({var[t - 1]:.6f}, {var[t]:.6f}, {var[t + 1]:.6f})"
                )
        assert time.perf_counter() - started < 1.0


def test_criterion_2_ballistic_transport():
    with criterion(2, "standard walk spreads ballistically over t in [20, 100]"):
        started = time.perf_counter()
        dists = symmetric_run(math.pi / 4, Zero(), 100, 100)
        sigma = TimeSeries(np.sqrt([variance(d) for d in dists]))
        fit = fit_spreading_exponent(sigma, 20, 100)
        assert 0.95 <= fit["exponent"] <= 1.05, fit
        assert fit["r_squared"] > 0.999, fit
        assert time.perf_counter() - started < 5.0


def test_criterion_3_fully_decohered_limit():
    with criterion(3, "full dephasing reproduces the classical chain exactly"):
        started = time.perf_counter()
        topo = Line(50)
        coin = CoinBias(math.pi / 4)
        params = WalkParams(coin, Zero(), topo)
        rhos = evolve_density(DensityState.from_pure(make_symmetric_initial(topo)),
                              params, 1.0, 50)
        for t, rho in enumerate(rhos):
            dist = distribution_of(rho)
            assert abs(variance(dist) - t) < 1e-9, f"Var({t}) = {variance(dist)}"
            oracle = classical_walk_oracle(coin, t, topo)
            assert l1_distance(dist, oracle) < 1e-9
        assert time.perf_counter() - started < 10.0


def test_criterion_4_backend_equivalence():
    with criterion(4, "density/pure agree at gamma=0; trajectories match the sinc^2 bridge"):
        # (a) coherent channel against pure states, 10 steps
        for theta, profile in ((math.pi / 3, Harmonic(1, 4)), (math.pi / 4, Zero())):
            topo = Line(10)
            params = WalkParams(CoinBias(theta), profile, topo)
            init = make_symmetric_initial(topo)
            pure = pure_distributions(init, params, 10)
            dens = evolve_density(DensityState.from_pure(init), params, 0.0, 10)
            for p_dist, rho in zip(pure, dens):
                assert l1_distance(p_dist, distribution_of(rho)) < 1e-12
        # (b) trajectory ensemble against the matched dephasing channel at t=4
        topo = Line(4)
        params = WalkParams(CoinBias(math.pi / 4), Harmonic(1, 4), topo)
        init = make_symmetric_initial(topo)
        for eta in (0.5, 1.0):
            gamma = dephasing_equivalent_gamma(eta)
            result = evolve_trajectories(init, params, eta, 4, 10_000, seed=0)
            dens = evolve_density(DensityState.from_pure(init), params, gamma, 4)
            for t in range(5):
                diff = np.abs(
                    result.distributions[t].probs - distribution_of(dens[t]).probs
                )
                # 1e-12 covers float dust at sites with zero sampling spread
                assert np.all(diff <= 3.0 * result.stderr[t] + 1e-12), (
                    f"eta={eta}, t={t}: max excess "
                    f"{np.max(diff - 3.0 * result.stderr[t]):.3e}"
                )


def test_criterion_5_spectral_oracle_equivalence():
    with criterion(5, "Bloch-block spectra equal dense diagonalization on the full grid"):
        started = time.perf_counter()
        for n_sites in (8, 16, 24):
            for p in (2, 4):
                for theta in (math.pi / 4, math.pi / 3, 2 * math.pi / 5):
                    params = WalkParams(CoinBias(theta), Harmonic(1, p), Ring(n_sites))
                    lam = np.linalg.eigvals(build_step_unitary(params))
                    assert np.max(np.abs(np.abs(lam) - 1.0)) < 1e-10
                    angles = np.angle(lam)
                    dense = np.sort(np.where(angles <= -math.pi, angles + 2 * math.pi, angles))
                    blocks = np.sort(quasi_energies(params).energies())
                    assert np.max(np.abs(dense - blocks)) < 1e-9, (n_sites, p, theta)
        assert time.perf_counter() - started < 10.0


def test_criterion_6_band_structure():
    with criterion(6, "4 bands of 8 with a degenerate pair; width tracks d^(p/2)"):
        params = WalkParams(CoinBias(math.pi / 3), Harmonic(1, 4), Ring(16))
        report = band_analysis(quasi_energies(params), 4)
        assert report.n_bands == 4 and not report.flagged
        for band in report.bands:
            assert band.member_count == 8
            assert band.distinct_count <= 7
        # E_000 and E_010 coincide: the ell=0 sector pairs its levels exactly
        block = bloch_blocks(params)[0]
        energies = np.sort(np.angle(np.linalg.eigvals(block)))
        for k in range(0, energies.size, 2):
            assert energies[k + 1] - energies[k] < 1e-9
        widths = {}
        for theta in (math.pi / 3, 0.45 * math.pi):
            spectrum = quasi_energies(WalkParams(CoinBias(theta), Harmonic(1, 4), Ring(16)))
            widths[theta] = np.mean([b.width for b in band_analysis(spectrum, 4).bands])
        measured = widths[math.pi / 3] / widths[0.45 * math.pi]
        predicted = (math.cos(math.pi / 3) / math.cos(0.45 * math.pi)) ** 2
        assert abs(measured / predicted - 1.0) < 0.15, (measured, predicted)


def test_criterion_7_adiabatic_diabatic_transition():
    with criterion(7, "revival probability and identity proximity grow with theta"):
        grid = [math.pi / 5, math.pi / 4, math.pi / 3, 2 * math.pi / 5, 0.45 * math.pi]
        p4_origin = []
        proximity = []
        for theta in grid:
            dists = symmetric_run(theta, Harmonic(1, 4), 4, 4)
            p4_origin.append(recurrence(dists[4]))
            ring = WalkParams(CoinBias(theta), Harmonic(1, 4), Ring(16))
            proximity.append(identity_proximity(ring))
        assert all(a < b for a, b in zip(p4_origin, p4_origin[1:])), p4_origin
        assert all(a < b for a, b in zip(proximity, proximity[1:])), proximity


def test_criterion_8_exact_small_cases():
    with criterion(8, "1- and 2-step distributions match the hand-derived values"):
        dists = symmetric_run(math.pi / 4, Zero(), 5, 2)
        topo = Line(5)
        expected_1 = {-1: 0.5, 1: 0.5}
        expected_2 = {-2: 0.25, 0: 0.5, 2: 0.25}
        for expected, dist in ((expected_1, dists[1]), (expected_2, dists[2])):
            for x in topo.sites():
                target = expected.get(int(x), 0.0)
                assert abs(dist.probs[topo.index_of(int(x))] - target) < 1e-15


def test_criterion_9_invariant_suites():
    with criterion(9, "phase-offset, integer-y, reflection, involution, metric axioms"):
        topo = Line(8)
        # global phase offset leaves distributions unchanged
        base = WalkParams(CoinBias(math.pi / 3), Harmonic(1, 4), topo)
        shifted_phases = tuple(phase_at(Harmonic(1, 4), int(x)) + 1.3 for x in topo.sites())
        shifted = WalkParams(CoinBias(math.pi / 3), Table(shifted_phases, first_site=-8), topo)
        init = make_symmetric_initial(topo)
        for a, b in zip(pure_distributions(init, base, 8), pure_distributions(init, shifted, 8)):
            assert np.max(np.abs(a.probs - b.probs)) < 1e-12
        # integer y reduces to the standard walk
        for a, b in zip(
            symmetric_run(math.pi / 4, Harmonic(2, 1), 10, 10),
            symmetric_run(math.pi / 4, Zero(), 10, 10),
        ):
            assert np.max(np.abs(a.probs - b.probs)) < 1e-12
        # reflection symmetry of the zero-phase walk
        for dist in symmetric_run(math.pi / 3, Zero(), 9, 9):
            assert np.max(np.abs(dist.probs - dist.probs[::-1])) < 1e-12
        # the coin is an involution
        rng = np.random.default_rng(5)
        for theta in (0.0, 0.4, math.pi / 4, math.pi / 3, math.pi / 2):
            raw = rng.normal(size=(7, 2)) + 1j * rng.normal(size=(7, 2))
            raw /= np.sqrt(np.sum(np.abs(raw) ** 2))
            state = PureState(raw, Line(3))
            twice = apply_coin(apply_coin(state, CoinBias(theta)), CoinBias(theta))
            assert np.max(np.abs(twice.amplitudes - state.amplitudes)) < 1e-14
        # l1 is a metric on 100 random distribution triples
        for _ in range(100):
            p, q, r = (
                PositionDistribution(random_distribution(rng, 11), Line(5))
                for _ in range(3)
            )
            assert l1_distance(p, q) == l1_distance(q, p)
            assert l1_distance(p, p) <= 1e-12
            assert l1_distance(p, r) <= l1_distance(p, q) + l1_distance(q, r) + 1e-15


def test_criterion_10_reproducibility(tmp_path):
    with criterion(10, "byte-identical reruns; worker count cannot change results"):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            cmd_reproduce("fig2", output=str(out))
        names = sorted(p.name for p in out_a.iterdir())
        assert names == sorted(p.name for p in out_b.iterdir())
        for name in names:
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name
        shutil.rmtree(out_b)
        topo = Line(4)
        params = WalkParams(CoinBias(math.pi / 4), Harmonic(1, 4), topo)
        init = make_symmetric_initial(topo)
        reference = evolve_trajectories(init, params, 0.7, 4, 2000, seed=3, n_workers=1)
        for workers in (2, 5):
            other = evolve_trajectories(init, params, 0.7, 4, 2000, seed=3, n_workers=workers)
            for a, b in zip(reference.distributions, other.distributions):
                assert a.probs.tobytes() == b.probs.tobytes()
            assert reference.stderr.tobytes() == other.stderr.tobytes()
