import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lssa.errors import ArgumentError, ConfigError, SizeError
from lssa.ising import IsingProblem, energy, generate_fully_connected
from lssa.solvers import (
    QaoaParams,
    TabuParams,
    brute_force_ground_state,
    qaoa_expectation,
    qaoa_solve,
    solve,
    tabu_search,
)


class TestBruteForce:
    def test_single_spin(self):
        out = brute_force_ground_state(IsingProblem(1, biases=[0.7]))
        assert out.config.tolist() == [-1] and out.energy == pytest.approx(-0.7)

    def test_ferromagnet_tie_break(self):
        out = brute_force_ground_state(IsingProblem(2, {(0, 1): -1.0}))
        assert out.config.tolist() == [-1, -1] and out.energy == -1.0

    def test_beats_random_configs(self):
        p = generate_fully_connected(10, seed=4)
        gs = brute_force_ground_state(p).energy
        rng = np.random.default_rng(0)
        assert all(gs <= energy(p, rng.choice([-1, 1], 10)) for _ in range(1000))

    def test_matches_exhaustive_oracle(self):
        p = generate_fully_connected(16, seed=2)
        out = brute_force_ground_state(p)
        # check a local-optimality certificate plus energy consistency
        for i in range(16):
            z = out.config.copy()
            z[i] = -z[i]
            assert energy(p, z) >= out.energy
        small = generate_fully_connected(9, seed=2)
        best = min(energy(small, np.array(c)) for c in itertools.product([-1, 1], repeat=9))
        assert brute_force_ground_state(small).energy == pytest.approx(best, abs=1e-12)

    def test_cap(self):
        with pytest.raises(SizeError):
            brute_force_ground_state(IsingProblem(27))
        with pytest.raises(SizeError):
            brute_force_ground_state(IsingProblem(5), cap=4)


class TestTabu:
    def test_single_spin(self):
        p = IsingProblem(1, biases=[-0.3])
        assert tabu_search(p, TabuParams(seed=0)).config.tolist() == [1]

    def test_exact_hit_rate(self):
        hits = 0
        for k in range(100):
            n = 6 + k % 11
            p = generate_fully_connected(n, seed=1000 + k)
            t = tabu_search(p, TabuParams(seed=k)).energy
            b = brute_force_ground_state(p).energy
            assert t >= b - 1e-9
            hits += abs(t - b) <= 1e-9
        assert hits >= 95

    def test_deterministic(self):
        p = generate_fully_connected(100, seed=0)
        a = tabu_search(p, TabuParams(seed=3))
        b = tabu_search(p, TabuParams(seed=3))
        np.testing.assert_array_equal(a.config, b.config)

    def test_reported_energy_consistent(self):
        p = generate_fully_connected(40, seed=1)
        out = tabu_search(p, TabuParams(seed=1))
        assert out.energy == pytest.approx(energy(p, out.config), abs=1e-9)

    def test_rejects_bad_params(self):
        with pytest.raises(ArgumentError):
            TabuParams(n_restarts=0)


class TestQaoa:
    def test_separable_field(self):
        p = IsingProblem(4, biases=[2.0, 2.0, 2.0, 2.0])
        out = qaoa_solve(p, QaoaParams(seed=0))
        assert out.config.tolist() == [-1, -1, -1, -1]

    def test_ferromagnet(self):
        out = qaoa_solve(IsingProblem(2, {(0, 1): -1.0}), QaoaParams(seed=1))
        assert out.config.tolist() in ([-1, -1], [1, 1])

    def test_zero_angles_give_offset(self):
        p = IsingProblem(4, generate_fully_connected(4, seed=0).couplings, generate_fully_connected(4, seed=0).biases, 1.25)
        assert qaoa_expectation(p, [0.0], [0.0]) == pytest.approx(1.25, abs=1e-12)
        noisy = qaoa_expectation(p, [0.0], [0.0], shots=8192, seed=0)
        assert abs(noisy - 1.25) < 0.1

    def test_never_below_optimum(self):
        for k in range(10):
            p = generate_fully_connected(6, seed=k)
            assert qaoa_solve(p, QaoaParams(seed=k, shots=256)).energy >= brute_force_ground_state(p).energy - 1e-9

    def test_more_shots_help(self):
        e_hi, e_lo = [], []
        for k in range(50):
            p = generate_fully_connected(5, seed=500 + k)
            e_hi.append(qaoa_solve(p, QaoaParams(seed=k, shots=8192)).energy)
            e_lo.append(qaoa_solve(p, QaoaParams(seed=k, shots=128)).energy)
        assert np.mean(e_hi) <= np.mean(e_lo)

    def test_deterministic(self):
        p = generate_fully_connected(7, seed=3)
        a, b = qaoa_solve(p, QaoaParams(seed=9)), qaoa_solve(p, QaoaParams(seed=9))
        np.testing.assert_array_equal(a.config, b.config)

    def test_width_cap(self):
        with pytest.raises(SizeError):
            qaoa_solve(IsingProblem(21))


class TestDispatch:
    def test_brute_identity(self):
        p = generate_fully_connected(3, seed=0)
        np.testing.assert_array_equal(solve(p, "brute").config, brute_force_ground_state(p).config)

    def test_tabu_deterministic(self):
        p = generate_fully_connected(12, seed=0)
        assert solve(p, "tabu", TabuParams(seed=1)).energy == solve(p, "tabu", TabuParams(seed=1)).energy

    def test_unknown(self):
        with pytest.raises(ConfigError):
            solve(IsingProblem(2), "annealer")

    def test_wrong_param_type(self):
        with pytest.raises(ConfigError):
            solve(IsingProblem(2), "tabu", QaoaParams())

    @settings(max_examples=15, deadline=None)
    @given(st.sampled_from(["brute", "tabu", "qaoa"]), st.integers(2, 8), st.integers(0, 1000))
    def test_energy_consistent_and_bounded(self, name, n, seed):
        p = generate_fully_connected(n, seed=seed)
        params = {"tabu": TabuParams(seed=seed), "qaoa": QaoaParams(seed=seed, shots=512)}.get(name)
        out = solve(p, name, params)
        assert out.energy == pytest.approx(energy(p, out.config), abs=1e-9)
        assert out.energy >= brute_force_ground_state(p).energy - 1e-9
