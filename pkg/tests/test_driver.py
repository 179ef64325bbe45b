import dataclasses
import json

import numpy as np
import pytest

from lssa.driver import (
    LssaConfig,
    approximation_ratio,
    attach_baseline,
    attempt_seed,
    classify_ratio,
    config_from_dict,
    config_to_dict,
    result_to_dict,
    run,
    run_baseline,
    run_best_of,
    run_level1,
    run_level2,
)
from lssa.errors import ArgumentError, ConfigError, StageError, UndefinedRatioError
from lssa.ising import IsingProblem, extract_subproblem, generate_fully_connected, qubo_to_ising
from lssa.portfolio import build_portfolio_qubo, default_spec, simulate_stock_data
from lssa.sampler import lifted_matrix
from lssa.seeding import child_seed
from lssa.solvers import TabuParams, brute_force_ground_state, solve
from lssa.vqe import VqeConfig, optimize_amplitudes


class TestConfig:
    @pytest.mark.parametrize("kw", [
        dict(subsystem_size=0), dict(subsystem_size=3, n_subsystems=0),
        dict(subsystem_size=3, n_subsystems="triple_cover"), dict(subsystem_size=3, subsolver="sa"),
        dict(subsystem_size=3, subsolver="tabu", subsolver_params={"seed": 1}),
        dict(subsystem_size=3, level=3), dict(subsystem_size=3, level=2), dict(subsystem_size=3, workers=0),
    ])
    def test_validation(self, kw):
        with pytest.raises(ConfigError):
            LssaConfig(**kw)

    def test_dict_round_trip(self):
        inner = LssaConfig(subsystem_size=3, n_subsystems=8, subsolver="qaoa", subsolver_params={"shots": 512})
        cfg = LssaConfig(subsystem_size=6, n_subsystems="single_cover", level=2, inner=inner, seed=5,
                         vqe=VqeConfig(shots=1024, seed=child_seed(3, 2)))
        doc = json.loads(json.dumps(config_to_dict(cfg)))
        back = config_from_dict(doc)
        assert config_to_dict(back) == doc
        assert dataclasses.replace(back, vqe=cfg.vqe) == cfg
        assert back.vqe.seed.entropy == 3 and back.vqe.seed.spawn_key == (2,)

    def test_bad_dict(self):
        with pytest.raises(ConfigError):
            config_from_dict({"n_subsystems": 3})


class TestLevel1:
    def test_degenerate_exact(self):
        for k in range(5):
            p = generate_fully_connected(8, seed=k)
            r = run_level1(p, LssaConfig(subsystem_size=8, n_subsystems=1, seed=k))
            assert r.energy == pytest.approx(brute_force_ground_state(p).energy, abs=1e-12)

    def test_auto_rules(self):
        p = generate_fully_connected(10, seed=0)
        assert run_level1(p, LssaConfig(subsystem_size=3, seed=0)).n_subsystems == 7
        r = run_level1(p, LssaConfig(subsystem_size=3, n_subsystems="single_cover", seed=0))
        assert r.n_subsystems == 4 and r.n_subsystems_rule == "single_cover"

    def test_matches_manual_pipeline(self):
        p = generate_fully_connected(9, seed=2)
        cfg = LssaConfig(subsystem_size=4, n_subsystems=5, seed=11)
        r = run_level1(p, cfg)
        subs = [brute_force_ground_state(extract_subproblem(p, s)).config for s in r.plan.selections]
        L = lifted_matrix(r.plan.selections, subs, 9)
        v = optimize_amplitudes(p, L, dataclasses.replace(cfg.vqe, seed=child_seed(11, 2)))
        assert v.best_energy == r.energy

    def test_deterministic_and_replayable(self):
        p = generate_fully_connected(12, seed=3)
        for sub in ("brute", "tabu", "qaoa"):
            cfg = LssaConfig(subsystem_size=5, subsolver=sub, vqe=VqeConfig(shots=512), seed=4)
            a, b = run(p, cfg), run(p, cfg)
            assert a.energy == b.energy and a.vqe.cost_trace == b.vqe.cost_trace
            np.testing.assert_array_equal(a.config, b.config)

    def test_unseeded_run_records_seed(self):
        p = generate_fully_connected(8, seed=0)
        a = run(p, LssaConfig(subsystem_size=4))
        b = run(p, LssaConfig(subsystem_size=4, seed=a.seed))
        assert a.energy == b.energy

    def test_subsystem_order_invariance(self):
        # solving subsystems in reverse (or in threads) must not change anything
        p = generate_fully_connected(14, seed=5)
        cfg = LssaConfig(subsystem_size=5, subsolver="tabu", seed=8)
        serial = run(p, cfg)
        threaded = run(p, dataclasses.replace(cfg, workers=4))
        assert serial.energy == threaded.energy
        rev = [solve(extract_subproblem(p, s), "tabu", TabuParams(seed=child_seed(8, 1, i)))
               for i, s in reversed(list(enumerate(serial.plan.selections)))][::-1]
        for a, b in zip(rev, serial.outcomes):
            np.testing.assert_array_equal(a.config, b.config)

    def test_ratio_bounded_by_exact(self):
        for k in range(10):
            p = generate_fully_connected(10, seed=k)
            r = run(p, LssaConfig(subsystem_size=4, seed=k))
            attach_baseline(r, run_baseline(p))
            assert r.approximation_ratio <= 1 + 1e-9

    def test_subsystem_larger_than_problem(self):
        with pytest.raises(ArgumentError):
            run(generate_fully_connected(4, seed=0), LssaConfig(subsystem_size=5))

    def test_stage_error_wraps_subsolver_failure(self):
        p = generate_fully_connected(30, seed=0)
        with pytest.raises(StageError, match=r"\[subsystem 0\]"):
            run(p, LssaConfig(subsystem_size=27, n_subsystems=2, seed=0))

    def test_timings(self):
        r = run(generate_fully_connected(8, seed=0), LssaConfig(subsystem_size=4, seed=0))
        assert set(r.timings) == {"t_sub", "t_vqe", "t_total"}
        assert r.timings["t_total"] >= r.timings["t_sub"]


class TestLevel2:
    def test_collapse_to_exact_inner(self):
        # inner run with one subsystem spanning the whole level-1 subsystem is an exact solve
        p = generate_fully_connected(12, seed=1)
        inner = LssaConfig(subsystem_size=6, n_subsystems=1)
        two = run_level2(p, LssaConfig(subsystem_size=6, n_subsystems=4, level=2, inner=inner, seed=3))
        one = run_level1(p, LssaConfig(subsystem_size=6, n_subsystems=4, seed=3))
        assert two.energy == one.energy
        for a, b in zip(two.outcomes, one.outcomes):
            np.testing.assert_array_equal(a.config, b.config)

    def test_never_beats_brute_force(self):
        for k in range(3):
            p = generate_fully_connected(14, seed=k)
            inner = LssaConfig(subsystem_size=3, n_subsystems=4)
            r = run(p, LssaConfig(subsystem_size=7, n_subsystems=4, level=2, inner=inner, seed=k))
            assert r.energy >= brute_force_ground_state(p).energy - 1e-9
            assert r.level == 2 and r.outcomes[0].solver_name == "lssa[brute]"

    def test_deterministic(self):
        p = generate_fully_connected(16, seed=2)
        inner = LssaConfig(subsystem_size=4, n_subsystems=4, subsolver="qaoa")
        cfg = LssaConfig(subsystem_size=8, n_subsystems=3, level=2, inner=inner, seed=1)
        assert run(p, cfg).energy == run(p, cfg).energy

    def test_inner_too_large(self):
        inner = LssaConfig(subsystem_size=9, n_subsystems=1)
        with pytest.raises(StageError):
            run(generate_fully_connected(12, seed=0),
                LssaConfig(subsystem_size=6, n_subsystems=2, level=2, inner=inner, seed=0))


class TestBestOf:
    def test_best_of_keeps_lowest(self):
        p = generate_fully_connected(12, seed=6)
        cfg = LssaConfig(subsystem_size=4, n_subsystems=4, seed=2)
        best = run_best_of(p, cfg, attempts=4)
        singles = [run(p, cfg.with_seed(attempt_seed(2, a))).energy for a in range(4)]
        assert best.energy == min(singles)
        assert best.timings["attempts"] == 4
        assert run_best_of(p, cfg, 1).energy == run(p, cfg).energy

    def test_attempt_zero_is_identity(self):
        assert attempt_seed(17, 0) == 17
        assert attempt_seed(17, 1) != attempt_seed(17, 2)

    def test_needs_attempt(self):
        with pytest.raises(ArgumentError):
            run_best_of(IsingProblem(2), LssaConfig(subsystem_size=1), 0)


class TestRatios:
    def test_examples(self):
        assert approximation_ratio(-3.0, -3.0) == 1.0
        assert approximation_ratio(-6.8, -10.0) == pytest.approx(0.68)
        assert approximation_ratio(-10.1, -10.0) == pytest.approx(1.01)
        assert classify_ratio(-10.1, -10.0) == "superior"
        assert classify_ratio(-6.8, -10.0) == "ok"
        assert classify_ratio(1.0, -10.0) == "non-comparable"

    def test_zero_baseline(self):
        with pytest.raises(UndefinedRatioError):
            approximation_ratio(-1.0, 0.0)

    def test_baseline_regimes(self):
        small = generate_fully_connected(16, seed=0)
        assert run_baseline(small).solver_name == "brute"
        assert run_baseline(small).energy == brute_force_ground_state(small).energy
        big = generate_fully_connected(100, seed=0)
        a, b = run_baseline(big, seed=3), run_baseline(big, seed=3)
        assert a.solver_name == "tabu" and a.energy == b.energy
        assert run_baseline(generate_fully_connected(8, seed=0), cap=7).solver_name == "tabu"

    def test_offset_handling(self):
        p = qubo_to_ising(build_portfolio_qubo(default_spec(simulate_stock_data(8, 30, seed=0))))
        r = run(p, LssaConfig(subsystem_size=4, seed=0))
        b = run_baseline(p)
        ham = attach_baseline(r, b).approximation_ratio
        assert ham == pytest.approx((r.energy - p.offset) / (b.energy - p.offset))
        full = attach_baseline(r, b, include_offset=True).approximation_ratio
        assert full == pytest.approx(r.energy / b.energy)

    def test_result_dict_is_json(self):
        p = generate_fully_connected(8, seed=0)
        cfg = LssaConfig(subsystem_size=4, seed=0)
        r = attach_baseline(run(p, cfg), run_baseline(p))
        doc = json.loads(json.dumps(result_to_dict(r, cfg)))
        assert doc["energy"] == r.energy and doc["run_config"]["seed"] == 0
        assert len(doc["selections"]) == r.n_subsystems
