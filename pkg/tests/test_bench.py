import csv
import dataclasses
import json

import numpy as np
import pytest

from lssa.bench import (
    ExperimentConfig,
    build_problem,
    emit_plot_data,
    main,
    read_rows,
    replay,
    replay_bundle,
    run_experiment,
    spot_check,
    summarize,
    write_table,
)
from lssa.errors import ConfigError, ReproducibilityError, StageError
from lssa.portfolio import PriceSeries, save_prices_csv, simulate_stock_data


def small(kind="ns-sweep", **kw):
    base = dict(n_vars=[8], subsystem_size=[4], n_subsystems=[2, 4], instances=3, seed=1)
    base.update(kw)
    return ExperimentConfig.from_dict(base, kind)


@pytest.fixture(scope="module")
def table():
    return run_experiment(small(attempts=2))


class TestConfig:
    def test_defaults_per_kind(self):
        cfg = ExperimentConfig.from_dict({}, "portfolio-sweep")
        assert cfg.n_vars == [8, 16, 32, 64] and cfg.subsolver == "qaoa" and cfg.attempts == 3

    @pytest.mark.parametrize("doc, msg", [
        ({"n_vars": []}, "n_vars"),
        ({"instances": 0}, "instances"),
        ({"bogus": 1}, "unknown keys"),
        ({"subsystem_size": ["third"]}, "subsystem_size"),
        ({"n_subsystems": [1]}, "cannot cover"),
        ({"vqe": {"optimizer": "adam"}}, "optimizer"),
        ({"vqe": {"learning_rate": 0.1}}, "vqe"),
        ({"baseline": "guess"}, "baseline"),
        ({"kind": "ng-sweep"}, "kind"),
    ])
    def test_precise_errors(self, doc, msg):
        with pytest.raises(ConfigError, match=msg):
            ExperimentConfig.from_dict(doc, "ns-sweep")

    def test_round_trip(self):
        cfg = small()
        assert ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


class TestRun:
    def test_row_count_and_best(self, table):
        assert len(table.rows) == 2 * 3 * 2
        best = table.best_rows()
        assert len(best) == 2 * 3
        for b in best:
            mates = [r for r in table.rows if (r.N_s, r.instance) == (b.N_s, b.instance)]
            assert b.lssa_energy == min(r.lssa_energy for r in mates)

    def test_ratio_consistent(self, table):
        for r in table.rows:
            assert r.R_ar == pytest.approx(r.lssa_energy / r.baseline_energy)
            assert r.R_ar <= 1 + 1e-9

    def test_summary_means(self, table):
        for p in summarize(table)["points"]:
            vals = [r.R_ar for r in table.best_rows() if r.N_s == p["N_s"]]
            assert abs(p["mean_R_ar"] - sum(vals) / len(vals)) < 1e-12
            assert p["n"] == 3
            assert p["stderr"] == pytest.approx(np.std(vals, ddof=1) / np.sqrt(3))

    def test_instances_shared_across_points(self, table):
        by_inst = {}
        for r in table.rows:
            by_inst.setdefault(r.instance, set()).add(r.problem_seed)
        assert all(len(s) == 1 for s in by_inst.values())

    def test_deterministic(self, table):
        again = run_experiment(small(attempts=2))
        assert [r.lssa_energy for r in again.rows] == [r.lssa_energy for r in table.rows]

    def test_workers_do_not_change_results(self, table):
        par = run_experiment(dataclasses.replace(small(attempts=2), workers=3))
        assert [r.lssa_energy for r in par.rows] == [r.lssa_energy for r in table.rows]

    def test_portfolio_csv_source(self, tmp_path):
        s = simulate_stock_data(8, 30, seed=2)
        save_prices_csv(PriceSeries(s.prices, tuple(f"T{i}" for i in range(8))), tmp_path / "p.csv")
        cfg = ExperimentConfig.from_dict({"n_vars": [6], "subsystem_size": [3], "subsolver": "brute",
                                          "attempts": 1, "portfolio": {"csv": str(tmp_path / "p.csv")}},
                                         "portfolio-sweep")
        t = run_experiment(cfg)
        assert len(t.rows) == 1 and t.rows[0].R_ar > 0.9

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(StageError, match="write"):
            run_experiment(small(n_subsystems=[2], instances=1), out=blocker / "sub")


class TestOutputs:
    def test_files(self, table, tmp_path):
        write_table(table, tmp_path)
        assert {p.name for p in tmp_path.iterdir()} == {"config.json", "rows.csv", "summary.json", "traces.csv"}
        back = read_rows(tmp_path / "rows.csv")
        assert [r.lssa_energy for r in back] == [r.lssa_energy for r in table.rows]
        assert [r.seed for r in back] == [r.seed for r in table.rows]

    def test_plot_schema_and_determinism(self, table, tmp_path):
        main_path, trace_path = emit_plot_data(table, out=tmp_path)
        with main_path.open() as fh:
            header = next(csv.reader(fh))
        assert header[:4] == ["N_s", "mean_R_ar", "stderr", "n"]
        first = main_path.read_bytes(), trace_path.read_bytes()
        emit_plot_data(table, out=tmp_path)
        assert (main_path.read_bytes(), trace_path.read_bytes()) == first

    def test_trace_lengths(self, table, tmp_path):
        _, trace_path = emit_plot_data(table, out=tmp_path)
        with trace_path.open() as fh:
            rows = list(csv.DictReader(fh))
        for r in table.best_rows():
            n = sum(1 for t in rows if int(t["instance"]) == r.instance and int(t["N_s"]) == r.N_s)
            assert n == len(r.cost_trace)

    def test_empty_table(self, table):
        with pytest.raises(ConfigError):
            emit_plot_data(dataclasses.replace(table, rows=[]))


class TestReplay:
    def test_every_row_replays(self, table):
        for r in table.rows:
            assert replay(table.config, r).energy == r.lssa_energy

    def test_tampered_seed(self, table):
        bad = dataclasses.replace(table.rows[0], seed=table.rows[0].seed + 1)
        with pytest.raises(ReproducibilityError):
            replay(table.config, bad)

    def test_bundle(self, table):
        row = dataclasses.asdict(table.rows[3])
        bundle = json.loads(json.dumps({"config": table.config.to_dict(), "row": row}))
        assert replay_bundle(bundle).energy == table.rows[3].lssa_energy
        with pytest.raises(ConfigError):
            replay_bundle({"row": row})

    def test_level2_row(self):
        cfg = ExperimentConfig.from_dict({
            "n_vars": [12], "subsystem_size": [6], "instances": 1, "attempts": 1,
            "problem": "fully_connected", "baseline": "exact",
            "inner": {"subsystem_size": 3, "n_subsystems": 4, "subsolver": "qaoa"},
        }, "level2-portfolio")
        t = run_experiment(cfg)
        assert t.rows[0].solver == "level2[qaoa]"
        assert replay(cfg, t.rows[0]).level == 2

    def test_spot_check_count(self, table):
        assert spot_check(table) == 1
        assert spot_check(table, fraction=0.5) == 6

    def test_problem_rebuild(self, table):
        r = table.rows[0]
        assert build_problem(table.config, r.N_p, r.instance)[1] == r.problem_seed


class TestCli:
    def test_run_and_replay(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"n_vars": [8], "subsystem_size": [4], "n_subsystems": [2, 4]}))
        out = tmp_path / "out"
        assert main(["ns-sweep", "--config", str(cfg), "--out", str(out), "--seed", "3",
                     "--instances", "2", "--attempts", "2"]) == 0
        assert (out / "plot_ns-sweep.csv").exists()
        assert json.loads((out / "config.json").read_text())["seed"] == 3
        assert main(["replay", str(out)]) == 0
        assert "replayed 8 row(s): ok" in capsys.readouterr().out

    def test_bad_config_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text('{"n_vars": [}')
        assert main(["single-run", "--config", str(cfg), "--out", str(tmp_path)]) == 2
        assert "[config]" in capsys.readouterr().err

    def test_replay_mismatch_exit_code(self, tmp_path, capsys):
        out = tmp_path / "o"
        assert main(["single-run", "--out", str(out), "--seed", "1"]) == 0
        rows = (out / "rows.csv").read_text().splitlines()
        head, first = rows[0].split(","), rows[1].split(",")
        first[head.index("lssa_energy")] = "0.0"
        (out / "rows.csv").write_text("\n".join([rows[0], ",".join(first)]) + "\n")
        assert main(["replay", str(out), "--row", "0"]) == 2
        assert "ReproducibilityError" in capsys.readouterr().err
