"""Configuration-driven experiment runner and command-line entry point.

An experiment is a grid of (N_p, N_g, N_s, VQE variant) points.  For each
point every problem instance is solved ``attempts`` times with distinct
seeds, the lowest-energy attempt is kept, and ratios against a baseline
solver are aggregated into per-point means and standard errors.

Every row records the integer seeds it was produced from, so any row can
be re-executed with :func:`replay` and checked against the logged energy.

Output files written by :func:`run_experiment` into ``out``::

    config.json    fully resolved experiment configuration
    rows.csv       one row per (grid point, instance, attempt)
    summary.json   per-grid-point mean / stderr / n over best attempts
    traces.csv     amplitude-optimisation cost trace of each best attempt
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .driver import (
    LssaConfig,
    approximation_ratio,
    attempt_seed,
    classify_ratio,
    config_from_dict,
    resolve_n_subsystems,
    run,
    run_baseline,
)
from .errors import ConfigError, LssaError, ReproducibilityError, StageError, UndefinedRatioError
from .ising import generate_3regular, generate_fully_connected, qubo_to_ising
from .portfolio import build_portfolio_qubo, default_spec, load_prices_csv, simulate_stock_data
from .seeding import child_seed
from .vqe import VqeConfig

__all__ = [
    "KINDS",
    "ExperimentConfig",
    "ResultRow",
    "ExperimentTable",
    "load_config",
    "build_problem",
    "run_experiment",
    "summarize",
    "emit_plot_data",
    "replay",
    "replay_bundle",
    "main",
]

KINDS = (
    "random-ising-sweep", "ns-sweep", "ng-sweep", "portfolio-sweep",
    "ansatz-ablation", "shots-ablation", "level2-portfolio", "single-run",
)
PROBLEMS = ("fully_connected", "three_regular", "portfolio")
BASELINES = ("exact", "tabu", "auto")
REPLAY_TOLERANCE = 1e-9

_DEFAULTS = {
    "random-ising-sweep": dict(n_vars=[8, 10, 12, 14, 16, 18, 20], subsystem_size=["half"],
                               n_subsystems=["double_cover"], instances=100, baseline="exact"),
    "ns-sweep": dict(n_vars=[10], subsystem_size=[5], n_subsystems=[2, 4, 6, 8, 10, 12, 16, 20],
                     instances=100, baseline="exact"),
    "ng-sweep": dict(n_vars=[20], subsystem_size=[5, 8, 12, 16, 20], n_subsystems=[4],
                     instances=100, baseline="exact"),
    "portfolio-sweep": dict(problem="portfolio", n_vars=[8, 16, 32, 64], subsystem_size=[5],
                            n_subsystems=["double_cover"], subsolver="qaoa", attempts=3,
                            vqe={"shots": 8192}, baseline="tabu", portfolio={"data_seed": 7}),
    "ansatz-ablation": dict(n_vars=[10], subsystem_size=[5], n_subsystems=[12], instances=20,
                            variants=[{"repetitions": 1, "entanglement": "linear"},
                                      {"repetitions": 2, "entanglement": "linear"},
                                      {"repetitions": 1, "entanglement": "full"},
                                      {"repetitions": 2, "entanglement": "full"},
                                      {"repetitions": 3, "entanglement": "full"}]),
    "shots-ablation": dict(n_vars=[10], subsystem_size=[5], n_subsystems=[12], instances=20,
                           variants=[{"shots": 128}, {"shots": 1024}, {"shots": 8192}, {"shots": None}]),
    "level2-portfolio": dict(problem="portfolio", n_vars=[320], subsystem_size=[160],
                             n_subsystems=["single_cover"], level=2, attempts=3, baseline="tabu",
                             inner={"subsystem_size": 5, "n_subsystems": 32, "subsolver": "qaoa"},
                             portfolio={"data_seed": 7}),
    "single-run": dict(n_vars=[12], subsystem_size=[6], n_subsystems=["double_cover"]),
}

_PLOT_KEYS = {
    "random-ising-sweep": ("N_p",),
    "ns-sweep": ("N_s",),
    "ng-sweep": ("N_g",),
    "portfolio-sweep": ("N_p",),
    "ansatz-ablation": ("variant",),
    "shots-ablation": ("variant",),
    "level2-portfolio": ("N_p",),
    "single-run": ("N_p",),
}


@dataclass
class ExperimentConfig:
    """One experiment: a parameter grid plus solver, VQE and baseline settings.

    ``subsystem_size`` entries are ints or ``"half"`` (N_p // 2);
    ``n_subsystems`` entries are ints or a rule name (``"double_cover"``,
    ``"single_cover"``).  ``variants`` is a list of VQE overrides, one grid
    axis per entry.
    """

    kind: str
    n_vars: list
    subsystem_size: list
    n_subsystems: list
    instances: int = 1
    attempts: int = 1
    problem: str = "fully_connected"
    portfolio: dict = field(default_factory=dict)
    subsolver: str = "brute"
    subsolver_params: dict = field(default_factory=dict)
    vqe: dict = field(default_factory=dict)
    variants: list = field(default_factory=lambda: [{}])
    level: int = 1
    inner: dict | None = None
    baseline: str = "auto"
    baseline_seed: int | None = None
    include_offset: bool = False
    seed: int = 0
    workers: int = 1
    spot_check: float = 0.01

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"kind: unknown experiment kind {self.kind!r}; choose from {list(KINDS)}")
        for name in ("n_vars", "subsystem_size", "n_subsystems", "variants"):
            v = getattr(self, name)
            if not isinstance(v, list) or not v:
                raise ConfigError(f"{name}: grid must be a non-empty list")
        for n in self.n_vars:
            if not isinstance(n, int) or n < 2:
                raise ConfigError(f"n_vars: entries must be integers >= 2, got {n!r}")
        for g in self.subsystem_size:
            if not (g == "half" or (isinstance(g, int) and g >= 1)):
                raise ConfigError(f"subsystem_size: entries must be positive integers or 'half', got {g!r}")
        for s in self.n_subsystems:
            if not (isinstance(s, str) or (isinstance(s, int) and s >= 1)):
                raise ConfigError(f"n_subsystems: entries must be positive integers or rule names, got {s!r}")
        for name in ("instances", "attempts", "workers"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ConfigError(f"{name}: must be an integer >= 1, got {v!r}")
        if self.problem not in PROBLEMS:
            raise ConfigError(f"problem: must be one of {list(PROBLEMS)}, got {self.problem!r}")
        if self.baseline not in BASELINES:
            raise ConfigError(f"baseline: must be one of {list(BASELINES)}, got {self.baseline!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed: must be a non-negative integer, got {self.seed!r}")
        if not 0 <= self.spot_check <= 1:
            raise ConfigError("spot_check: must lie in [0, 1]")
        unknown = set(self.portfolio) - {"csv", "data_seed", "n_periods", "gamma", "rho", "budget_k"}
        if unknown:
            raise ConfigError(f"portfolio: unknown keys {sorted(unknown)}")
        # build every grid point once so bad solver/VQE settings fail up front
        for n in self.n_vars:
            for g in self.subsystem_size:
                for s in self.n_subsystems:
                    for v in range(len(self.variants)):
                        lcfg = self.lssa_config(n, g, s, v, seed=0)
                        count, _ = resolve_n_subsystems(lcfg, n)
                        if count * lcfg.subsystem_size < n:
                            raise ConfigError(f"grid point N_p={n} N_g={lcfg.subsystem_size} N_s={count} "
                                              "cannot cover every variable (need N_s * N_g >= N_p)")

    def resolve_size(self, n_vars, size):
        g = n_vars // 2 if size == "half" else size
        if g > n_vars:
            raise ConfigError(f"subsystem_size: {g} exceeds N_p={n_vars}")
        return g

    def lssa_config(self, n_vars, size, n_subsystems, variant, seed):
        try:
            vqe = VqeConfig(**{**self.vqe, **self.variants[variant]})
            inner = None if self.inner is None else config_from_dict(self.inner)
            return LssaConfig(
                subsystem_size=self.resolve_size(n_vars, size),
                n_subsystems=n_subsystems,
                subsolver=self.subsolver,
                subsolver_params=dict(self.subsolver_params),
                vqe=vqe,
                level=self.level,
                inner=inner,
                seed=seed,
            )
        except TypeError as exc:
            raise ConfigError(f"vqe: {exc}") from None

    def grid(self):
        """Grid points ``(n_vars, size, n_subsystems, variant)`` in output order."""
        return [(n, g, s, v) for n in self.n_vars for g in self.subsystem_size
                for s in self.n_subsystems for v in range(len(self.variants))]

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, doc, kind=None):
        """Merge ``doc`` over the defaults for its kind and validate."""
        if not isinstance(doc, dict):
            raise ConfigError("config: top level must be a JSON object")
        kind = kind or doc.get("kind")
        if doc.get("kind", kind) != kind:
            raise ConfigError(f"kind: config says {doc['kind']!r} but {kind!r} was requested")
        if kind not in _DEFAULTS:
            raise ConfigError(f"kind: unknown experiment kind {kind!r}; choose from {list(KINDS)}")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - names
        if unknown:
            raise ConfigError(f"config: unknown keys {sorted(unknown)}")
        merged = {**_DEFAULTS[kind], **doc, "kind": kind}
        return cls(**merged)


def load_config(path, kind=None):
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return ExperimentConfig.from_dict(doc, kind)


@dataclass
class ResultRow:
    experiment: str
    N_p: int
    N_g: int
    N_s: int
    variant: int
    instance: int
    attempt: int
    problem_seed: int
    seed: int
    lssa_energy: float
    baseline_energy: float
    R_ar: float
    ratio_flag: str
    best: bool
    t_sub: float
    t_vqe: float
    t_total: float
    t_baseline: float
    solver: str
    vqe: str
    size_spec: object = None
    count_spec: object = None
    cost_trace: list = field(default_factory=list, repr=False)

    CSV_FIELDS = (
        "experiment", "N_p", "N_g", "N_s", "variant", "instance", "attempt", "problem_seed", "seed",
        "lssa_energy", "baseline_energy", "R_ar", "ratio_flag", "best",
        "t_sub", "t_vqe", "t_total", "t_baseline", "solver", "vqe", "size_spec", "count_spec",
    )

    def csv_values(self):
        out = []
        for name in self.CSV_FIELDS:
            v = getattr(self, name)
            out.append(repr(float(v)) if isinstance(v, float) else int(v) if isinstance(v, bool) else v)
        return out


@dataclass
class ExperimentTable:
    config: ExperimentConfig
    rows: list

    def best_rows(self):
        return [r for r in self.rows if r.best]


def _derive(seed, *keys):
    return int(child_seed(seed, *keys).generate_state(1, np.uint64)[0] >> np.uint64(1))


def build_problem(config, n_vars, instance):
    """The problem for ``(n_vars, instance)`` together with its integer seed."""
    if config.problem == "portfolio":
        pf = config.portfolio
        if pf.get("csv"):
            prices, pseed = load_prices_csv(pf["csv"]), 0
        else:
            base = pf.get("data_seed")
            pseed = _derive(config.seed, 0, 0, instance) if base is None else int(base) + instance
            prices = simulate_stock_data(max(config.n_vars), pf.get("n_periods", 30), seed=pseed)
        if n_vars > prices.n_assets:
            raise ConfigError(f"n_vars: {n_vars} exceeds the {prices.n_assets} assets available")
        spec = default_spec(prices.subset(n_vars), gamma=pf.get("gamma", 1.0),
                            rho=pf.get("rho"), budget_k=pf.get("budget_k"))
        return qubo_to_ising(build_portfolio_qubo(spec)), pseed
    pseed = _derive(config.seed, 0, n_vars, instance)
    gen = generate_3regular if config.problem == "three_regular" else generate_fully_connected
    return gen(n_vars, pseed), pseed


def _baseline(config, problem, n_vars, instance):
    solver = {"exact": "brute", "tabu": "tabu", "auto": None}[config.baseline]
    seed = config.baseline_seed if config.baseline_seed is not None else _derive(config.seed, 1, n_vars, instance)
    return run_baseline(problem, solver, seed=seed)


def _ratio(config, lssa_e, base_e, offset):
    shift = 0.0 if config.include_offset else offset
    a, b = lssa_e - shift, base_e - shift
    try:
        return approximation_ratio(a, b), classify_ratio(a, b)
    except UndefinedRatioError:
        return math.nan, "non-comparable"


def _run_point(config, point_index, point, instance, problem, pseed, baseline, t_base):
    n, size, count, variant = point
    run_seed = _derive(config.seed, 2, point_index, instance)
    rows = []
    for a in range(config.attempts):
        seed = attempt_seed(run_seed, a)
        lcfg = config.lssa_config(n, size, count, variant, seed)
        try:
            res = run(problem, lcfg)
        except LssaError as exc:
            raise StageError(f"N_p={n} N_g={lcfg.subsystem_size} instance={instance} attempt={a}", exc) from exc
        r_ar, flag = _ratio(config, res.energy, baseline.energy, res.offset)
        v = lcfg.vqe
        rows.append(ResultRow(
            experiment=config.kind, N_p=n, N_g=lcfg.subsystem_size, N_s=res.n_subsystems,
            variant=variant, instance=instance, attempt=a, problem_seed=pseed, seed=seed,
            lssa_energy=float(res.energy), baseline_energy=float(baseline.energy), R_ar=r_ar,
            ratio_flag=flag, best=False, t_sub=res.timings["t_sub"], t_vqe=res.timings["t_vqe"],
            t_total=res.timings["t_total"], t_baseline=t_base,
            solver=config.subsolver if config.level == 1 else f"level2[{config.inner.get('subsolver', 'brute')}]",
            vqe=f"{v.optimizer}/p={v.repetitions}/{v.entanglement}/shots={v.shots}/{v.coefficient_mode}",
            size_spec=size, count_spec=count, cost_trace=list(res.vqe.cost_trace),
        ))
    best = min(range(len(rows)), key=lambda k: rows[k].lssa_energy)
    rows[best].best = True
    return rows


def run_experiment(config, out=None, verify=True):
    """Execute every (grid point, instance, attempt) and optionally write outputs.

    Problems and baselines are shared across grid points with the same
    N_p, so grid points are compared on identical instances.  A fraction
    ``config.spot_check`` of rows (at least one) is replayed afterwards.
    """
    problems = {}
    for n in config.n_vars:
        for i in range(config.instances):
            problem, pseed = build_problem(config, n, i)
            t0 = time.perf_counter()
            try:
                base = _baseline(config, problem, n, i)
            except LssaError as exc:
                raise StageError(f"baseline N_p={n} instance={i}", exc) from exc
            problems[n, i] = (problem, pseed, base, time.perf_counter() - t0)

    tasks = [(k, p, i) for k, p in enumerate(config.grid()) for i in range(config.instances)]

    def task(t):
        k, point, i = t
        problem, pseed, base, tb = problems[point[0], i]
        return _run_point(config, k, point, i, problem, pseed, base, tb)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(task, tasks))
    else:
        chunks = [task(t) for t in tasks]
    table = ExperimentTable(config, [r for c in chunks for r in c])

    if verify and config.spot_check > 0:
        spot_check(table)
    if out is not None:
        write_table(table, out)
    return table


def spot_check(table, fraction=None):
    """Replay a seeded random subset of rows; raises on any mismatch."""
    fraction = table.config.spot_check if fraction is None else fraction
    n = len(table.rows)
    k = min(n, max(1, math.ceil(fraction * n)))
    picks = np.random.default_rng(child_seed(table.config.seed, 4)).choice(n, size=k, replace=False)
    for j in sorted(picks):
        replay(table.config, table.rows[j])
    return k


def summarize(table):
    """Per-grid-point statistics over best-of-attempts rows."""
    groups = {}
    for r in table.best_rows():
        groups.setdefault((r.N_p, r.N_g, r.N_s, r.variant), []).append(r)
    points = []
    for (n, g, s, v), rows in groups.items():
        ratios = np.array([r.R_ar for r in rows], dtype=float)
        ok = ratios[np.isfinite(ratios)]
        stderr = float(np.std(ok, ddof=1) / np.sqrt(ok.size)) if ok.size > 1 else 0.0
        points.append({
            "N_p": n, "N_g": g, "N_s": s, "variant": v,
            "variant_settings": table.config.variants[v],
            "mean_R_ar": float(np.mean(ok)) if ok.size else math.nan,
            "stderr": stderr,
            "n": int(ok.size),
            "n_undefined": int(ratios.size - ok.size),
            "mean_lssa_energy": float(np.mean([r.lssa_energy for r in rows])),
            "mean_baseline_energy": float(np.mean([r.baseline_energy for r in rows])),
            "mean_t_total": float(np.mean([r.t_total for r in rows])),
        })
    return {"kind": table.config.kind, "seed": table.config.seed, "points": points}


def _checked_dir(out):
    out = Path(out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise StageError("write", exc) from exc
    return out


def write_table(table, out):
    out = _checked_dir(out)
    try:
        (out / "config.json").write_text(json.dumps(table.config.to_dict(), indent=2) + "\n")
        with (out / "rows.csv").open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(ResultRow.CSV_FIELDS)
            for r in table.rows:
                w.writerow(r.csv_values())
        (out / "summary.json").write_text(json.dumps(summarize(table), indent=2) + "\n")
        _write_traces(table.best_rows(), out / "traces.csv")
    except OSError as exc:
        raise StageError("write", exc) from exc


def _write_traces(rows, path):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["N_p", "N_g", "N_s", "variant", "instance", "iteration", "cost", "best_so_far",
                    "normalized_cost"])
        for r in rows:
            trace = np.asarray(r.cost_trace, dtype=float)
            if trace.size == 0:
                continue
            running = np.minimum.accumulate(trace)
            scale = abs(trace.min())
            for k, (c, b) in enumerate(zip(trace, running)):
                w.writerow([r.N_p, r.N_g, r.N_s, r.variant, r.instance, k, repr(float(c)), repr(float(b)),
                            repr(float(c / scale)) if scale else "nan"])


def emit_plot_data(table, kind=None, out=None):
    """Write ``plot_<kind>.csv`` (mean and stderr per grid point) and ``plot_traces.csv``.

    Returns the paths written.  Output depends only on the table, so
    repeated calls produce identical bytes.
    """
    kind = kind or table.config.kind
    if not table.rows:
        raise ConfigError("cannot emit plot data for an empty table")
    if kind not in _PLOT_KEYS:
        raise ConfigError(f"unknown plot kind {kind!r}")
    out = _checked_dir(out if out is not None else ".")
    keys = _PLOT_KEYS[kind]
    points = sorted(summarize(table)["points"], key=lambda p: tuple(p[k] for k in keys) + (p["N_p"], p["N_g"], p["N_s"]))
    main_path = out / f"plot_{kind}.csv"
    trace_path = out / "plot_traces.csv"
    try:
        with main_path.open("w", newline="") as fh:
            w = csv.writer(fh)
            extra = [c for c in ("N_p", "N_g", "N_s") if c not in keys]
            w.writerow(list(keys) + ["mean_R_ar", "stderr", "n"] + extra)
            for p in points:
                w.writerow([p[k] for k in keys] + [repr(p["mean_R_ar"]), repr(p["stderr"]), p["n"]]
                           + [p[c] for c in extra])
        _write_traces(table.best_rows(), trace_path)
    except OSError as exc:
        raise StageError("write", exc) from exc
    return main_path, trace_path


def replay(config, row, tolerance=REPLAY_TOLERANCE):
    """Re-run one logged row and check its energy; returns the fresh result."""
    problem, pseed = build_problem(config, row.N_p, row.instance)
    if pseed != row.problem_seed:
        raise ReproducibilityError(f"problem seed {pseed} does not match logged {row.problem_seed}")
    size = row.size_spec if row.size_spec is not None else row.N_g
    count = row.count_spec if row.count_spec is not None else row.N_s
    res = run(problem, config.lssa_config(row.N_p, size, count, row.variant, row.seed))
    if not abs(res.energy - row.lssa_energy) <= tolerance:
        raise ReproducibilityError(
            f"replay of N_p={row.N_p} N_g={row.N_g} N_s={row.N_s} instance={row.instance} "
            f"attempt={row.attempt} gave {res.energy!r}, logged {row.lssa_energy!r}"
        )
    return res


def _parse_spec(text):
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        return text


def read_rows(path):
    rows = []
    with Path(path).open(newline="") as fh:
        for rec in csv.DictReader(fh):
            try:
                rows.append(ResultRow(
                    experiment=rec["experiment"], N_p=int(rec["N_p"]), N_g=int(rec["N_g"]), N_s=int(rec["N_s"]),
                    variant=int(rec["variant"]), instance=int(rec["instance"]), attempt=int(rec["attempt"]),
                    problem_seed=int(rec["problem_seed"]), seed=int(rec["seed"]),
                    lssa_energy=float(rec["lssa_energy"]), baseline_energy=float(rec["baseline_energy"]),
                    R_ar=float(rec["R_ar"]), ratio_flag=rec["ratio_flag"], best=bool(int(rec["best"])),
                    t_sub=float(rec["t_sub"]), t_vqe=float(rec["t_vqe"]), t_total=float(rec["t_total"]),
                    t_baseline=float(rec["t_baseline"]), solver=rec["solver"], vqe=rec["vqe"],
                    size_spec=_parse_spec(rec["size_spec"]), count_spec=_parse_spec(rec["count_spec"]),
                ))
            except (KeyError, ValueError) as exc:
                raise ConfigError(f"{path}: malformed row {len(rows) + 1}: {exc}") from None
    return rows


def replay_bundle(bundle):
    """Replay from ``{"config": <experiment config dict>, "row": <row dict>}``."""
    try:
        config = ExperimentConfig.from_dict(bundle["config"])
        row = ResultRow(**bundle["row"])
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed replay bundle: {exc}") from None
    return replay(config, row)


# -- command line -------------------------------------------------------------------

def _parser():
    p = argparse.ArgumentParser(prog="lssa-bench", description="Run LSSA benchmark experiments.")
    sub = p.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        s = sub.add_parser(kind, help=f"run a {kind} experiment")
        s.add_argument("--config", type=Path, help="JSON experiment configuration")
        s.add_argument("--out", type=Path, default=Path("results") / kind, help="output directory")
        s.add_argument("--seed", type=int, help="global seed (overrides the config)")
        s.add_argument("--workers", type=int, help="parallel runs")
        s.add_argument("--attempts", type=int, help="attempts per instance (best is kept)")
        s.add_argument("--instances", type=int, help="problem instances per grid point")
        s.add_argument("--no-plot", action="store_true", help="skip plot CSVs")
    r = sub.add_parser("replay", help="re-run a logged row and verify its energy")
    r.add_argument("run_dir", type=Path, help="directory written by a previous run")
    r.add_argument("--row", type=int, default=None, help="row index (default: all rows)")
    return p


def _cli_config(args):
    doc = json.loads(args.config.read_text()) if args.config else {}
    for name in ("seed", "workers", "attempts", "instances"):
        v = getattr(args, name)
        if v is not None:
            doc[name] = v
    return ExperimentConfig.from_dict(doc, args.command)


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command == "replay":
            try:
                config = ExperimentConfig.from_dict(json.loads((args.run_dir / "config.json").read_text()))
                rows = read_rows(args.run_dir / "rows.csv")
            except (OSError, ValueError) as exc:
                raise StageError("replay", exc) from exc
            picks = range(len(rows)) if args.row is None else [args.row]
            for j in picks:
                try:
                    replay(config, rows[j])
                except (LssaError, IndexError) as exc:
                    raise StageError(f"replay row {j}", exc) from exc
            print(f"replayed {len(picks)} row(s): ok")
            return 0
        try:
            config = _cli_config(args)
        except (OSError, ValueError) as exc:
            raise StageError("config", exc) from exc
        table = run_experiment(config, out=args.out)
        if not args.no_plot:
            emit_plot_data(table, out=args.out)
        for p in summarize(table)["points"]:
            print(f"N_p={p['N_p']:>4} N_g={p['N_g']:>4} N_s={p['N_s']:>4} variant={p['variant']} "
                  f"R_ar={p['mean_R_ar']:.6f} +- {p['stderr']:.6f} (n={p['n']})")
        print(f"wrote {args.out}")
        return 0
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LssaError as exc:
        print(f"error: [run] {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
