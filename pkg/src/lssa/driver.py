"""End-to-end sample / solve / recombine runs.

A level-1 run samples subsystems, solves each induced sub-Hamiltonian
with a pluggable solver, and tunes the subsystem weights against the full
Hamiltonian.  A level-2 run solves each level-1 subsystem with a nested
level-1 run instead of a direct solver.

Seeds are split into substreams by role so that subsystem ``i`` always
sees the same randomness, whatever order or thread it runs in::

    (seed, 0)       subsystem sampling
    (seed, 1, i)    solver for subsystem i
    (seed, 2)       amplitude optimisation
"""

from __future__ import annotations

import dataclasses
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, ConfigError, StageError, UndefinedRatioError
from .ising import energy, extract_subproblem
from .sampler import lifted_matrix, sample_subsystems
from .seeding import child_seed, resolve_seed
from .solvers import BRUTE_FORCE_CAP, SOLVERS, QaoaParams, SolveOutcome, TabuParams, solve
from .vqe import VqeConfig, optimize_amplitudes

__all__ = [
    "AUTO_RULES",
    "LssaConfig",
    "LssaResult",
    "resolve_n_subsystems",
    "run_level1",
    "run_level2",
    "run",
    "run_best_of",
    "attempt_seed",
    "approximation_ratio",
    "classify_ratio",
    "run_baseline",
    "attach_baseline",
    "config_to_dict",
    "config_from_dict",
    "result_to_dict",
    "result_to_json",
]

AUTO_RULES = {
    # ceil(2 N_p / N_g): random-Ising and portfolio sweeps
    "double_cover": lambda n_vars, size: math.ceil(2 * n_vars / size),
    # ceil(N_p / N_g): fixed-width sweeps and the level-2 outer stage
    "single_cover": lambda n_vars, size: math.ceil(n_vars / size),
}


@dataclass(frozen=True)
class LssaConfig:
    """Run settings.

    ``n_subsystems`` is an int or the name of a rule in :data:`AUTO_RULES`.
    ``subsolver_params`` holds keyword arguments for the solver's parameter
    type (seeds are derived per subsystem and must not be given).  For
    ``level=2`` the nested run is described by ``inner``.
    """

    subsystem_size: int
    n_subsystems: int | str = "double_cover"
    subsolver: str = "brute"
    subsolver_params: dict = field(default_factory=dict)
    vqe: VqeConfig = field(default_factory=VqeConfig)
    level: int = 1
    inner: "LssaConfig | None" = None
    seed: object = None
    workers: int = 1

    def __post_init__(self):
        if self.subsystem_size < 1:
            raise ConfigError("subsystem_size must be positive")
        if isinstance(self.n_subsystems, str):
            if self.n_subsystems not in AUTO_RULES:
                raise ConfigError(f"unknown n_subsystems rule {self.n_subsystems!r}; use one of {sorted(AUTO_RULES)}")
        elif self.n_subsystems < 1:
            raise ConfigError("n_subsystems must be positive")
        if self.subsolver not in SOLVERS:
            raise ConfigError(f"unknown subsolver {self.subsolver!r}; choose from {sorted(SOLVERS)}")
        if "seed" in self.subsolver_params:
            raise ConfigError("subsolver seeds are derived from the run seed")
        if self.level not in (1, 2):
            raise ConfigError("level must be 1 or 2")
        if self.level == 2 and self.inner is None:
            raise ConfigError("level-2 runs need an inner configuration")
        if self.workers < 1:
            raise ConfigError("workers must be positive")

    def with_seed(self, seed):
        return dataclasses.replace(self, seed=seed)


@dataclass
class LssaResult:
    config: np.ndarray
    energy: float
    offset: float
    n_subsystems: int
    n_subsystems_rule: str
    plan: object
    outcomes: list
    vqe: object
    timings: dict
    seed: object
    level: int = 1
    attempt: int = 0
    baseline_energy: float | None = None
    baseline_solver: str | None = None
    approximation_ratio: float | None = None
    ratio_flag: str | None = None

    @property
    def hamiltonian_energy(self):
        """Energy without the constant offset."""
        return self.energy - self.offset


def resolve_n_subsystems(config, n_vars):
    if isinstance(config.n_subsystems, str):
        return AUTO_RULES[config.n_subsystems](n_vars, config.subsystem_size), config.n_subsystems
    return int(config.n_subsystems), "explicit"


def _solver_params(config, seed):
    name = config.subsolver
    if name == "tabu":
        return TabuParams(seed=seed, **config.subsolver_params)
    if name == "qaoa":
        return QaoaParams(seed=seed, **config.subsolver_params)
    if config.subsolver_params:
        raise ConfigError("brute force takes no parameters")
    return None


def _solve_subsystems(problem, plan, seed, solve_one, workers):
    def task(i):
        sub = extract_subproblem(problem, plan.selections[i])
        try:
            return solve_one(sub, child_seed(seed, 1, i))
        except Exception as exc:  # noqa: BLE001 - re-raised with stage context
            raise StageError(f"subsystem {i}", exc) from exc

    idx = range(plan.n_subsystems)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(task, idx))
    return [task(i) for i in idx]


def _run(problem, config, solve_one, level):
    seed = resolve_seed(config.seed)
    n = problem.n_vars
    if config.subsystem_size > n:
        raise ArgumentError(f"subsystem_size {config.subsystem_size} exceeds problem size {n}")
    n_sub, rule = resolve_n_subsystems(config, n)
    plan = sample_subsystems(n, config.subsystem_size, n_sub, child_seed(seed, 0))

    t0 = time.perf_counter()
    outcomes = _solve_subsystems(problem, plan, seed, solve_one, config.workers)
    t1 = time.perf_counter()
    lifted = lifted_matrix(plan.selections, [o.config for o in outcomes], n)
    try:
        vres = optimize_amplitudes(problem, lifted, dataclasses.replace(config.vqe, seed=child_seed(seed, 2)))
    except Exception as exc:  # noqa: BLE001
        raise StageError("amplitude optimisation", exc) from exc
    t2 = time.perf_counter()
    return LssaResult(
        config=vres.best_config,
        energy=vres.best_energy,
        offset=problem.offset,
        n_subsystems=n_sub,
        n_subsystems_rule=rule,
        plan=plan,
        outcomes=outcomes,
        vqe=vres,
        timings={"t_sub": t1 - t0, "t_vqe": t2 - t1, "t_total": t2 - t0},
        seed=seed,
        level=level,
    )


def run_level1(problem, config):
    """Sample, solve each subsystem directly, then optimise the weights."""
    def solve_one(sub, seed):
        return solve(sub, config.subsolver, _solver_params(config, seed))

    return _run(problem, config, solve_one, level=1)


def run_level2(problem, config):
    """Like :func:`run_level1`, but each subsystem is itself solved by a nested level-1 run."""
    if config.inner is None:
        raise ConfigError("level-2 runs need an inner configuration")
    inner = dataclasses.replace(config.inner, level=1, inner=None)

    def solve_one(sub, seed):
        if inner.subsystem_size > sub.n_vars:
            raise ArgumentError("inner subsystem size exceeds the level-1 subsystem size")
        r = run_level1(sub, inner.with_seed(seed))
        return SolveOutcome(r.config, r.energy, f"lssa[{inner.subsolver}]",
                            {"n_subsystems": r.n_subsystems, "timings": r.timings})

    return _run(problem, config, solve_one, level=2)


def run(problem, config):
    return run_level2(problem, config) if config.level == 2 else run_level1(problem, config)


def attempt_seed(seed, attempt):
    """Seed for the ``attempt``-th retry; attempt 0 reuses ``seed`` unchanged."""
    if attempt == 0:
        return seed
    return int(child_seed(seed, 3, attempt).generate_state(1, np.uint64)[0] >> np.uint64(1))


def run_best_of(problem, config, attempts=1):
    """Best result (lowest energy) over ``attempts`` runs with distinct seeds."""
    if attempts < 1:
        raise ArgumentError("attempts must be >= 1")
    seed = resolve_seed(config.seed)
    best = None
    for a in range(attempts):
        r = run(problem, config.with_seed(attempt_seed(seed, a)))
        r.attempt = a
        if best is None or r.energy < best.energy:
            best = r
    best.timings = dict(best.timings, attempts=attempts)
    return best


def approximation_ratio(lssa_energy, baseline_energy):
    """``lssa_energy / baseline_energy``; may exceed 1 when the baseline is heuristic."""
    if baseline_energy == 0:
        raise UndefinedRatioError("approximation ratio undefined for a zero baseline energy")
    return float(lssa_energy) / float(baseline_energy)


def classify_ratio(lssa_energy, baseline_energy):
    """``"ok"``, ``"superior"`` (beats the baseline) or ``"non-comparable"`` (sign mismatch)."""
    if baseline_energy == 0 or lssa_energy * baseline_energy < 0:
        return "non-comparable"
    return "superior" if lssa_energy < baseline_energy else "ok"


def run_baseline(problem, solver_choice=None, params=None, cap=BRUTE_FORCE_CAP, seed=None):
    """Reference ground-state energy: brute force up to ``cap`` variables, tabu above."""
    if solver_choice is None:
        solver_choice = "brute" if problem.n_vars <= cap else "tabu"
    if params is None and solver_choice == "tabu":
        params = TabuParams(seed=seed)
    if params is None and solver_choice == "qaoa":
        params = QaoaParams(seed=seed)
    return solve(problem, solver_choice, params)


def attach_baseline(result, baseline, include_offset=False):
    """Fill the ratio fields of ``result`` from a baseline :class:`SolveOutcome`.

    By default both energies are taken without the problem's constant
    offset, i.e. as values of the Ising Hamiltonian itself.
    """
    shift = 0.0 if include_offset else result.offset
    lssa_e = result.energy - shift
    base_e = baseline.energy - shift
    result.baseline_energy = baseline.energy
    result.baseline_solver = baseline.solver_name
    result.approximation_ratio = approximation_ratio(lssa_e, base_e)
    result.ratio_flag = classify_ratio(lssa_e, base_e)
    return result


# -- serialisation --------------------------------------------------------------

def _seed_doc(seed):
    if seed is None or isinstance(seed, (int, np.integer)):
        return None if seed is None else int(seed)
    if isinstance(seed, np.random.SeedSequence):
        return {"entropy": int(seed.entropy), "spawn_key": list(seed.spawn_key)}
    raise ConfigError(f"unserialisable seed {seed!r}")


def _seed_from_doc(doc):
    if isinstance(doc, dict):
        return np.random.SeedSequence(doc["entropy"], spawn_key=tuple(doc["spawn_key"]))
    return doc


def config_to_dict(config):
    vqe = dataclasses.asdict(config.vqe)
    vqe["seed"] = _seed_doc(vqe["seed"])
    return {
        "subsystem_size": config.subsystem_size,
        "n_subsystems": config.n_subsystems,
        "subsolver": config.subsolver,
        "subsolver_params": dict(config.subsolver_params),
        "vqe": vqe,
        "level": config.level,
        "inner": None if config.inner is None else config_to_dict(config.inner),
        "seed": _seed_doc(config.seed),
        "workers": config.workers,
    }


def config_from_dict(doc):
    try:
        vqe = dict(doc.get("vqe") or {})
        if "seed" in vqe:
            vqe["seed"] = _seed_from_doc(vqe["seed"])
        return LssaConfig(
            subsystem_size=int(doc["subsystem_size"]),
            n_subsystems=doc.get("n_subsystems", "double_cover"),
            subsolver=doc.get("subsolver", "brute"),
            subsolver_params=dict(doc.get("subsolver_params") or {}),
            vqe=VqeConfig(**vqe),
            level=int(doc.get("level", 1)),
            inner=None if doc.get("inner") is None else config_from_dict(doc["inner"]),
            seed=_seed_from_doc(doc.get("seed")),
            workers=int(doc.get("workers", 1)),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"invalid LSSA configuration: {exc}") from None


def result_to_dict(result, config=None):
    doc = {
        "energy": result.energy,
        "hamiltonian_energy": result.hamiltonian_energy,
        "offset": result.offset,
        "config": [int(s) for s in result.config],
        "level": result.level,
        "attempt": result.attempt,
        "n_subsystems": result.n_subsystems,
        "n_subsystems_rule": result.n_subsystems_rule,
        "selections": [list(s) for s in result.plan.selections],
        "subsystem_energies": [o.energy for o in result.outcomes],
        "vqe_evaluations": result.vqe.evaluations,
        "cost_trace": list(result.vqe.cost_trace),
        "timings": result.timings,
        "seed": _seed_doc(result.seed),
        "baseline_energy": result.baseline_energy,
        "baseline_solver": result.baseline_solver,
        "approximation_ratio": result.approximation_ratio,
        "ratio_flag": result.ratio_flag,
    }
    if config is not None:
        doc["run_config"] = config_to_dict(config)
    return doc


def result_to_json(result, config=None):
    return json.dumps(result_to_dict(result, config))
