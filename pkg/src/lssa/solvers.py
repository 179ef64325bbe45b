"""Ground-state solvers for Ising (sub)problems.

Three interchangeable solvers share one signature and return a
:class:`SolveOutcome`:

``brute``  exhaustive enumeration (exact; capped at 26 variables)
``tabu``   multi-start single-flip tabu search
``qaoa``   statevector QAOA with Nelder-Mead angle search and shot sampling
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from . import qsim
from .errors import ArgumentError, ConfigError, SizeError
from .ising import energies, energy, enumerate_configs
from .optimizers import nelder_mead
from .seeding import child_seed

__all__ = [
    "BRUTE_FORCE_CAP",
    "SolveOutcome",
    "TabuParams",
    "QaoaParams",
    "brute_force_ground_state",
    "tabu_search",
    "qaoa_expectation",
    "qaoa_state",
    "qaoa_solve",
    "solve",
    "SOLVERS",
]

BRUTE_FORCE_CAP = 26
_CHUNK = 1 << 15


@dataclass
class SolveOutcome:
    config: np.ndarray
    energy: float
    solver_name: str
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TabuParams:
    """Tabu settings; ``None`` entries are sized from the problem.

    ``max_sweeps_per_restart`` counts single-flip moves (default ``200 n``),
    ``tenure`` defaults to ``max(7, n // 4)``.
    """

    n_restarts: int = 8
    max_sweeps_per_restart: int | None = None
    tenure: int | None = None
    seed: object = None

    def __post_init__(self):
        for name in ("n_restarts", "max_sweeps_per_restart", "tenure"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ArgumentError(f"{name} must be positive")

    def resolved(self, n):
        moves = self.max_sweeps_per_restart or 200 * n
        tenure = self.tenure or max(7, n // 4)
        return self.n_restarts, moves, min(tenure, max(n - 1, 0))


@dataclass(frozen=True)
class QaoaParams:
    layers: int = 1
    optimizer_iterations: int = 5
    shots: int = 8192
    seed: object = None
    initial_angle: float = 0.1
    initial_step: float = 0.3

    def __post_init__(self):
        for name in ("layers", "optimizer_iterations", "shots"):
            if getattr(self, name) < 1:
                raise ArgumentError(f"{name} must be positive")


# -- brute force --------------------------------------------------------------

def brute_force_ground_state(problem, cap=BRUTE_FORCE_CAP):
    """Exact minimiser over all ``2**n`` spin configurations.

    Ties go to the lexicographically smallest configuration with -1 < +1.
    """
    n = problem.n_vars
    if n > cap:
        raise SizeError(f"brute force capped at {cap} variables, got {n}")
    upper = problem.upper_matrix()
    total = 1 << n
    best_e, best_k = np.inf, -1
    # chunks run in lexicographic order and argmin returns the first minimum,
    # so a strict comparison keeps the lexicographically smallest minimiser
    for start in range(0, total, _CHUNK):
        E = energies(problem, enumerate_configs(n, start, min(start + _CHUNK, total)), upper=upper)
        k = int(np.argmin(E))
        if E[k] < best_e:
            best_e, best_k = float(E[k]), start + k
    config = enumerate_configs(n, best_k, best_k + 1)[0]
    return SolveOutcome(config, energy(problem, config), "brute", {"evaluated": total})


# -- tabu ---------------------------------------------------------------------

@numba.njit(cache=True, nogil=True)
def _tabu_kernel(Jsym, h, starts, max_moves, tenure):
    n_restarts, n = starts.shape
    best_cfg = starts[0].copy()
    best_e = np.inf
    moves_done = 0
    for r in range(n_restarts):
        z = starts[r].astype(np.float64)
        field_ = h + Jsym @ z
        e = 0.5 * (z @ (Jsym @ z)) + h @ z
        tabu_until = np.zeros(n, dtype=np.int64)
        if e < best_e:
            best_e = e
            best_cfg[:] = starts[r]
        for it in range(max_moves):
            pick = -1
            pick_delta = np.inf
            for i in range(n):
                delta = -2.0 * z[i] * field_[i]
                if tabu_until[i] > it and not (e + delta < best_e - 1e-12):
                    continue
                if delta < pick_delta:
                    pick_delta = delta
                    pick = i
            if pick < 0:
                continue
            z[pick] = -z[pick]
            step = 2.0 * z[pick]
            for j in range(n):
                field_[j] += step * Jsym[j, pick]
            e += pick_delta
            tabu_until[pick] = it + tenure + 1
            moves_done += 1
            if e < best_e - 1e-12:
                best_e = e
                for j in range(n):
                    best_cfg[j] = np.int8(1) if z[j] > 0 else np.int8(-1)
    return best_cfg, moves_done


def tabu_search(problem, params=None):
    """Multi-start tabu search with best-improvement moves and aspiration.

    Each restart starts from a uniformly random configuration and performs
    a fixed number of single-spin flips, always taking the best non-tabu
    flip (even if uphill).  A flipped spin stays tabu for ``tenure`` moves
    unless flipping it would beat the best energy seen so far.
    """
    params = params or TabuParams()
    n = problem.n_vars
    n_restarts, moves, tenure = params.resolved(n)
    rng = np.random.default_rng(params.seed)
    starts = rng.choice(np.array([-1, 1], dtype=np.int8), size=(n_restarts, n))
    Jsym = problem.symmetric_matrix()
    cfg, moves_done = _tabu_kernel(Jsym, np.ascontiguousarray(problem.biases), starts, moves, tenure)
    return SolveOutcome(
        cfg, energy(problem, cfg), "tabu",
        {"restarts": n_restarts, "moves_per_restart": moves, "tenure": tenure, "moves": int(moves_done)},
    )


# -- QAOA ---------------------------------------------------------------------

def qaoa_state(problem, gammas, betas, diag=None):
    """Depth-p QAOA state from the uniform superposition."""
    if diag is None:
        diag = qsim.basis_energies(problem)
    state = qsim.uniform_state(problem.n_vars)
    for g, b in zip(gammas, betas):
        state = qsim.apply_diagonal_phase(state, problem, g, diag=diag)
        state = qsim.apply_mixer(state, b)
    return state


def qaoa_expectation(problem, gammas, betas, shots=None, seed=None, diag=None):
    """Energy expectation, exact (``shots=None``) or shot-estimated."""
    if diag is None:
        diag = qsim.basis_energies(problem)
    state = qaoa_state(problem, gammas, betas, diag)
    if shots is None:
        return float(qsim.probabilities(state) @ diag)
    counts = qsim.sample_shots(state, shots, seed)
    return float(counts @ diag) / shots


def qaoa_solve(problem, params=None):
    """Approximate ground state by simulated QAOA.

    Angles start at ``initial_angle`` and are tuned by Nelder-Mead on the
    shot-estimated energy.  The answer is the lowest-energy bitstring
    among the shots drawn at the best angles.
    """
    params = params or QaoaParams()
    n = problem.n_vars
    if n > qsim.MAX_QUBITS:
        raise SizeError(f"QAOA statevector capped at {qsim.MAX_QUBITS} qubits, got {n}")
    p = params.layers
    diag = qsim.basis_energies(problem)
    calls = [0]

    def cost(x):
        seed = child_seed(params.seed, 0, calls[0])
        calls[0] += 1
        return qaoa_expectation(problem, x[:p], x[p:], params.shots, seed, diag)

    x0 = np.full(2 * p, params.initial_angle)
    # each NM iteration uses at most n+2 evaluations, plus n+1 for the simplex
    budget = (2 * p + 1) + params.optimizer_iterations * (2 * p + 2)
    x_best, f_best = nelder_mead(cost, x0, budget, max_iter=params.optimizer_iterations,
                                 initial_step=params.initial_step)
    state = qaoa_state(problem, x_best[:p], x_best[p:], diag)
    counts = qsim.sample_shots(state, params.shots, child_seed(params.seed, 1))
    seen = np.flatnonzero(counts)
    k = int(seen[np.argmin(diag[seen])])
    config = qsim.basis_spins(n)[k]
    return SolveOutcome(
        config, energy(problem, config), "qaoa",
        {"shots": params.shots, "evaluations": calls[0], "gammas": x_best[:p].tolist(),
         "betas": x_best[p:].tolist(), "expectation": f_best, "distinct_samples": int(seen.size)},
    )


SOLVERS = {
    "brute": (brute_force_ground_state, None),
    "tabu": (tabu_search, TabuParams),
    "qaoa": (qaoa_solve, QaoaParams),
}


def solve(problem, solver_choice, params=None):
    """Dispatch to a solver by name."""
    try:
        fn, param_type = SOLVERS[solver_choice]
    except KeyError:
        raise ConfigError(f"unknown solver {solver_choice!r}; choose from {sorted(SOLVERS)}") from None
    if param_type is None:
        return fn(problem)
    if params is not None and not isinstance(params, param_type):
        raise ConfigError(f"solver {solver_choice!r} expects {param_type.__name__}")
    return fn(problem, params)

