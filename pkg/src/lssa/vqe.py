"""Amplitude optimisation of subsystem solutions.

Given lifted subsystem solutions ``L`` (one row per subsystem, zeros off
the selection), a parameterised circuit produces weights ``C`` and the
candidate full solution is ``sign(C @ L)`` with ``sign(0) = +1``.  The
circuit parameters are tuned to minimise the full-problem energy of that
candidate.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import qsim
from .errors import ArgumentError, ConfigError, DimensionError
from .ising import energy
from .optimizers import cobyla, nelder_mead
from .seeding import child_seed, rng_for

__all__ = [
    "VqeConfig",
    "VqeResult",
    "n_qubits_for",
    "coefficients_from_state",
    "weighted_combination",
    "sign_reconstruct",
    "cost",
    "optimize_amplitudes",
    "write_cost_trace_csv",
]

_OPTIMIZERS = ("cobyla", "nelder_mead")


def n_qubits_for(n_subsystems):
    """Register width needed to index ``n_subsystems`` coefficients (at least 1)."""
    if n_subsystems < 1:
        raise ArgumentError("n_subsystems must be >= 1")
    return max(1, math.ceil(math.log2(n_subsystems)))


@dataclass(frozen=True)
class VqeConfig:
    """Settings for the amplitude-optimisation loop.

    ``shots=None`` uses exact probabilities.  ``coefficient_mode`` selects
    ``"probability"`` (|a_i|^2) or ``"amplitude"`` (Re a_i).
    """

    repetitions: int = 2
    entanglement: str = "full"
    optimizer: str = "cobyla"
    max_iterations: int = 200
    shots: int | None = None
    seed: object = None
    theta_init: str = "random"
    coefficient_mode: str = "probability"

    def __post_init__(self):
        if self.optimizer not in _OPTIMIZERS:
            raise ConfigError(f"optimizer must be one of {_OPTIMIZERS}")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be positive")
        if self.shots is not None and self.shots < 1:
            raise ConfigError("shots must be positive or None")
        if self.theta_init not in ("random", "zeros"):
            raise ConfigError("theta_init must be 'random' or 'zeros'")
        if self.coefficient_mode not in ("probability", "amplitude"):
            raise ConfigError("coefficient_mode must be 'probability' or 'amplitude'")

    def ansatz(self, n_subsystems):
        return qsim.AnsatzSpec(n_qubits_for(n_subsystems), self.repetitions, self.entanglement)


@dataclass
class VqeResult:
    best_theta: np.ndarray
    best_config: np.ndarray
    best_energy: float
    cost_trace: list = field(default_factory=list)
    evaluations: int = 0
    best_coefficients: np.ndarray | None = None

    @property
    def best_so_far(self):
        return np.minimum.accumulate(np.asarray(self.cost_trace))


def coefficients_from_state(state, n_subsystems, shots=None, seed=None, mode="probability"):
    """Subsystem weights read off the first ``n_subsystems`` basis states.

    Probability mass on unused basis states is dropped, not renormalised.
    """
    amps = state.amplitudes if isinstance(state, qsim.Statevector) else np.asarray(state)
    if amps.size < n_subsystems:
        raise DimensionError(f"{amps.size} basis states cannot index {n_subsystems} subsystems")
    if mode == "amplitude":
        return amps[:n_subsystems].real.copy()
    if shots is None:
        return (np.abs(amps[:n_subsystems]) ** 2)
    counts = qsim.sample_shots(qsim.Statevector(int(np.log2(amps.size)), amps), shots, seed)
    return counts[:n_subsystems] / shots


def weighted_combination(lifted, coefficients):
    """``sum_i C_i * lifted_i`` as a length-``n_vars`` vector."""
    L = np.asarray(lifted)
    C = np.asarray(coefficients, dtype=float).ravel()
    if L.ndim != 2 or L.shape[0] != C.size:
        raise DimensionError(f"{C.size} coefficients for {L.shape[0] if L.ndim == 2 else '?'} solutions")
    return C @ L


def sign_reconstruct(swc):
    return np.where(np.asarray(swc) >= 0, 1, -1).astype(np.int8)


def cost(theta, problem, lifted, config, eval_index=0, ansatz=None):
    """Full-problem energy of the configuration encoded by ``theta``.

    Returns ``(energy, config, coefficients)``.  With shots enabled the
    sampling seed is derived from ``(config.seed, eval_index)``.
    """
    n_sub = len(lifted)
    ansatz = ansatz or config.ansatz(n_sub)
    amps = qsim.ansatz_amplitudes(ansatz, theta)
    seed = child_seed(config.seed, 1, eval_index) if config.shots else None
    C = coefficients_from_state(amps, n_sub, config.shots, seed, config.coefficient_mode)
    z = sign_reconstruct(weighted_combination(lifted, C))
    return energy(problem, z), z, C


def optimize_amplitudes(problem, lifted, config=None):
    """Tune circuit parameters to minimise the reconstructed energy.

    The best point over every evaluation is returned, not just the
    optimiser's final iterate.
    """
    config = config or VqeConfig()
    lifted = np.asarray(lifted)
    if lifted.ndim != 2 or lifted.shape[1] != problem.n_vars:
        raise DimensionError(f"lifted solutions must have shape (n_subsystems, {problem.n_vars})")
    ansatz = config.ansatz(len(lifted))
    if config.theta_init == "zeros":
        theta0 = np.zeros(ansatz.n_parameters)
    else:
        theta0 = rng_for(config.seed, 0).uniform(-np.pi, np.pi, ansatz.n_parameters)

    trace = []
    best = {"e": np.inf}

    def f(theta):
        e, z, C = cost(theta, problem, lifted, config, len(trace), ansatz)
        trace.append(e)
        if e < best["e"]:
            best.update(e=e, z=z, C=C, theta=np.array(theta))
        return e

    if config.optimizer == "cobyla":
        cobyla(f, theta0, config.max_iterations)
    else:
        nelder_mead(f, theta0, config.max_iterations)
    return VqeResult(best["theta"], best["z"], best["e"], trace, len(trace), best["C"])


def write_cost_trace_csv(trace, path):
    """Write ``iteration, cost, best_so_far, normalized_cost`` rows."""
    trace = np.asarray(trace, dtype=float)
    running = np.minimum.accumulate(trace)
    scale = abs(trace.min()) if trace.size else 0.0
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "cost", "best_so_far", "normalized_cost"])
        for k, (c, b) in enumerate(zip(trace, running)):
            w.writerow([k, repr(float(c)), repr(float(b)), repr(float(c / scale)) if scale else "nan"])
