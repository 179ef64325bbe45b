"""Round-based random subsystem sampling.

Each round visits every variable exactly once, in random order, handing
them out ``subsystem_size`` at a time.  A subsystem left incomplete at the
end of a round is topped up from the start of the next round (skipping
variables it already holds), so every variable is picked at least
``floor(n_subsystems * subsystem_size / n_vars)`` times.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ArgumentError, DimensionError, ParseError
from .ising import spin_config

__all__ = [
    "SamplingPlan",
    "sample_subsystems",
    "lift_solution",
    "lifted_matrix",
    "selection_counts",
    "plan_to_dict",
    "plan_from_dict",
    "save_plan",
    "load_plan",
]


@dataclass(frozen=True)
class SamplingPlan:
    n_vars: int
    subsystem_size: int
    selections: tuple
    seed: object = None

    def __post_init__(self):
        sels = tuple(tuple(int(i) for i in s) for s in self.selections)
        for s in sels:
            if len(s) != self.subsystem_size:
                raise ArgumentError("every selection must have subsystem_size entries")
            if len(set(s)) != len(s) or min(s) < 0 or max(s) >= self.n_vars:
                raise ArgumentError(f"selection {s} has repeated or out-of-range indices")
        object.__setattr__(self, "selections", sels)

    @property
    def n_subsystems(self):
        return len(self.selections)

    def counts(self):
        return selection_counts(self.selections, self.n_vars)


def _check_sizes(n_vars, subsystem_size, n_subsystems):
    if not 1 <= subsystem_size <= n_vars:
        raise ArgumentError(f"subsystem_size must lie in [1, {n_vars}], got {subsystem_size}")
    if n_subsystems < 1:
        raise ArgumentError("n_subsystems must be >= 1")
    if n_subsystems * subsystem_size < n_vars:
        raise ArgumentError(
            f"n_subsystems * subsystem_size = {n_subsystems * subsystem_size} "
            f"cannot cover {n_vars} variables"
        )


def sample_subsystems(n_vars, subsystem_size, n_subsystems, seed=None):
    """Draw ``n_subsystems`` index sets of size ``subsystem_size``.

    Sampling ignores the problem's coefficients; it depends only on the
    sizes and the seed.
    """
    _check_sizes(n_vars, subsystem_size, n_subsystems)
    rng = np.random.default_rng(seed)
    selections = []
    pool = []
    current = []
    while len(selections) < n_subsystems:
        if not pool:
            pool = rng.permutation(n_vars).tolist()
        held = set(current)
        rest = []
        for v in pool:
            if len(current) < subsystem_size and v not in held:
                current.append(v)
                held.add(v)
            else:
                rest.append(v)
        pool = rest
        if len(current) == subsystem_size:
            selections.append(tuple(current))
            current = []
    seed_doc = seed if isinstance(seed, (int, type(None))) else None
    return SamplingPlan(n_vars, subsystem_size, tuple(selections), seed_doc)


def selection_counts(selections, n_vars):
    flat = np.fromiter((i for s in selections for i in s), dtype=np.int64)
    return np.bincount(flat, minlength=n_vars)


def lift_solution(selection, sub_config, n_vars):
    """Embed a subsystem solution into the full index space, 0 where unselected."""
    sel = np.asarray(selection, dtype=np.int64)
    s = np.asarray(sub_config)
    if s.shape != sel.shape:
        raise DimensionError(f"sub-configuration length {s.size} != selection length {sel.size}")
    s = spin_config(s)
    out = np.zeros(n_vars, dtype=np.int8)
    out[sel] = s
    return out


def lifted_matrix(selections, sub_configs, n_vars):
    """Stack of lifted solutions, shape ``(n_subsystems, n_vars)``."""
    if len(selections) != len(sub_configs):
        raise DimensionError("one sub-configuration per selection required")
    L = np.zeros((len(selections), n_vars), dtype=np.int8)
    for k, (sel, sub) in enumerate(zip(selections, sub_configs)):
        L[k] = lift_solution(sel, sub, n_vars)
    return L


def plan_to_dict(plan):
    return {
        "n_vars": plan.n_vars,
        "subsystem_size": plan.subsystem_size,
        "selections": [list(s) for s in plan.selections],
        "seed": plan.seed,
    }


def plan_from_dict(doc):
    try:
        return SamplingPlan(
            int(doc["n_vars"]), int(doc["subsystem_size"]),
            tuple(tuple(s) for s in doc["selections"]), doc.get("seed"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed sampling plan: {exc}") from None


def save_plan(plan, path):
    Path(path).write_text(json.dumps(plan_to_dict(plan)))


def load_plan(path):
    return plan_from_dict(json.loads(Path(path).read_text()))
