"""Ising and QUBO problem representations.

An Ising problem is

    H(z) = offset + sum_{i<j} J_ij z_i z_j + sum_i h_i z_i,    z_i in {-1, +1}

with every unordered pair stored once under its canonical key ``(i, j)``,
``i < j``.  Couplings live in three parallel arrays (rows, cols, values)
sorted by key, so a 3-regular graph and a 5000-variable dense portfolio
share one representation.  ``problem.couplings`` gives the dict view.

QUBO problems use the same layout over binary ``x_i in {0, 1}``; the two
forms are related by ``z = 2x - 1``.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import ArgumentError, DimensionError, ParseError

__all__ = [
    "IsingProblem",
    "QuboProblem",
    "spin_config",
    "energy",
    "energies",
    "qubo_energy",
    "qubo_to_ising",
    "generate_fully_connected",
    "generate_3regular",
    "extract_subproblem",
    "enumerate_configs",
    "problem_to_dict",
    "problem_from_dict",
    "save_problem",
    "load_problem",
]


def _canonical_terms(n_vars, pairs, what):
    """Normalise a pair specification into sorted (rows, cols, values)."""
    if pairs is None:
        rows = cols = np.zeros(0, dtype=np.int64)
        vals = np.zeros(0)
    elif isinstance(pairs, Mapping):
        keys = list(pairs.keys())
        rows = np.array([int(k[0]) for k in keys], dtype=np.int64)
        cols = np.array([int(k[1]) for k in keys], dtype=np.int64)
        vals = np.array([float(pairs[k]) for k in keys], dtype=float)
    else:
        r, c, v = pairs
        rows = np.asarray(r, dtype=np.int64).ravel()
        cols = np.asarray(c, dtype=np.int64).ravel()
        vals = np.asarray(v, dtype=float).ravel()
        if not (len(rows) == len(cols) == len(vals)):
            raise DimensionError(f"{what}: rows/cols/values lengths differ")
    if len(rows):
        if rows.min() < 0 or cols.max() >= n_vars:
            raise ArgumentError(f"{what}: index out of range [0, {n_vars})")
        if np.any(rows >= cols):
            bad = int(np.argmax(rows >= cols))
            raise ArgumentError(
                f"{what}: non-canonical pair ({rows[bad]}, {cols[bad]}); keys must satisfy i < j"
            )
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        dup = (np.diff(rows) == 0) & (np.diff(cols) == 0)
        if np.any(dup):
            k = int(np.argmax(dup))
            raise ArgumentError(f"{what}: duplicate pair ({rows[k]}, {cols[k]})")
    if not np.all(np.isfinite(vals)):
        raise ArgumentError(f"{what}: non-finite coefficient")
    for a in (rows, cols, vals):
        a.setflags(write=False)
    return rows, cols, vals


class _QuadraticModel:
    """Shared storage for Ising and QUBO problems; immutable once built."""

    _pair_name = "pairs"

    def __init__(self, n_vars, pairs=None, linear=None, offset=0.0):
        n_vars = int(n_vars)
        if n_vars < 1:
            raise ArgumentError("n_vars must be positive")
        self.n_vars = n_vars
        self._rows, self._cols, self._vals = _canonical_terms(n_vars, pairs, self._pair_name)
        if linear is None:
            linear = np.zeros(n_vars)
        linear = np.array(linear, dtype=float).ravel()
        if linear.shape != (n_vars,):
            raise DimensionError(f"linear vector has length {linear.size}, expected {n_vars}")
        if not np.all(np.isfinite(linear)):
            raise ArgumentError("non-finite linear coefficient")
        linear.setflags(write=False)
        self._linear = linear
        self.offset = float(offset)

    @property
    def rows(self):
        return self._rows

    @property
    def cols(self):
        return self._cols

    @property
    def values(self):
        return self._vals

    @property
    def n_pairs(self):
        return len(self._vals)

    def _pair_dict(self):
        return {(int(i), int(j)): float(v) for i, j, v in zip(self._rows, self._cols, self._vals)}

    def upper_matrix(self):
        """Dense upper-triangular pair matrix (zero diagonal)."""
        m = np.zeros((self.n_vars, self.n_vars))
        m[self._rows, self._cols] = self._vals
        return m

    def symmetric_matrix(self):
        """Dense symmetric pair matrix with each value mirrored (zero diagonal)."""
        m = self.upper_matrix()
        return m + m.T

    def degrees(self):
        return np.bincount(np.concatenate([self._rows, self._cols]), minlength=self.n_vars)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (
            self.n_vars == other.n_vars
            and self.offset == other.offset
            and np.array_equal(self._rows, other._rows)
            and np.array_equal(self._cols, other._cols)
            and np.array_equal(self._vals, other._vals)
            and np.array_equal(self._linear, other._linear)
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"{type(self).__name__}(n_vars={self.n_vars}, n_pairs={self.n_pairs}, "
            f"offset={self.offset:g})"
        )


class IsingProblem(_QuadraticModel):
    """Ising Hamiltonian over spins in {-1, +1}.

    Parameters
    ----------
    n_vars : int
        Number of spins.
    couplings : mapping or (rows, cols, values), optional
        ``{(i, j): J_ij}`` with ``i < j``, or three parallel arrays.
    biases : array_like, optional
        Length-``n_vars`` field vector ``h``.
    offset : float
        Constant added to every energy.
    """

    _pair_name = "couplings"

    def __init__(self, n_vars, couplings=None, biases=None, offset=0.0):
        super().__init__(n_vars, couplings, biases, offset)

    @property
    def biases(self):
        return self._linear

    @cached_property
    def couplings(self):
        return self._pair_dict()

    def negated(self):
        return IsingProblem(
            self.n_vars, (self._rows, self._cols, -self._vals), -self._linear, -self.offset
        )

    def without_offset(self):
        return IsingProblem(self.n_vars, (self._rows, self._cols, self._vals), self._linear, 0.0)


class QuboProblem(_QuadraticModel):
    """QUBO objective ``offset + sum_{i<j} q_ij x_i x_j + sum_i q_i x_i`` over ``x in {0,1}``."""

    _pair_name = "quadratic"

    def __init__(self, n_vars, quadratic=None, linear=None, offset=0.0):
        super().__init__(n_vars, quadratic, linear, offset)

    @property
    def linear(self):
        return self._linear

    @cached_property
    def quadratic(self):
        return self._pair_dict()


def spin_config(values, n_vars=None):
    """Validate and return a spin configuration as an ``int8`` array of +-1."""
    z = np.asarray(values)
    if z.ndim != 1:
        raise DimensionError("spin configuration must be one-dimensional")
    if n_vars is not None and z.shape[0] != n_vars:
        raise DimensionError(f"configuration has length {z.shape[0]}, problem has {n_vars}")
    if not np.all((z == 1) | (z == -1)):
        raise ArgumentError("spin entries must be exactly -1 or +1")
    return z.astype(np.int8)


def energy(problem, config):
    """Energy of one configuration (spins for Ising, bits for QUBO via :func:`qubo_energy`)."""
    z = np.asarray(config)
    if z.ndim != 1 or z.shape[0] != problem.n_vars:
        raise DimensionError(
            f"configuration has shape {z.shape}, problem has {problem.n_vars} variables"
        )
    z = z.astype(float)
    pair = float(problem.values @ (z[problem.rows] * z[problem.cols])) if problem.n_pairs else 0.0
    return problem.offset + pair + float(problem.biases @ z)


def energies(problem, configs, upper=None):
    """Energies of a batch of configurations, one per row.

    ``upper`` may carry a precomputed :meth:`upper_matrix` when the same
    problem is evaluated repeatedly.
    """
    Z = np.asarray(configs, dtype=float)
    if Z.ndim != 2 or Z.shape[1] != problem.n_vars:
        raise DimensionError(f"configs must have shape (batch, {problem.n_vars})")
    out = problem.offset + Z @ problem._linear
    if problem.n_pairs:
        if upper is None and problem.n_pairs * 4 < problem.n_vars**2:
            out += (Z[:, problem.rows] * Z[:, problem.cols]) @ problem.values
        else:
            if upper is None:
                upper = problem.upper_matrix()
            out += np.einsum("bi,bi->b", Z @ upper, Z)
    return out


def qubo_energy(qubo, x):
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] != qubo.n_vars:
        raise DimensionError(f"assignment has shape {x.shape}, problem has {qubo.n_vars} variables")
    if not np.all((x == 0) | (x == 1)):
        raise ArgumentError("binary entries must be 0 or 1")
    x = x.astype(float)
    pair = float(qubo.values @ (x[qubo.rows] * x[qubo.cols])) if qubo.n_pairs else 0.0
    return qubo.offset + pair + float(qubo.linear @ x)


def qubo_to_ising(qubo):
    """Rewrite a QUBO in spin variables using ``x_i = (z_i + 1) / 2``.

    The returned problem has the same energy as the QUBO on every
    corresponding assignment.
    """
    q_lin, q_pair = qubo.linear, qubo.values
    h = q_lin / 2.0
    np.add.at(h, qubo.rows, q_pair / 4.0)
    np.add.at(h, qubo.cols, q_pair / 4.0)
    offset = qubo.offset + q_lin.sum() / 2.0 + q_pair.sum() / 4.0
    return IsingProblem(qubo.n_vars, (qubo.rows, qubo.cols, q_pair / 4.0), h, offset)


def _open_uniform(rng, size):
    """Uniform draws on the open interval (-1, 1)."""
    x = rng.uniform(-1.0, 1.0, size)
    bad = x == -1.0
    while np.any(bad):
        x[bad] = rng.uniform(-1.0, 1.0, int(bad.sum()))
        bad = x == -1.0
    return x


def generate_fully_connected(n_vars, seed=None):
    """Random complete-graph Ising problem with ``J_ij, h_i ~ U(-1, 1)``."""
    if n_vars < 2:
        raise ArgumentError("fully connected problems need n_vars >= 2")
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n_vars, k=1)
    J = _open_uniform(rng, len(rows))
    h = _open_uniform(rng, n_vars)
    return IsingProblem(n_vars, (rows, cols, J), h)


def _random_3regular_edges(n_vars, rng, max_tries=10_000):
    # configuration model: pair 3 stubs per vertex, reject loops/multi-edges
    stubs = np.repeat(np.arange(n_vars), 3)
    for _ in range(max_tries):
        perm = rng.permutation(stubs).reshape(-1, 2)
        a, b = perm.min(axis=1), perm.max(axis=1)
        if np.any(a == b):
            continue
        keys = a * n_vars + b
        if len(np.unique(keys)) == len(keys):
            return a, b
    raise RuntimeError("failed to draw a simple 3-regular graph")  # pragma: no cover


def generate_3regular(n_vars, seed=None):
    """Random Ising problem on a uniformly drawn simple 3-regular graph."""
    if n_vars < 4 or n_vars % 2:
        raise ArgumentError("3-regular graphs need an even n_vars >= 4")
    rng = np.random.default_rng(seed)
    rows, cols = _random_3regular_edges(n_vars, rng)
    J = _open_uniform(rng, len(rows))
    h = _open_uniform(rng, n_vars)
    return IsingProblem(n_vars, (rows, cols, J), h)


def extract_subproblem(problem, indices):
    """Induced sub-Hamiltonian on ``indices``, relabelled by position.

    Keeps the couplings with both endpoints selected and the selected
    biases; the offset is dropped.
    """
    idx = np.asarray(indices, dtype=np.int64).ravel()
    if idx.size == 0:
        raise ArgumentError("indices must be non-empty")
    if idx.min() < 0 or idx.max() >= problem.n_vars:
        raise ArgumentError(f"index out of range [0, {problem.n_vars})")
    if len(np.unique(idx)) != len(idx):
        raise ArgumentError("indices must be distinct")
    pos = np.full(problem.n_vars, -1, dtype=np.int64)
    pos[idx] = np.arange(len(idx))
    pr, pc = pos[problem.rows], pos[problem.cols]
    keep = (pr >= 0) & (pc >= 0)
    pr, pc = pr[keep], pc[keep]
    r, c = np.minimum(pr, pc), np.maximum(pr, pc)
    return IsingProblem(len(idx), (r, c, problem.values[keep]), problem.biases[idx], 0.0)


def enumerate_configs(n_vars, start=0, stop=None):
    """Spin configurations ``start..stop-1`` in lexicographic order (-1 before +1).

    Variable 0 is the most significant position, so row 0 is all -1.
    """
    if stop is None:
        stop = 1 << n_vars
    k = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n_vars - 1, -1, -1, dtype=np.int64)
    bits = (k[:, None] >> shifts) & 1
    return (2 * bits - 1).astype(np.int8)


def problem_to_dict(problem):
    return {
        "n_vars": problem.n_vars,
        "couplings": [[int(i), int(j), float(v)] for i, j, v in zip(problem.rows, problem.cols, problem.values)],
        "biases": [float(b) for b in problem.biases],
        "offset": problem.offset,
    }


def problem_from_dict(doc):
    """Build an :class:`IsingProblem` from its JSON document form."""
    try:
        n = int(doc["n_vars"])
        triples = doc.get("couplings", [])
        biases = doc.get("biases")
        offset = float(doc.get("offset", 0.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed problem document: {exc}") from None
    for k, t in enumerate(triples):
        if not isinstance(t, (list, tuple)) or len(t) != 3:
            raise ParseError(f"couplings[{k}]: expected [i, j, value]")
    rows = [int(t[0]) for t in triples]
    cols = [int(t[1]) for t in triples]
    vals = [float(t[2]) for t in triples]
    try:
        return IsingProblem(n, (rows, cols, vals), biases, offset)
    except (ArgumentError, DimensionError) as exc:
        raise ParseError(str(exc)) from None


def save_problem(problem, path):
    Path(path).write_text(json.dumps(problem_to_dict(problem)))


def load_problem(path):
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return problem_from_dict(doc)
