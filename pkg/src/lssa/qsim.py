"""Dense statevector simulator for small circuits.

Basis ordering is little-endian: qubit ``q`` is bit ``q`` of the basis
index.  For Ising-valued circuits bit ``b`` of qubit ``q`` encodes spin
``2b - 1`` of variable ``q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ArgumentError, DimensionError, SizeError
from .ising import energies

__all__ = [
    "MAX_QUBITS",
    "Statevector",
    "AnsatzSpec",
    "zero_state",
    "uniform_state",
    "apply_ry",
    "apply_rz",
    "apply_rx",
    "apply_cx",
    "ansatz_state",
    "basis_energies",
    "basis_spins",
    "apply_diagonal_phase",
    "apply_mixer",
    "probabilities",
    "sample_shots",
]

MAX_QUBITS = 20


@dataclass(frozen=True)
class Statevector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.shape != (1 << self.n_qubits,):
            raise DimensionError(f"expected {1 << self.n_qubits} amplitudes, got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    def norm(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class AnsatzSpec:
    """Hardware-efficient ansatz: rotation layer, then ``repetitions`` x (entangle, rotate).

    Each rotation layer applies R_y then R_z to every qubit.
    """

    n_qubits: int
    repetitions: int = 2
    entanglement: str = "full"

    def __post_init__(self):
        _check_width(self.n_qubits)
        if self.repetitions < 0:
            raise ArgumentError("repetitions must be non-negative")
        if self.entanglement not in ("full", "linear"):
            raise ArgumentError("entanglement must be 'full' or 'linear'")

    @property
    def n_parameters(self):
        return 2 * self.n_qubits * (self.repetitions + 1)


def _check_width(n):
    if not 1 <= n <= MAX_QUBITS:
        raise SizeError(f"n_qubits must lie in [1, {MAX_QUBITS}], got {n}")


def _check_qubit(state, q):
    if not 0 <= q < state.n_qubits:
        raise ArgumentError(f"qubit {q} out of range for {state.n_qubits} qubits")


def zero_state(n_qubits):
    _check_width(n_qubits)
    a = np.zeros(1 << n_qubits, dtype=complex)
    a[0] = 1.0
    return Statevector(n_qubits, a)


def uniform_state(n_qubits):
    _check_width(n_qubits)
    dim = 1 << n_qubits
    return Statevector(n_qubits, np.full(dim, 1.0 / np.sqrt(dim), dtype=complex))


# -- in-place kernels on raw arrays -------------------------------------------

def _apply_1q(amps, n, q, m):
    v = amps.reshape(1 << (n - q - 1), 2, 1 << q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
    v[:, 1, :] = m[1, 0] * a0 + m[1, 1] * a1


def _ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rx(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _rz_inplace(amps, n, q, theta):
    v = amps.reshape(1 << (n - q - 1), 2, 1 << q)
    v[:, 0, :] *= np.exp(-0.5j * theta)
    v[:, 1, :] *= np.exp(0.5j * theta)


@lru_cache(maxsize=256)
def _cx_perm(n, pairs):
    """Index permutation realising a sequence of CX gates."""
    idx = np.arange(1 << n)
    for c, t in pairs:
        idx = np.where((idx >> c) & 1, idx ^ (1 << t), idx)
    # new[j] = old[perm[j]], i.e. perm is the inverse of the basis map
    perm = np.empty_like(idx)
    perm[idx] = np.arange(1 << n)
    perm.setflags(write=False)
    return perm


def _entangler_pairs(n, kind):
    if kind == "full":
        return tuple((c, t) for c in range(n) for t in range(c + 1, n))
    return tuple((q, q + 1) for q in range(n - 1))


# -- public gate API ------------------------------------------------------------

def apply_ry(state, qubit, angle):
    _check_qubit(state, qubit)
    a = state.amplitudes.copy()
    _apply_1q(a, state.n_qubits, qubit, _ry(angle))
    return Statevector(state.n_qubits, a)


def apply_rx(state, qubit, angle):
    _check_qubit(state, qubit)
    a = state.amplitudes.copy()
    _apply_1q(a, state.n_qubits, qubit, _rx(angle))
    return Statevector(state.n_qubits, a)


def apply_rz(state, qubit, angle):
    _check_qubit(state, qubit)
    a = state.amplitudes.copy()
    _rz_inplace(a, state.n_qubits, qubit, angle)
    return Statevector(state.n_qubits, a)


def apply_cx(state, control, target):
    _check_qubit(state, control)
    _check_qubit(state, target)
    if control == target:
        raise ArgumentError("control and target must differ")
    perm = _cx_perm(state.n_qubits, ((control, target),))
    return Statevector(state.n_qubits, state.amplitudes[perm])


def _rotation_layer(amps, n, params):
    for q in range(n):
        _apply_1q(amps, n, q, _ry(params[2 * q]))
        _rz_inplace(amps, n, q, params[2 * q + 1])


def ansatz_amplitudes(spec, theta):
    """Raw amplitude array of :func:`ansatz_state` (no wrapper, for hot loops)."""
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size != spec.n_parameters:
        raise DimensionError(f"ansatz needs {spec.n_parameters} parameters, got {theta.size}")
    n = spec.n_qubits
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    width = 2 * n
    _rotation_layer(amps, n, theta[:width])
    if spec.repetitions:
        perm = _cx_perm(n, _entangler_pairs(n, spec.entanglement))
        for r in range(1, spec.repetitions + 1):
            amps = amps[perm]
            _rotation_layer(amps, n, theta[r * width:(r + 1) * width])
    return amps


def ansatz_state(spec, theta):
    return Statevector(spec.n_qubits, ansatz_amplitudes(spec, theta))


def basis_spins(n_qubits):
    """Spin configuration of each basis index, shape ``(2**n, n)``; column q is qubit q."""
    k = np.arange(1 << n_qubits, dtype=np.int64)
    bits = (k[:, None] >> np.arange(n_qubits)) & 1
    return (2 * bits - 1).astype(np.int8)


def basis_energies(problem):
    """Ising energy of every computational basis state."""
    _check_width(problem.n_vars)
    return energies(problem, basis_spins(problem.n_vars))


def apply_diagonal_phase(state, problem, gamma, diag=None):
    """Multiply each amplitude by ``exp(-i gamma E_k)``."""
    if problem.n_vars != state.n_qubits:
        raise DimensionError("problem size must equal the number of qubits")
    if diag is None:
        diag = basis_energies(problem)
    return Statevector(state.n_qubits, state.amplitudes * np.exp(-1j * gamma * diag))


def apply_mixer(state, beta):
    """R_x(2 beta) on every qubit."""
    a = state.amplitudes.copy()
    m = _rx(2.0 * beta)
    for q in range(state.n_qubits):
        _apply_1q(a, state.n_qubits, q, m)
    return Statevector(state.n_qubits, a)


def probabilities(state):
    a = state.amplitudes if isinstance(state, Statevector) else np.asarray(state)
    return np.abs(a) ** 2


def sample_shots(state, n_shots, seed=None):
    """Multinomial shot counts per basis index."""
    if n_shots < 1:
        raise ArgumentError("n_shots must be >= 1")
    p = probabilities(state)
    p = p / p.sum()
    return np.random.default_rng(seed).multinomial(int(n_shots), p)
