"""Ising problems, QUBO conversion and exact ground states.

Run with ``python demos/01_ising_basics.py``.
"""

import numpy as np

from lssa.ising import (
    IsingProblem,
    QuboProblem,
    energy,
    extract_subproblem,
    generate_3regular,
    generate_fully_connected,
    qubo_energy,
    qubo_to_ising,
)
from lssa.solvers import TabuParams, brute_force_ground_state, tabu_search

# A hand-written three-spin problem.  Each unordered pair is stored once
# under (i, j) with i < j.
p = IsingProblem(3, {(0, 1): -1.0, (1, 2): 0.5}, biases=[0.2, 0.0, -0.3])
print(p)
print("E(+1,+1,-1) =", energy(p, [1, 1, -1]))

# Random benchmark problems: couplings and biases uniform in (-1, 1).
full = generate_fully_connected(12, seed=1)
reg = generate_3regular(12, seed=1)
print("fully connected pairs:", full.n_pairs, " 3-regular pairs:", reg.n_pairs)
print("3-regular degrees:", reg.degrees())

# QUBO -> Ising with z = 2x - 1.  Energies agree on every assignment.
q = QuboProblem(3, {(0, 1): 1.0, (0, 2): -2.0}, linear=[0.5, -1.0, 0.25], offset=1.0)
ising = qubo_to_ising(q)
for bits in np.ndindex(2, 2, 2):
    x = np.array(bits)
    assert np.isclose(qubo_energy(q, x), energy(ising, 2 * x - 1))
print("QUBO and Ising energies match on all 8 assignments")

# Exact ground state by enumeration, and the tabu heuristic for comparison.
gs = brute_force_ground_state(full)
tb = tabu_search(full, TabuParams(seed=0))
print(f"brute force: {gs.energy:.6f}   tabu: {tb.energy:.6f}")

# A subsystem keeps only the couplings inside the chosen indices, relabelled
# by position.
sub = extract_subproblem(full, [7, 2, 9])
print("subproblem couplings:", sub.couplings)
