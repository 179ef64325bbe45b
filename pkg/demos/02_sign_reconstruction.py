"""How subsystem solutions are stitched together.

Four spins, four two-spin subsystems.  Each subsystem ground state is
lifted to the full index space (zeros where a spin was not selected), the
lifts are mixed with non-negative weights C, and the sign of the mixture is
the candidate full solution.
"""

import numpy as np

from lssa import qsim
from lssa.ising import energy, generate_fully_connected
from lssa.sampler import lift_solution
from lssa.vqe import VqeConfig, cost, sign_reconstruct, weighted_combination

selections = [(0, 1), (2, 3), (3, 0), (1, 2)]
sub_solutions = [(1, -1), (1, -1), (1, -1), (1, 1)]
L = np.array([lift_solution(s, z, 4) for s, z in zip(selections, sub_solutions)])
print("lifted solutions:\n", L)

# With C = (C1, C2, C3, C4) the mixture is
# [C1 - C3, -C1 + C4, C2 + C4, -C2 + C3].
C = np.array([0.48, 0.32, 0.12, 0.08])
swc = weighted_combination(L, C)
print("weighted combination:", swc)
print("sign:", sign_reconstruct(swc))

# Where do the weights come from?  A two-qubit circuit: C_i is the
# probability of basis state i.  A product of two R_y rotations with
# P(q0 = 0) = 0.6 and P(q1 = 0) = 0.8 yields exactly the C above.
cfg = VqeConfig(repetitions=0)
theta = np.array([2 * np.arccos(np.sqrt(0.6)), 0.0, 2 * np.arccos(np.sqrt(0.8)), 0.0])
print("circuit probabilities:", qsim.probabilities(qsim.ansatz_state(cfg.ansatz(4), theta)).round(3))

problem = generate_fully_connected(4, seed=2)
e, z, _ = cost(theta, problem, L, cfg)
print(f"cost(theta) = {e:.4f} = energy of {z.tolist()} = {energy(problem, z):.4f}")
