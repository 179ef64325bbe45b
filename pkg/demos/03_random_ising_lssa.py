"""Level-1 runs on random fully connected Ising problems.

Shows the effect of the number of subsystems N_s at fixed subsystem size,
measured against the exact ground state.
"""

import numpy as np

from lssa.driver import LssaConfig, attach_baseline, run_baseline, run_level1
from lssa.ising import generate_fully_connected

N_P, N_G = 12, 6
problems = [generate_fully_connected(N_P, seed=100 + k) for k in range(20)]
baselines = [run_baseline(p) for p in problems]

for n_sub in (2, 4, 8, 16):
    ratios = []
    for k, (p, b) in enumerate(zip(problems, baselines)):
        r = run_level1(p, LssaConfig(subsystem_size=N_G, n_subsystems=n_sub, seed=k))
        ratios.append(attach_baseline(r, b).approximation_ratio)
    ratios = np.array(ratios)
    print(f"N_s={n_sub:>3}  mean R_ar = {ratios.mean():.3f} +- {ratios.std(ddof=1) / np.sqrt(len(ratios)):.3f}")

# One run in detail.
r = run_level1(problems[0], LssaConfig(subsystem_size=N_G, n_subsystems="double_cover", seed=0))
print("rule:", r.n_subsystems_rule, "-> N_s =", r.n_subsystems)
print("selections:", r.plan.selections)
print("subsystem energies:", [round(o.energy, 3) for o in r.outcomes])
print(f"VQE: {r.vqe.evaluations} evaluations, best energy {r.energy:.4f}")
print("timings:", {k: round(v, 4) for k, v in r.timings.items()})
