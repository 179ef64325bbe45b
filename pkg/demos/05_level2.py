"""Nested (level-2) decomposition.

Each level-1 subsystem is itself solved by a level-1 run on smaller
pieces, so the circuit width stays small while the problem grows.
"""

import time

from lssa.driver import LssaConfig, attach_baseline, run, run_baseline
from lssa.ising import generate_fully_connected, qubo_to_ising
from lssa.portfolio import build_portfolio_qubo, default_spec, simulate_stock_data
from lssa.vqe import VqeConfig

# Random Ising, exact baseline: 20 spins -> 2 subsystems of 10 -> pieces of 5.
p = generate_fully_connected(20, seed=4)
inner = LssaConfig(subsystem_size=5, n_subsystems=8)
outer = LssaConfig(subsystem_size=10, n_subsystems=4, level=2, inner=inner, seed=1)
r = attach_baseline(run(p, outer), run_baseline(p))
print(f"random Ising N_p=20: level-2 R_ar = {r.approximation_ratio:.3f}")
print("inner runs:", [o.diagnostics["n_subsystems"] for o in r.outcomes], "subsystems each")

# Portfolio with 320 assets, QAOA at the bottom.  Two coefficient readouts:
# measurement probabilities (non-negative) and signed real amplitudes.
# With exact single cover the non-negative weights over-select assets.
spec = default_spec(simulate_stock_data(320, 30, seed=7))
problem = qubo_to_ising(build_portfolio_qubo(spec))
baseline = run_baseline(problem, "tabu", seed=5)
for mode in ("probability", "amplitude"):
    vqe = VqeConfig(coefficient_mode=mode)
    inner = LssaConfig(subsystem_size=5, n_subsystems=32, subsolver="qaoa", vqe=vqe)
    outer = LssaConfig(subsystem_size=160, n_subsystems="single_cover", level=2, inner=inner, vqe=vqe, seed=11)
    t0 = time.perf_counter()
    r = attach_baseline(run(problem, outer), baseline)
    held = int(((r.config + 1) // 2).sum())
    print(f"{mode:>11}: R_ar = {r.approximation_ratio:.6f}, {held} of 320 held (K = {spec.budget_k}), "
          f"{time.perf_counter() - t0:.1f}s")
