"""Stretch run: level-2 portfolio with 5120 assets.

Not part of the test suite; expect a long runtime (hours on one core,
dominated by the tabu baseline and the 5120-variable energy evaluations).

    python demos/07_level2_5120_stretch.py
"""

import time

from lssa.driver import LssaConfig, attach_baseline, run_baseline, run_best_of
from lssa.ising import qubo_to_ising
from lssa.portfolio import build_portfolio_qubo, default_spec, simulate_stock_data
from lssa.vqe import VqeConfig

N = 5120
t0 = time.perf_counter()
problem = qubo_to_ising(build_portfolio_qubo(default_spec(simulate_stock_data(N, 30, seed=7))))
print(f"built {N}-variable problem in {time.perf_counter() - t0:.1f}s")

vqe = VqeConfig(shots=8192)
inner = LssaConfig(subsystem_size=5, n_subsystems=32, subsolver="qaoa", vqe=vqe)
outer = LssaConfig(subsystem_size=160, n_subsystems="single_cover", level=2, inner=inner, vqe=vqe, seed=11)
result = run_best_of(problem, outer, attempts=3)
print(f"LSSA finished after {time.perf_counter() - t0:.1f}s; N_s = {result.n_subsystems}")

baseline = run_baseline(problem, "tabu", seed=5)
attach_baseline(result, baseline)
print(f"R_ar vs tabu = {result.approximation_ratio:.6f}")
