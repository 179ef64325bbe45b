"""Programmatic use of the experiment runner.

The same experiments are available from the shell, e.g.::

    lssa-bench ns-sweep --instances 20 --out results/ns
    lssa-bench replay results/ns
"""

from pathlib import Path

from lssa.bench import ExperimentConfig, emit_plot_data, replay, run_experiment, summarize

config = ExperimentConfig.from_dict(
    {"n_vars": [10], "subsystem_size": [5], "n_subsystems": [2, 4, 8, 12], "instances": 10, "seed": 3},
    kind="ns-sweep",
)
out = Path("results/demo-ns-sweep")
table = run_experiment(config, out=out)
for point in summarize(table)["points"]:
    print(f"N_s={point['N_s']:>3}  R_ar={point['mean_R_ar']:.3f} +- {point['stderr']:.3f}  (n={point['n']})")

paths = emit_plot_data(table, out=out)
print("plot data:", *map(str, paths))

# Any row can be re-run from the logged seeds.
row = table.rows[-1]
print("replayed energy:", replay(config, row).energy, "logged:", row.lssa_energy)
