"""Large-system sampling approximation (LSSA) for Ising and QUBO problems.

Solve many small subsystems of a large Ising problem, then tune a set of
combination weights, produced by a small variational circuit, so that the
sign of the weighted sum of subsystem solutions has low energy on the
full problem.

Typical use::

    from lssa import LssaConfig, generate_fully_connected, run_level1

    problem = generate_fully_connected(20, seed=1)
    result = run_level1(problem, LssaConfig(subsystem_size=10, seed=0))
"""

from .driver import (
    LssaConfig,
    LssaResult,
    approximation_ratio,
    attach_baseline,
    run,
    run_baseline,
    run_best_of,
    run_level1,
    run_level2,
)
from .errors import (
    ArgumentError,
    ConfigError,
    DataError,
    DimensionError,
    LssaError,
    ParseError,
    ReproducibilityError,
    SizeError,
    StageError,
    UndefinedRatioError,
)
from .ising import (
    IsingProblem,
    QuboProblem,
    energy,
    extract_subproblem,
    generate_3regular,
    generate_fully_connected,
    qubo_to_ising,
)
from .portfolio import PriceSeries, PortfolioSpec, build_portfolio_qubo, default_spec, simulate_stock_data
from .sampler import SamplingPlan, sample_subsystems
from .solvers import QaoaParams, SolveOutcome, TabuParams, brute_force_ground_state, qaoa_solve, solve, tabu_search
from .vqe import VqeConfig, VqeResult, optimize_amplitudes

__version__ = "0.1.0"

__all__ = [
    "LssaConfig", "LssaResult", "approximation_ratio", "attach_baseline", "run", "run_baseline",
    "run_best_of", "run_level1", "run_level2",
    "ArgumentError", "ConfigError", "DataError", "DimensionError", "LssaError", "ParseError",
    "ReproducibilityError", "SizeError", "StageError", "UndefinedRatioError",
    "IsingProblem", "QuboProblem", "energy", "extract_subproblem", "generate_3regular",
    "generate_fully_connected", "qubo_to_ising",
    "PriceSeries", "PortfolioSpec", "build_portfolio_qubo", "default_spec", "simulate_stock_data",
    "SamplingPlan", "sample_subsystems",
    "QaoaParams", "SolveOutcome", "TabuParams", "brute_force_ground_state", "qaoa_solve", "solve",
    "tabu_search",
    "VqeConfig", "VqeResult", "optimize_amplitudes",
]
