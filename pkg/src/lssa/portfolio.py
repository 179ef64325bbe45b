"""Mean-variance portfolio selection as a QUBO.

Binary weights ``w`` are scored by

    H(w) = -mu.w + (gamma / 2) w.Sigma.w + rho (sum(w) - K)^2

which :func:`build_portfolio_qubo` expands (with ``w_i^2 = w_i``) into a
:class:`~lssa.ising.QuboProblem`.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ArgumentError, DataError, DimensionError, ParseError, UndefinedRatioError
from .ising import QuboProblem

__all__ = [
    "PriceSeries",
    "PortfolioSpec",
    "estimate_mu_sigma",
    "build_portfolio_qubo",
    "portfolio_objective",
    "volatility",
    "sharpe_ratio",
    "simulate_stock_data",
    "random_portfolio_baseline",
    "load_prices_csv",
    "save_prices_csv",
    "default_spec",
]


@dataclass(frozen=True)
class PriceSeries:
    """Asset prices, one row per asset and one column per period."""

    prices: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        p = np.array(self.prices, dtype=float)
        if p.ndim != 2:
            raise DimensionError("prices must be a 2-D (assets x periods) matrix")
        if p.shape[0] < 1 or p.shape[1] < 2:
            raise DataError("need at least one asset and two periods")
        if not np.all(np.isfinite(p)) or np.any(p <= 0):
            raise DataError("all prices must be positive and finite")
        p.setflags(write=False)
        object.__setattr__(self, "prices", p)
        labels = tuple(self.labels) if self.labels else tuple(f"A{i}" for i in range(p.shape[0]))
        if len(labels) != p.shape[0]:
            raise DimensionError("one label per asset required")
        object.__setattr__(self, "labels", labels)

    @property
    def n_assets(self):
        return self.prices.shape[0]

    @property
    def n_periods(self):
        return self.prices.shape[1]

    def subset(self, n_assets):
        """First ``n_assets`` rows, used to grow instances from one dataset."""
        return PriceSeries(self.prices[:n_assets], self.labels[:n_assets])


@dataclass(frozen=True)
class PortfolioSpec:
    mu: np.ndarray
    sigma: np.ndarray
    budget_k: int
    gamma: float = 1.0
    rho: float = 1.0
    labels: tuple = field(default=())

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float).ravel()
        sigma = np.array(self.sigma, dtype=float)
        n = mu.size
        if sigma.shape != (n, n):
            raise ArgumentError(f"sigma has shape {sigma.shape}, expected ({n}, {n})")
        if np.max(np.abs(sigma - sigma.T), initial=0.0) > 1e-12:
            raise ArgumentError("sigma must be symmetric")
        if n and np.linalg.eigvalsh(sigma).min() < -1e-8:
            raise ArgumentError("sigma must be positive semidefinite")
        if not 0 < self.budget_k <= n:
            raise ArgumentError(f"budget_k must lie in (0, {n}]")
        if self.gamma < 0 or self.rho < 0:
            raise ArgumentError("gamma and rho must be non-negative")
        for a in (mu, sigma):
            a.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "budget_k", int(self.budget_k))

    @property
    def n_assets(self):
        return self.mu.size


def estimate_mu_sigma(prices):
    """Mean and sample covariance (ddof=1) of simple per-period returns."""
    if not isinstance(prices, PriceSeries):
        prices = PriceSeries(prices)
    p = prices.prices
    returns = p[:, 1:] / p[:, :-1] - 1.0
    mu = returns.mean(axis=1)
    if returns.shape[1] < 2:
        sigma = np.zeros((p.shape[0], p.shape[0]))
    else:
        sigma = np.atleast_2d(np.cov(returns, ddof=1))
    return mu, (sigma + sigma.T) / 2.0


def default_spec(prices, gamma=1.0, rho=None, budget_k=None):
    """Spec with the usual benchmark settings: ``rho = 10 n`` and ``K = n // 2``."""
    mu, sigma = estimate_mu_sigma(prices)
    n = mu.size
    labels = prices.labels if isinstance(prices, PriceSeries) else ()
    return PortfolioSpec(
        mu=mu,
        sigma=sigma,
        budget_k=max(1, n // 2) if budget_k is None else budget_k,
        gamma=gamma,
        rho=10.0 * n if rho is None else rho,
        labels=labels,
    )


def build_portfolio_qubo(spec):
    mu, sigma, g, rho, k = spec.mu, spec.sigma, spec.gamma, spec.rho, spec.budget_k
    n = mu.size
    linear = -mu + 0.5 * g * np.diag(sigma) + rho * (1.0 - 2.0 * k)
    rows, cols = np.triu_indices(n, k=1)
    quad = g * sigma[rows, cols] + 2.0 * rho
    return QuboProblem(n, (rows, cols, quad), linear, rho * k * k)


def portfolio_objective(spec, omega):
    """Direct evaluation of the portfolio Hamiltonian at a binary vector."""
    w = np.asarray(omega, dtype=float)
    return float(-spec.mu @ w + 0.5 * spec.gamma * w @ spec.sigma @ w + spec.rho * (w.sum() - spec.budget_k) ** 2)


def volatility(omega, sigma):
    w = np.asarray(omega, dtype=float)
    var = float(w @ np.asarray(sigma) @ w)
    return math.sqrt(max(var, 0.0))


def sharpe_ratio(omega, mu, sigma):
    vol = volatility(omega, sigma)
    if vol <= 0.0:
        raise UndefinedRatioError("Sharpe ratio undefined for zero volatility")
    return float(np.asarray(mu) @ np.asarray(omega, dtype=float)) / vol


def simulate_stock_data(n_assets, n_periods=30, seed=None):
    """Geometric random walk prices starting at 100.

    Each asset gets a drift drawn from U[-0.002, 0.004] and a per-step
    volatility from U[0.005, 0.03]; log-returns are normal with those
    parameters.
    """
    if n_assets < 1 or n_periods < 2:
        raise ArgumentError("need n_assets >= 1 and n_periods >= 2")
    rng = np.random.default_rng(seed)
    drift = rng.uniform(-0.002, 0.004, n_assets)
    vol = rng.uniform(0.005, 0.03, n_assets)
    steps = rng.normal(drift[:, None], vol[:, None], (n_assets, n_periods - 1))
    log_p = np.concatenate([np.zeros((n_assets, 1)), np.cumsum(steps, axis=1)], axis=1)
    return PriceSeries(100.0 * np.exp(log_p))


def random_portfolio_baseline(spec, n_samples, seed=None):
    """Metrics of uniformly random portfolios holding exactly ``K`` assets.

    Returns an ``(n_samples, 3)`` array of (return, volatility, sharpe);
    the Sharpe entry is NaN where volatility is zero.
    """
    n, k = spec.n_assets, spec.budget_k
    if k > n:
        raise ArgumentError("K exceeds the number of assets")
    if n_samples < 1:
        raise ArgumentError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    # argsort of iid keys gives a uniformly random K-subset per row
    picks = np.argsort(rng.random((n_samples, n)), axis=1)[:, :k]
    W = np.zeros((n_samples, n))
    np.put_along_axis(W, picks, 1.0, axis=1)
    ret = W @ spec.mu
    vol = np.sqrt(np.maximum(np.einsum("bi,ij,bj->b", W, spec.sigma, W), 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        sharpe = np.where(vol > 0, ret / vol, np.nan)
    return np.column_stack([ret, vol, sharpe])


def load_prices_csv(path):
    """Read a price table: one asset per row, first column the label."""
    path = Path(path)
    labels, rows = [], []
    with path.open(newline="") as fh:
        for r, record in enumerate(csv.reader(fh), start=1):
            if not record or all(not c.strip() for c in record):
                continue
            if len(record) < 3:
                raise ParseError(f"{path}:{r}: need a label and at least two prices")
            values = []
            for c, cell in enumerate(record[1:], start=2):
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(f"{path}:{r}:{c}: non-numeric price {cell!r}") from None
                if not math.isfinite(v) or v <= 0:
                    raise ParseError(f"{path}:{r}:{c}: price must be positive, got {cell!r}")
                values.append(v)
            if rows and len(values) != len(rows[0]):
                raise ParseError(
                    f"{path}:{r}: ragged row with {len(values)} prices, expected {len(rows[0])}"
                )
            labels.append(record[0].strip())
            rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no price rows")
    return PriceSeries(np.array(rows), tuple(labels))


def save_prices_csv(series, path):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        for label, row in zip(series.labels, series.prices):
            w.writerow([label, *(repr(float(v)) for v in row)])
