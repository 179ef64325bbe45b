"""Derivative-free minimisers with a hard evaluation budget.

Both return ``(x_best, f_best)`` where the best point is taken over every
evaluation made, and never call ``f`` more than ``max_evals`` times.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.optimize import minimize

from .errors import ArgumentError

__all__ = ["BudgetedObjective", "nelder_mead", "cobyla"]


class _BudgetExhausted(Exception):
    pass


class BudgetedObjective:
    """Wraps ``f``; counts calls, keeps the best point, stops at the budget."""

    def __init__(self, f, max_evals):
        if max_evals < 1:
            raise ArgumentError("max_evals must be >= 1")
        self.f = f
        self.max_evals = int(max_evals)
        self.n_evals = 0
        self.x_best = None
        self.f_best = np.inf

    def __call__(self, x):
        if self.n_evals >= self.max_evals:
            raise _BudgetExhausted
        x = np.array(x, dtype=float)
        fx = float(self.f(x))
        self.n_evals += 1
        if fx < self.f_best or self.x_best is None:
            self.x_best, self.f_best = x, fx
        return fx


def nelder_mead(f, x0, max_evals, max_iter=None, initial_step=0.3, xatol=1e-8, fatol=1e-10,
                alpha=1.0, expand=2.0, contract=0.5, shrink=0.5):
    """Standard Nelder-Mead simplex search.

    The initial simplex is ``x0`` plus ``initial_step`` along each axis.
    ``max_iter`` optionally caps simplex iterations on top of the
    evaluation budget.
    """
    obj = BudgetedObjective(f, max_evals)
    x0 = np.asarray(x0, dtype=float).ravel()
    n = x0.size
    try:
        simplex = [x0.copy()]
        for i in range(n):
            v = x0.copy()
            v[i] += initial_step
            simplex.append(v)
        simplex = np.array(simplex)
        fvals = np.empty(n + 1)
        fvals[0] = obj(simplex[0])
        for i in range(1, n + 1):
            fvals[i] = obj(simplex[i])
        it = 0
        while max_iter is None or it < max_iter:
            order = np.argsort(fvals, kind="stable")
            simplex, fvals = simplex[order], fvals[order]
            if (np.max(np.abs(simplex[1:] - simplex[0])) <= xatol
                    and np.max(np.abs(fvals[1:] - fvals[0])) <= fatol):
                break
            it += 1
            centroid = simplex[:-1].mean(axis=0)
            xr = centroid + alpha * (centroid - simplex[-1])
            fr = obj(xr)
            if fr < fvals[0]:
                xe = centroid + expand * (xr - centroid)
                fe = obj(xe)
                if fe < fr:
                    simplex[-1], fvals[-1] = xe, fe
                else:
                    simplex[-1], fvals[-1] = xr, fr
            elif fr < fvals[-2]:
                simplex[-1], fvals[-1] = xr, fr
            else:
                if fr < fvals[-1]:
                    xc = centroid + contract * (xr - centroid)
                    fc = obj(xc)
                    accept = fc <= fr
                else:
                    xc = centroid + contract * (simplex[-1] - centroid)
                    fc = obj(xc)
                    accept = fc < fvals[-1]
                if accept:
                    simplex[-1], fvals[-1] = xc, fc
                else:
                    for i in range(1, n + 1):
                        simplex[i] = simplex[0] + shrink * (simplex[i] - simplex[0])
                        fvals[i] = obj(simplex[i])
    except _BudgetExhausted:
        pass
    return obj.x_best, obj.f_best


def cobyla(f, x0, max_evals, rhobeg=1.0, rhoend=1e-4):
    """COBYLA linear-approximation trust-region search (SciPy backend)."""
    obj = BudgetedObjective(f, max_evals)
    x0 = np.asarray(x0, dtype=float).ravel()
    try:
        obj(x0)
        if obj.max_evals > 1:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                minimize(obj, x0, method="COBYLA",
                         options={"rhobeg": rhobeg, "tol": rhoend, "maxiter": obj.max_evals - 1})
    except _BudgetExhausted:
        pass
    return obj.x_best, obj.f_best
