"""
Builders for the binomial models and the two worked examples.

Impossible outcomes are written as literal ``0.0``: the binomial pmf is evaluated in
log space, where ``0 * log 0`` is taken as ``0`` and any positive power of ``0`` gives
``log 0 = -inf``, so ``exp`` returns exact zeros (and exact ones for ``0^0``).
"""

import math

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

from lipsolve.exceptions import RejectedInput
from lipsolve.model import ModelTable, OutcomeSpace, PredictiveTable


def theta_label(value):
    return f"{value:.10g}"


def _check_grid(theta_grid):
    grid = np.array(theta_grid, dtype=float).ravel()
    if grid.size == 0:
        raise RejectedInput("the theta grid is empty")
    bad = grid[~np.isfinite(grid) | (grid < 0.0) | (grid > 1.0)]
    if bad.size:
        raise RejectedInput(f"theta grid value {bad[0]!r} is outside [0, 1]")
    if np.unique(grid).size != grid.size:
        raise RejectedInput("theta grid values must be distinct")
    labels = [theta_label(value) for value in grid]
    if len(set(labels)) != len(labels):
        raise RejectedInput("theta grid values are too close to label distinctly")
    return grid


def binomial_pmf(n, theta):
    """``C(n, k) theta^k (1 - theta)^(n - k)`` indexed ``[t, k]``, rows renormalized."""
    k = np.arange(n + 1, dtype=float)
    log_choose = gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
    theta = np.asarray(theta, dtype=float)[:, None]
    pmf = np.exp(log_choose + xlogy(k, theta) + xlog1py(n - k, -theta))
    return pmf / pmf.sum(axis=1, keepdims=True)


def build_binomial_model(n_past, m_future, theta_grid):
    """
    ``p(x, y | theta) = Bin(x; N, theta) Bin(y; M, theta)`` on a finite grid.

    :param n_past: past sample size N >= 0
    :param m_future: future sample size M >= 1
    :param theta_grid: distinct values in [0, 1]
    """
    if int(n_past) != n_past or n_past < 0:
        raise RejectedInput(f"N must be a nonnegative integer, got {n_past!r}")
    if int(m_future) != m_future or m_future < 1:
        raise RejectedInput(f"M must be a positive integer, got {m_future!r}")
    n_past, m_future = int(n_past), int(m_future)
    grid = _check_grid(theta_grid)
    px = binomial_pmf(n_past, grid)
    py = binomial_pmf(m_future, grid)
    return ModelTable(
        space=OutcomeSpace(
            tuple(str(i) for i in range(n_past + 1)),
            tuple(str(j) for j in range(m_future + 1)),
        ),
        theta_labels=tuple(theta_label(value) for value in grid),
        probs=px[:, :, None] * py[:, None, :],
        theta_values=grid,
    )


def build_example1_model(theta_grid):
    """The N = 2, M = 1 binomial model on a grid that includes both endpoints."""
    grid = _check_grid(theta_grid)
    missing = [endpoint for endpoint in (0.0, 1.0) if endpoint not in grid]
    if missing:
        raise RejectedInput(
            f"the grid must contain theta = {missing[0]:g}: the plug-in predictive is "
            "only finite-risk at the endpoints, so without them no parameter has finite risk"
        )
    return build_binomial_model(2, 1, grid)


def build_example2_model(eps):
    """
    Two parameters on X = {0, 1, 2}, Y = {0, 1}. ``theta1`` never produces x = 2;
    ``theta2`` puts ``1 - eps`` on x = 2 and is uniform in y everywhere.
    """
    if not 0.0 < eps < 1.0 or math.isnan(eps):
        raise RejectedInput(f"eps must lie in (0, 1), got {eps!r}")
    theta1 = [[1 / 3, 1 / 6], [1 / 6, 1 / 3], [0.0, 0.0]]
    theta2 = [[eps / 4, eps / 4], [eps / 4, eps / 4], [(1 - eps) / 2, (1 - eps) / 2]]
    return ModelTable(
        space=OutcomeSpace(("0", "1", "2"), ("0", "1")),
        theta_labels=("theta1", "theta2"),
        probs=[theta1, theta2],
    )


def example2_predictive():
    """The predictive density compared against in the second worked example."""
    return PredictiveTable(
        np.array([[2 / 3, 1 / 3], [1 / 3, 2 / 3], [1 / 3, 2 / 3]]),
        OutcomeSpace(("0", "1", "2"), ("0", "1")),
    )


def binomial_mle_map(n_past, theta_values):
    """
    Map each x in 0..N to the index of the grid value nearest to ``x / N``
    (first index on ties).
    """
    if int(n_past) != n_past or n_past < 1:
        raise RejectedInput("the maximum likelihood map needs N >= 1")
    grid = np.asarray(theta_values, dtype=float)
    return {
        x: int(np.argmin(np.abs(grid - x / n_past))) for x in range(int(n_past) + 1)
    }
