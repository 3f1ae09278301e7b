"""
Brute-force checks for the solver: exhaustive search over a lattice on the simplex,
central-difference gradients and random concavity probes. Only practical for small
grids.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import xlogy

from lipsolve.exceptions import GridTooLarge, RejectedInput
from lipsolve.functionals import conditionals, row_entropies
from lipsolve.model import ModelTable, OutcomeSpace, PredictiveTable, Prior

logger = logging.getLogger(__name__)

MAX_GRID_SIZE = 4
DEFAULT_STEP = 0.005
DEFAULT_H = 1e-6
CHUNK_SIZE = 20000


@dataclass(frozen=True, eq=False)
class GridSearchResult:
    prior: Prior
    value: float
    points: int


@dataclass(frozen=True)
class Probe:
    """
    ``midpoint_excess`` is the smallest ``F((a + b) / 2) - (F(a) + F(b)) / 2`` seen
    (nonnegative for a concave functional); ``lipschitz`` the largest
    ``|F(a) - F(b)| / |a - b|_1``.
    """

    midpoint_excess: float
    lipschitz: float
    pairs: int


def _lattice_size(step):
    if not 0.0 < step <= 1.0:
        raise RejectedInput(f"the lattice step must lie in (0, 1], got {step!r}")
    n = int(round(1.0 / step))
    if abs(n * step - 1.0) > 1e-9:
        raise RejectedInput(f"1 / step must be an integer, got step {step!r}")
    return n


def _lattice(size, n):
    """Chunks of weight vectors with entries in ``{0, 1/n, ..., 1}`` summing to one."""
    if size == 1:
        yield np.ones((1, 1))
        return
    bars = itertools.combinations(range(n + size - 1), size - 1)
    while True:
        chunk = np.array(list(itertools.islice(bars, CHUNK_SIZE)), dtype=float)
        if chunk.size == 0:
            return
        edges = np.hstack(
            (np.full((len(chunk), 1), -1.0), chunk, np.full((len(chunk), 1), n + size - 1.0))
        )
        yield (np.diff(edges, axis=1) - 1.0) / n


def _lip_values(probs, rows, weights):
    xy_rows, x_rows = rows
    joint = np.tensordot(weights, probs, axes=1)
    x_joint = joint.sum(axis=2)
    i_xy = weights @ xy_rows - xlogy(joint, joint).sum(axis=(1, 2))
    i_x = weights @ x_rows - xlogy(x_joint, x_joint).sum(axis=1)
    return np.maximum(i_xy - i_x, 0.0)


def _dq_values(probs, q, weights):
    joint = np.tensordot(weights, probs, axes=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = (xlogy(joint, conditionals(joint)) - xlogy(joint, q)).sum(axis=(1, 2))
    infinite = np.any((joint > 0.0) & (q == 0.0), axis=(1, 2))
    return np.where(infinite, np.inf, np.maximum(values, 0.0))


def _search(m, step, values, sense):
    if m.size > MAX_GRID_SIZE:
        raise GridTooLarge(m.size, MAX_GRID_SIZE)
    n = _lattice_size(step)
    best_value, best_weights, points = -math.inf, None, 0
    for weights in _lattice(m.size, n):
        scores = sense * values(weights)
        t = int(np.argmax(scores))
        points += len(weights)
        if best_weights is None or scores[t] > best_value:
            best_value, best_weights = float(scores[t]), weights[t]
    logger.debug("searched %d lattice points with step %g", points, step)
    best_weights = best_weights / best_weights.sum()
    return GridSearchResult(Prior(best_weights, m.theta_labels), sense * best_value, points)


def grid_search_lip(m: ModelTable, step: float = DEFAULT_STEP) -> GridSearchResult:
    """
    Largest ``I(theta; y | x)`` over priors whose weights are multiples of ``step``.

    :raises GridTooLarge: for more than four grid points
    """
    rows = row_entropies(m.probs)
    return _search(m, step, lambda w: _lip_values(m.probs, rows, w), 1.0)


def grid_search_dq(
    m: ModelTable, q: PredictiveTable, step: float = DEFAULT_STEP
) -> GridSearchResult:
    """Smallest ``D_q`` over the same lattice as :func:`grid_search_lip`."""
    return _search(m, step, lambda w: _dq_values(m.probs, q.q, w), -1.0)


def finite_diff_gradient(
    functional: Callable[[ModelTable, Prior], float],
    m: ModelTable,
    prior: Prior,
    h: float = DEFAULT_H,
) -> np.ndarray:
    """
    Central differences of ``functional(m, prior)`` along ``e_t - e_0``. Component
    ``t`` estimates ``g_t - g_0`` for the analytic gradient ``g``, so compare it
    against pairwise differences.

    :raises RejectedInput: unless every weight is at least ``2h`` and ``h`` lies in
                           ``[1e-8, 1e-4]``
    """
    if not 1e-8 <= h <= 1e-4:
        raise RejectedInput(f"the difference step must lie in [1e-8, 1e-4], got {h!r}")
    if len(prior) != m.size:
        raise RejectedInput("the prior does not match the model's grid")
    if np.any(prior.weights < 2.0 * h):
        raise RejectedInput("finite differences need an interior prior (all weights >= 2h)")
    gradient = np.zeros(m.size)
    for t in range(1, m.size):
        direction = np.zeros(m.size)
        direction[t], direction[0] = h, -h
        ahead = functional(m, Prior(prior.weights + direction, prior.labels))
        behind = functional(m, Prior(prior.weights - direction, prior.labels))
        gradient[t] = (ahead - behind) / (2.0 * h)
    return gradient


def random_priors(m: ModelTable, count: int, seed: Optional[int] = 0) -> np.ndarray:
    """``count`` full-support weight vectors, Dirichlet(1) distributed."""
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(m.size), size=count)
    return weights / weights.sum(axis=1, keepdims=True)


def _sparsify(rng, rows, sparsity):
    """Zero each entry with probability ``sparsity``, keeping one per row, and renormalize."""
    if sparsity <= 0.0:
        return rows
    keep = rng.random(rows.shape) >= sparsity
    keep[np.arange(rows.shape[0]), rng.integers(rows.shape[1], size=rows.shape[0])] = True
    rows = np.where(keep, rows, 0.0)
    return rows / rows.sum(axis=1, keepdims=True)


def random_model(
    size: int, k: int, l: int, seed: Optional[int] = 0, sparsity: float = 0.0
) -> ModelTable:
    """
    A model whose rows ``p(., .|theta_t)`` are Dirichlet(1) over the ``k * l`` cells,
    with cells dropped at rate ``sparsity``. Draws are repeated until every x is
    reachable.
    """
    if not 0.0 <= sparsity < 1.0:
        raise RejectedInput("sparsity must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    while True:
        rows = _sparsify(rng, rng.dirichlet(np.ones(k * l), size=size), sparsity)
        probs = rows.reshape(size, k, l)
        if np.all((probs.sum(axis=2) > 0.0).any(axis=0)):
            break
    space = OutcomeSpace(tuple(str(i) for i in range(k)), tuple(str(j) for j in range(l)))
    return ModelTable(space, tuple(f"t{t}" for t in range(size)), probs)


def random_predictive(
    m: ModelTable, seed: Optional[int] = 0, sparsity: float = 0.0
) -> PredictiveTable:
    """Dirichlet(1) rows ``q(.; x)`` with entries dropped at rate ``sparsity``."""
    if not 0.0 <= sparsity < 1.0:
        raise RejectedInput("sparsity must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    rows = rng.dirichlet(np.ones(m.space.l), size=m.space.k)
    return PredictiveTable(_sparsify(rng, rows, sparsity), m.space)


def probe(
    functional: Callable[[ModelTable, Prior], float],
    m: ModelTable,
    pairs: int = 50,
    seed: Optional[int] = 0,
) -> Probe:
    """Midpoint concavity and empirical Lipschitz constant over random prior pairs."""
    rng = np.random.default_rng(seed)
    excess, lipschitz = math.inf, 0.0
    for _ in range(pairs):
        a, b = rng.dirichlet(np.ones(m.size), size=2)
        a, b = a / a.sum(), b / b.sum()
        fa = functional(m, Prior(a))
        fb = functional(m, Prior(b))
        middle = functional(m, Prior(0.5 * (a + b)))
        excess = min(excess, middle - 0.5 * (fa + fb))
        distance = float(np.abs(a - b).sum())
        if distance > 0.0:
            lipschitz = max(lipschitz, abs(fa - fb) / distance)
    return Probe(excess, lipschitz, pairs)


__all__ = (
    "GridSearchResult",
    "Probe",
    "finite_diff_gradient",
    "grid_search_dq",
    "grid_search_lip",
    "probe",
    "random_model",
    "random_predictive",
    "random_priors",
)
