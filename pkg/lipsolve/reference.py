"""
Default priors that solved priors are compared against, and the mirror symmetry
theta -> 1 - theta, x -> N - x, y -> M - y of binomial models.
"""

import numpy as np
from scipy.special import betainc

from lipsolve import config
from lipsolve.builders import build_binomial_model
from lipsolve.exceptions import RejectedInput
from lipsolve.model import ModelTable, Prior, uniform_prior


def reference_prior(m: ModelTable) -> Prior:
    """On a finite grid the reference prior is uniform."""
    return uniform_prior(m)


def jeffreys_histogram(theta_values) -> Prior:
    """
    Beta(1/2, 1/2) mass of each grid point's cell, cells split at the midpoints
    between consecutive sorted grid values. Weights follow the given order.
    """
    values = np.asarray(theta_values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise RejectedInput("numeric theta values are required")
    if np.any((values < 0.0) | (values > 1.0)):
        raise RejectedInput("theta values must lie in [0, 1]")
    order = np.argsort(values)
    ordered = values[order]
    edges = np.concatenate(([0.0], (ordered[1:] + ordered[:-1]) / 2.0, [1.0]))
    masses = np.diff(betainc(0.5, 0.5, edges))
    weights = np.empty_like(masses)
    weights[order] = masses
    return Prior(weights / weights.sum())


def total_variation(a: Prior, b: Prior) -> float:
    if len(a) != len(b):
        raise RejectedInput("cannot compare priors on grids of different sizes")
    return 0.5 * float(np.abs(a.weights - b.weights).sum())


def is_mirror_symmetric(m: ModelTable) -> bool:
    return bool(
        np.allclose(
            m.probs[::-1, ::-1, ::-1], m.probs, rtol=0.0, atol=config.PROBABILITY_TOLERANCE
        )
    )


def mirror_prior(m: ModelTable, prior: Prior) -> Prior:
    if not is_mirror_symmetric(m):
        raise RejectedInput("the model is not invariant under the mirror relabeling")
    return Prior(prior.weights[::-1], prior.labels)


def symmetrize(m: ModelTable, prior: Prior) -> Prior:
    """``(prior + mirror(prior)) / 2``."""
    mirrored = mirror_prior(m, prior)
    return Prior(0.5 * (prior.weights + mirrored.weights), prior.labels)


def k_reference_prior(k, theta_grid=None, cfg=None):
    """Latent information prior with no past data and ``k`` future trials."""
    from lipsolve.solver import solve_lip

    theta_grid = config.DEFAULT_GRID if theta_grid is None else theta_grid
    return solve_lip(build_binomial_model(0, k, theta_grid), cfg)
