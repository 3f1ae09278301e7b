"""
KL prediction risk, the D_q functional and conditional mutual information.

Everything is in nats. Values are extended reals: plain floats in ``[0, inf]``.
``0 log 0 = 0`` throughout; a positive-probability cell predicted with probability
zero makes a risk infinite, and conditionals ``p(y|x, theta)`` are never formed where
``p(x|theta) = 0``.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import xlogy

from lipsolve.model import ModelTable, PredictiveTable, Prior


def conditionals(joint):
    """Row-normalize the last axis, leaving exact zeros where a row is empty."""
    marginal = joint.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(joint > 0.0, joint / marginal, 0.0)


def reached_conditionals(probs, joint):
    """
    ``p_pi(y|x)`` broadcast against ``probs``. Rows with ``p_pi(x) = 0`` take each
    parameter's own conditional, which gives the one-sided derivative there.
    """
    q = conditionals(joint)
    empty = joint.sum(axis=1) <= 0.0
    if not empty.any():
        return q
    return np.where(empty[None, :, None], conditionals(probs), q[None])


def self_information(probs):
    """``sum p(x, y|theta_t) log p(y|x, theta_t)`` per row."""
    return xlogy(probs, conditionals(probs)).sum(axis=(1, 2))


def risks(probs, q, self_terms=None):
    """
    ``R(theta_t, q)`` for every row of ``probs`` (indexed ``[t, i, j]``) against the
    table ``q[i, j]``.

    :param self_terms: precomputed :func:`self_information` of ``probs``
    """
    if self_terms is None:
        self_terms = self_information(probs)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = self_terms - xlogy(probs, q).sum(axis=(1, 2))
    infinite = np.any((probs > 0.0) & (q == 0.0), axis=(1, 2))
    return np.where(infinite, np.inf, np.maximum(values, 0.0))


def row_entropies(probs):
    """Per-row ``sum p log p`` over (x, y) and over x alone."""
    x_rows = probs.sum(axis=2)
    return xlogy(probs, probs).sum(axis=(1, 2)), xlogy(x_rows, x_rows).sum(axis=1)


def mutual_information_terms(probs, weights, rows=None):
    """
    The four entropy-like sums defining ``I(theta; y | x)``, returned as
    ``(i_xy, i_x)`` with ``I = i_xy - i_x``.

    :param rows: precomputed :func:`row_entropies` of ``probs``
    """
    xy_rows, x_rows = row_entropies(probs) if rows is None else rows
    joint = np.tensordot(weights, probs, axes=1)
    x_joint = joint.sum(axis=1)
    i_xy = float(weights @ xy_rows - xlogy(joint, joint).sum())
    i_x = float(weights @ x_rows - xlogy(x_joint, x_joint).sum())
    return i_xy, i_x


def lip_gradient_array(probs, weights):
    """Gradient of ``I`` at ``weights``; assumes every x-marginal is positive."""
    joint = np.tensordot(weights, probs, axes=1)
    return risks(probs, conditionals(joint))


def dq_gradient_from_joint(probs, joint, q):
    """Components of the ``D_q`` gradient for the rows of ``probs``, given ``p_pi(x, y)``."""
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = xlogy(probs, reached_conditionals(probs, joint)) - xlogy(probs, q)
    return terms.sum(axis=(1, 2))


def dq_gradient_array(probs, weights, q):
    """Gradient of ``D_q`` at ``weights``; assumes every x-marginal is positive."""
    return dq_gradient_from_joint(probs, np.tensordot(weights, probs, axes=1), q)


def d_q_array(probs, weights, q):
    joint = np.tensordot(weights, probs, axes=1)
    if np.any((joint > 0.0) & (q == 0.0)):
        return math.inf
    value = (xlogy(joint, conditionals(joint)) - xlogy(joint, q)).sum()
    return max(float(value), 0.0)


@dataclass(frozen=True, eq=False)
class RiskProfile:
    """Per-parameter risks ``R(theta_t, q)`` in nats, ``inf`` allowed."""

    theta_labels: Tuple[str, ...]
    values: np.ndarray

    def __len__(self):
        return len(self.values)

    def __getitem__(self, t):
        return float(self.values[t])

    def __iter__(self):
        return (float(value) for value in self.values)

    @property
    def finite(self) -> np.ndarray:
        return np.isfinite(self.values)

    @property
    def sup(self) -> float:
        return float(self.values.max())


@dataclass(frozen=True)
class ChainRule:
    i_cond: float
    i_xy: float
    i_x: float


def kl_risk(m: ModelTable, t: int, q: PredictiveTable) -> float:
    return float(risks(m.probs[t : t + 1], q.q)[0])


def risk_profile(m: ModelTable, q: PredictiveTable) -> RiskProfile:
    values = risks(m.probs, q.q)
    values.setflags(write=False)
    return RiskProfile(m.theta_labels, values)


def bayes_risk(m: ModelTable, prior: Prior, q: PredictiveTable) -> float:
    """``sum_t w_t R(theta_t, q)`` where zero-weight parameters contribute nothing."""
    support = prior.weights > 0.0
    values = risks(m.probs[support], q.q)
    return float(prior.weights[support] @ values)


def d_q(m: ModelTable, prior: Prior, q: PredictiveTable) -> float:
    """``sum_x p_pi(x) KL(p_pi(.|x) || q(.; x))``."""
    return d_q_array(m.probs, prior.weights, q.q)


def conditional_mutual_information(m: ModelTable, prior: Prior) -> float:
    i_xy, i_x = mutual_information_terms(m.probs, prior.weights)
    return max(i_xy - i_x, 0.0)


def chain_rule_check(m: ModelTable, prior: Prior) -> ChainRule:
    """``I(theta; y | x)`` alongside ``I(theta; (x, y))`` and ``I(theta; x)``."""
    i_xy, i_x = mutual_information_terms(m.probs, prior.weights)
    return ChainRule(i_cond=i_xy - i_x, i_xy=i_xy, i_x=i_x)


def lip_gradient(m: ModelTable, prior: Prior) -> np.ndarray:
    """
    Partial derivatives of ``I`` in the prior weights. Component ``t`` is the risk
    of the Bayes predictive of ``prior`` at ``theta_t``.

    :raises ZeroMarginal: if some ``p_pi(x) = 0``
    """
    m.require_positive_marginals(prior, "lip_gradient")
    return lip_gradient_array(m.probs, prior.weights)


def dq_gradient(m: ModelTable, prior: Prior, q: PredictiveTable) -> np.ndarray:
    """
    Partial derivatives of ``D_q``; component ``t`` is
    ``sum p(x, y|theta_t) log(p_pi(y|x) / q(y; x))``.

    :raises ZeroMarginal: if some ``p_pi(x) = 0``
    """
    m.require_positive_marginals(prior, "dq_gradient")
    return dq_gradient_array(m.probs, prior.weights, q.q)
