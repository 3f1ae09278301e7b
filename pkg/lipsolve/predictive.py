import logging
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Optional, Tuple

import numpy as np

from lipsolve import config
from lipsolve.exceptions import (
    FallbackRowWarning,
    RejectedInput,
    UndefinedConditional,
)
from lipsolve.functionals import conditionals
from lipsolve.model import ModelTable, PredictiveTable, Prior, mix, uniform_prior

logger = logging.getLogger(__name__)

DIRECT = "direct"
LIMIT_FILLED = "limit-filled"


@dataclass(frozen=True)
class AnnealingSchedule:
    """
    Mixture weights toward the base prior, applied in order. Defaults to the
    geometric schedule in :mod:`lipsolve.config`.
    """

    floors: Tuple[float, ...] = field(default_factory=lambda: tuple(config.ANNEAL_FLOORS))
    tolerance: float = field(default_factory=lambda: config.ANNEAL_TOLERANCE)

    def __post_init__(self):
        floors = tuple(float(floor) for floor in self.floors)
        if not floors:
            raise RejectedInput("an annealing schedule needs at least one floor")
        if any(not 0.0 < floor <= 1.0 for floor in floors):
            raise RejectedInput("annealing floors must lie in (0, 1]")
        if any(b >= a for a, b in zip(floors, floors[1:])):
            raise RejectedInput("annealing floors must be strictly decreasing")
        if not self.tolerance > 0.0:
            raise RejectedInput("the annealing tolerance must be positive")
        object.__setattr__(self, "floors", floors)


@dataclass(frozen=True)
class LimitReport:
    """
    The limit-of-Bayes predictive table with, per x, whether its row is the direct
    Bayes conditional or was filled from the base prior. ``trace`` holds
    ``(floor, max deviation from final)`` pairs when the limit was cross-checked.
    """

    final: PredictiveTable
    flags: Tuple[str, ...]
    trace: Tuple[Tuple[float, float], ...] = ()
    converged: bool = True
    max_deviation: float = 0.0

    @property
    def filled_rows(self) -> Tuple[int, ...]:
        return tuple(i for i, flag in enumerate(self.flags) if flag == LIMIT_FILLED)


def bayes_predictive(m: ModelTable, prior: Prior) -> PredictiveTable:
    """
    ``q(y; x) = p_pi(x, y) / p_pi(x)``.

    :raises ZeroMarginal: naming the first x with ``p_pi(x) = 0``; use
                          :func:`limit_predictive` instead
    """
    joint = m.require_positive_marginals(prior, "bayes_predictive")
    return PredictiveTable(joint / joint.sum(axis=1, keepdims=True), m.space)


def plug_in_predictive(
    m: ModelTable, estimator: Mapping[int, int], fallback: bool = False
) -> PredictiveTable:
    """
    ``q(y; x) = p(y | x, theta_estimator(x))``.

    :param estimator: map from x index to theta index
    :param fallback: substitute a uniform row (with a :class:`FallbackRowWarning`)
                     where ``p(x | theta) = 0``, instead of raising
    :raises UndefinedConditional:
    """
    rows = []
    filled = []
    for i in range(m.space.k):
        if i not in estimator:
            raise RejectedInput(f"the estimator does not map x index {i}")
        t = int(estimator[i])
        if not 0 <= t < m.size:
            raise RejectedInput(f"the estimator maps x index {i} outside the grid ({t})")
        row = m.probs[t, i]
        mass = row.sum()
        if mass > 0.0:
            rows.append(row / mass)
        elif fallback:
            rows.append(np.full(m.space.l, 1.0 / m.space.l))
            filled.append(m.space.x_labels[i])
        else:
            raise UndefinedConditional(i, t)
    if filled:
        warnings.warn(
            f"uniform rows substituted for x = {', '.join(filled)}",
            FallbackRowWarning,
            stacklevel=2,
        )
    return PredictiveTable(np.array(rows), m.space)


def limit_predictive(
    m: ModelTable, pi_hat: Prior, mu: Optional[Prior] = None
) -> LimitReport:
    """
    The limit of ``bayes_predictive(floor * mu + (1 - floor) * pi_hat)`` as the
    floor goes to zero, in closed form: rows where ``pi_hat`` reaches x take its
    Bayes conditional, the others take the conditional of ``mu``.

    :param mu: full x-support base prior, uniform when omitted
    :raises ZeroMarginal: if ``mu`` misses some x
    """
    mu = uniform_prior(m) if mu is None else mu
    base = conditionals(m.require_positive_marginals(mu, "limit_predictive"))
    joint = m.joint(pi_hat)
    direct = joint.sum(axis=1) > 0.0
    q = np.where(direct[:, None], conditionals(joint), base)
    flags = tuple(DIRECT if reached else LIMIT_FILLED for reached in direct)
    if not direct.all():
        logger.debug("limit rows filled from the base prior: %s", np.flatnonzero(~direct))
    return LimitReport(PredictiveTable(q, m.space), flags)


def verify_limit_by_annealing(
    m: ModelTable,
    pi_hat: Prior,
    mu: Optional[Prior] = None,
    schedule: Optional[AnnealingSchedule] = None,
) -> LimitReport:
    """
    Cross-check :func:`limit_predictive` by computing the Bayes predictive of each
    floor mixture and recording its largest entrywise deviation from the closed form.
    ``converged`` is false if the deviation at the last floor exceeds the schedule
    tolerance.
    """
    mu = uniform_prior(m) if mu is None else mu
    schedule = AnnealingSchedule() if schedule is None else schedule
    closed = limit_predictive(m, pi_hat, mu)
    trace = []
    for floor in schedule.floors:
        q = bayes_predictive(m, mix(mu, pi_hat, floor))
        deviation = float(np.abs(q.q - closed.final.q).max())
        logger.debug("floor %.3g: max deviation %.3g", floor, deviation)
        trace.append((floor, deviation))
    final_deviation = trace[-1][1]
    converged = final_deviation <= schedule.tolerance
    if not converged:
        logger.warning(
            "annealed predictives deviate by %.3g from the closed-form limit at floor %.3g",
            final_deviation,
            schedule.floors[-1],
        )
    return LimitReport(
        closed.final,
        closed.flags,
        tuple(trace),
        converged=converged,
        max_deviation=final_deviation,
    )
