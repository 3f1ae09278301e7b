"""
Given any predictive table q, build a limit of Bayes predictives whose risk is
nowhere larger.

The prior is found by minimizing ``D_q`` on the parameters with finite risk under q.
Rows reachable from those parameters take the limit of Bayes predictives along the
floored minimization; the remaining rows take the Bayes conditional of the uniform
prior on the full grid.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from lipsolve import config
from lipsolve.exceptions import RejectedInput
from lipsolve.functionals import d_q, risk_profile
from lipsolve.model import (
    ModelTable,
    PredictiveTable,
    Prior,
    ZeroPattern,
    restrict_model,
    uniform_prior,
    zero_pattern,
)
from lipsolve.predictive import DIRECT, LIMIT_FILLED, LimitReport, limit_predictive
from lipsolve.solver import (
    DqFunctional,
    SolverConfig,
    SolverResult,
    default_anneal_floors,
    optimize,
    require_valid,
)

logger = logging.getLogger(__name__)

NOT_WORSE = "<="
WORSE = ">"


@dataclass(frozen=True)
class DominanceRow:
    theta_label: str
    r1: float
    r2: float
    relation: str


@dataclass(frozen=True)
class DominanceReport:
    rows: Tuple[DominanceRow, ...]

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    @property
    def dominates(self) -> bool:
        return all(row.relation == NOT_WORSE for row in self.rows)

    @property
    def equal(self) -> bool:
        return all(row.r1 == row.r2 for row in self.rows)


@dataclass(frozen=True, eq=False)
class Domination:
    """
    ``predictive`` dominates the input; ``prior`` is the ``D_q`` minimizer embedded
    in the full grid (``None`` when no parameter has finite risk).
    """

    predictive: PredictiveTable
    pattern: ZeroPattern
    result: Optional[SolverResult]
    comparison: DominanceReport
    limit: LimitReport
    prior: Optional[Prior] = None
    d_q_value: float = math.inf

    @property
    def converged(self) -> bool:
        return self.result is None or self.result.converged


def _not_worse(r1, r2, slack):
    if math.isinf(r1):
        return math.isinf(r2)
    return r1 <= r2 + slack


def dominance_check(
    m: ModelTable, q1: PredictiveTable, q2: PredictiveTable, slack=None
) -> DominanceReport:
    """
    Compare ``R(theta, q1)`` with ``R(theta, q2)`` at every grid point; ``inf <= inf``
    holds, and finite risks are compared with an additive slack.
    """
    slack = config.DOMINANCE_SLACK if slack is None else slack
    first, second = risk_profile(m, q1), risk_profile(m, q2)
    return DominanceReport(
        tuple(
            DominanceRow(
                label,
                r1,
                r2,
                NOT_WORSE if _not_worse(r1, r2, slack) else WORSE,
            )
            for label, r1, r2 in zip(m.theta_labels, first, second)
        )
    )


def _minimize_dq(sub, q_rows, cfg):
    """
    Anneal ``D_q`` down the floor schedule, then finish at ``config.FINISH_FLOOR``
    so the shift the floor puts on the minimizer stays below the dominance slack.
    """
    objective = DqFunctional(sub.probs, q_rows)
    floors = (cfg.floor,) if cfg.floor > 0.0 else _dq_floors()
    result = None
    initial = None
    for floor in floors:
        result = optimize(objective, cfg.with_floor(floor), initial, sub.theta_labels)
        logger.debug("D_q at floor %.3g: %.6g, gap %.3g", floor, result.objective, result.certificate_gap)
        initial = result.unfloored_prior
    return result


def _dq_floors():
    floors = default_anneal_floors()
    if config.FINISH_FLOOR < floors[-1]:
        floors += (config.FINISH_FLOOR,)
    return floors


def dominating_predictive(
    m: ModelTable, q: PredictiveTable, cfg: Optional[SolverConfig] = None
) -> Domination:
    cfg = SolverConfig() if cfg is None else cfg
    require_valid(m)
    if q.space != m.space:
        raise RejectedInput("the predictive's x and y labels do not match the model")
    pattern = zero_pattern(m, q)
    everywhere = uniform_prior(m)
    if not pattern.theta_q:
        logger.info("every parameter has infinite risk under q; any predictive dominates")
        limit = limit_predictive(m, everywhere, everywhere)
        return Domination(
            limit.final, pattern, None, dominance_check(m, limit.final, q), limit
        )

    theta_idx = sorted(pattern.theta_q)
    x_idx = sorted(pattern.x_q)
    sub = restrict_model(m, theta_idx, x_idx)
    result = _minimize_dq(sub, q.q[x_idx], cfg)
    if not result.converged:
        logger.warning("D_q minimization did not converge; gap %.3g", result.certificate_gap)

    # rows of X^q: limit along the floored minimization (base prior uniform on theta_q)
    inner = limit_predictive(sub, result.unfloored_prior, uniform_prior(sub))
    outer = limit_predictive(m, everywhere, everywhere)
    table = np.array(outer.final.q)
    flags = list(outer.flags)
    for row, i in enumerate(x_idx):
        table[i] = inner.final.q[row]
        flags[i] = inner.flags[row]
    for i in set(range(m.space.k)) - set(x_idx):
        flags[i] = LIMIT_FILLED

    weights = np.zeros(m.size)
    weights[theta_idx] = result.unfloored_prior.weights
    prior = Prior(weights, m.theta_labels)
    predictive = PredictiveTable(table, m.space)
    limit = LimitReport(predictive, tuple(flags))
    logger.debug(
        "composed predictive: %d direct rows of %d",
        sum(flag == DIRECT for flag in flags),
        m.space.k,
    )
    return Domination(
        predictive=predictive,
        pattern=pattern,
        result=result,
        comparison=dominance_check(m, predictive, q),
        limit=limit,
        prior=prior,
        d_q_value=d_q(m, prior, q),
    )


__all__ = (
    "DominanceReport",
    "DominanceRow",
    "Domination",
    "dominance_check",
    "dominating_predictive",
)
