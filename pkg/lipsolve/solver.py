"""
Latent information priors: maximization of ``I(theta; y | x)`` over priors on the grid.

Both engines work on the floored class ``{floor * mu + (1 - floor) * nu}`` with ``mu``
uniform, and stop on the Frank-Wolfe gap of that class, which bounds the distance to the
optimum for a concave objective. The same engines minimize the convex ``D_q`` for the
dominator by flipping the objective's sense.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect
from lipsolve import config
from lipsolve.exceptions import ModelValidationFailed, RejectedInput
from lipsolve.functionals import (
    conditional_mutual_information,
    d_q_array,
    dq_gradient_from_joint,
    lip_gradient,
    mutual_information_terms,
    reached_conditionals,
    risks,
    row_entropies,
    self_information,
)
from lipsolve.model import (
    ModelTable,
    PredictiveTable,
    Prior,
    uniform_prior,
    validate_model,
)
from lipsolve.predictive import LimitReport, limit_predictive
from lipsolve.reference import is_mirror_symmetric, symmetrize

logger = logging.getLogger(__name__)

ALGORITHMS = ("frank-wolfe", "exp-gradient")
ALGORITHM_ALIASES = {"fw": "frank-wolfe", "eg": "exp-gradient"}

# a drop step that would empty an x-marginal at floor 0 stops this fraction short
TRUNCATION = 1e-3
MIN_STEP_SIZE = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    """
    Solver options. Omitted fields take the current values in :mod:`lipsolve.config`.
    """

    algorithm: str = field(default_factory=lambda: config.ALGORITHM)
    floor: float = field(default_factory=lambda: config.FLOOR)
    max_iterations: int = field(default_factory=lambda: config.MAX_ITERATIONS)
    certificate_tolerance: float = field(
        default_factory=lambda: config.CERTIFICATE_TOLERANCE
    )
    line_search_tolerance: float = field(
        default_factory=lambda: config.LINE_SEARCH_TOLERANCE
    )
    step_size: float = field(default_factory=lambda: config.STEP_SIZE)

    def __post_init__(self):
        algorithm = ALGORITHM_ALIASES.get(self.algorithm, self.algorithm)
        if algorithm not in ALGORITHMS:
            raise RejectedInput(
                f"unknown algorithm {self.algorithm!r}, expected one of {', '.join(ALGORITHMS)}"
            )
        object.__setattr__(self, "algorithm", algorithm)
        if not 0.0 <= self.floor < 0.5:
            raise RejectedInput(f"floor must lie in [0, 0.5), got {self.floor!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise RejectedInput("max_iterations must be a positive integer")
        for name in ("certificate_tolerance", "line_search_tolerance", "step_size"):
            if not getattr(self, name) > 0.0:
                raise RejectedInput(f"{name} must be positive")

    def with_floor(self, floor):
        return SolverConfig(
            algorithm=self.algorithm,
            floor=floor,
            max_iterations=self.max_iterations,
            certificate_tolerance=self.certificate_tolerance,
            line_search_tolerance=self.line_search_tolerance,
            step_size=self.step_size,
        )


@dataclass(frozen=True, eq=False)
class SolverResult:
    """
    The optimized prior with its certificate.

    ``certificate_gap`` is the Frank-Wolfe gap over the floored class (the stopping
    criterion); ``minimax_gap`` is ``max_t g_t - sum_t w_t g_t`` over all priors. The
    two coincide at floor 0. ``unfloored_prior`` strips the floor mixture off ``prior``.
    """

    prior: Prior
    objective: float
    certificate_gap: float
    iterations: int
    trace: np.ndarray
    converged: bool
    algorithm: str
    floor: float
    base: Prior
    minimax_gap: float
    support_size: int
    unfloored_prior: Prior
    symmetrized: Optional[Prior] = None
    symmetrized_objective: Optional[float] = None


@dataclass(frozen=True)
class Certificate:
    gap: float
    sup_risk: float
    bayes_risk_value: float


@dataclass(frozen=True, eq=False)
class MinimaxPredictive:
    predictive: PredictiveTable
    result: SolverResult
    limit: LimitReport
    certificate: Certificate
    annealed: Tuple[SolverResult, ...] = ()

    @property
    def value(self) -> float:
        return self.certificate.bayes_risk_value


class Objective(ABC):
    """
    A smooth functional of the prior weights. ``sense`` is ``+1`` for maximization
    and ``-1`` for minimization; the engines always ascend ``sense * f``.
    """

    sense = 1.0

    def __init__(self, probs):
        self.probs = probs
        self.reach = probs.sum(axis=2) > 0.0

    def joint(self, w):
        return np.tensordot(w, self.probs, axes=1)

    @abstractmethod
    def f(self, w):
        pass

    @abstractmethod
    def gradient_at(self, joint, rows=slice(None)):
        """Partial derivatives for ``probs[rows]`` at the prior whose joint is given."""

    def grad(self, w):
        return self.gradient_at(self.joint(w))

    def line_search(self, w, s, a, gamma_max, tolerance, keep_marginals):
        """
        Exact step along ``e_s - e_a``: the root of the directional derivative of
        ``sense * f`` on ``[0, gamma_max]``, found by bisection.
        """
        joint = self.joint(w)
        step = self.probs[s] - self.probs[a]
        rows = [s, a]

        def slope(gamma):
            g = self.sense * self.gradient_at(joint + gamma * step, rows)
            with np.errstate(invalid="ignore"):
                d = float(g[0] - g[1])
            if math.isnan(d):
                raise FloatingPointError(f"slope undefined at step {gamma:.3g}")
            return d

        upper = gamma_max
        if keep_marginals and self.empties_marginal(w, s, a):
            upper = gamma_max * (1.0 - TRUNCATION)
        try:
            if slope(upper) >= 0.0:
                return upper
            if slope(0.0) <= 0.0:
                return 0.0
            return bisect(slope, 0.0, upper, xtol=tolerance)
        except FloatingPointError as e:
            logger.warning("line search from %d to %d abandoned: %s", a, s, e)
            return 0.0

    def empties_marginal(self, w, s, a):
        """Whether moving all of ``w[a]`` onto ``s`` leaves some ``p_pi(x) = 0``."""
        drained = w.copy()
        drained[s] += drained[a]
        drained[a] = 0.0
        return bool(np.any(self.joint(drained).sum(axis=1) <= 0.0))


class LatentInformation(Objective):
    """``I(theta; y | x)``, maximized."""

    def __init__(self, probs):
        super().__init__(probs)
        self.self_terms = self_information(probs)
        self.entropies = row_entropies(probs)

    def f(self, w):
        i_xy, i_x = mutual_information_terms(self.probs, w, self.entropies)
        return i_xy - i_x

    def gradient_at(self, joint, rows=slice(None)):
        probs = self.probs[rows]
        return risks(probs, reached_conditionals(probs, joint), self.self_terms[rows])


class DqFunctional(Objective):
    """``D_q``, minimized."""

    sense = -1.0

    def __init__(self, probs, q):
        super().__init__(probs)
        self.q = q

    def f(self, w):
        return d_q_array(self.probs, w, self.q)

    def gradient_at(self, joint, rows=slice(None)):
        return dq_gradient_from_joint(self.probs[rows], joint, self.q)


def _unbounded(g, support):
    """An undefined or infinite component that makes the gap ``+inf``."""
    return bool(
        np.isnan(g).any() or np.isposinf(g).any() or np.isneginf(g[support]).any()
    )


def _fw_gap(g, w, mu, floor):
    """Frank-Wolfe gap of ``g`` over ``{floor * mu + (1 - floor) * nu}``."""
    support = w > 0.0
    if _unbounded(g, support):
        return math.inf
    gap = (1.0 - floor) * g.max() - w[support] @ g[support]
    if floor > 0.0:
        gap += floor * (mu @ g)
    return float(gap)


def _minimax_gap(g, w):
    support = w > 0.0
    if _unbounded(g, support):
        return math.inf
    return float(g.max() - w[support] @ g[support])


def _drop_vertex(objective, g, w, active, s, keep_marginals):
    """
    The away vertex of a pairwise step: the active parameter with the smallest
    gradient, unless draining it would empty an x-marginal. Then the smallest
    gradient among the parameters that can be drained competes with it on
    ``w_t (g_s - g_t)``.
    """
    a = int(active[np.argmin(g[active])])
    if not keep_marginals:
        return a
    reach = objective.reach
    alone = reach & (reach[active].sum(axis=0) == 1) & ~reach[s]
    pinned = alone.any(axis=1)
    if not pinned[a]:
        return a
    free = active[~pinned[active] & (active != s)]
    if not len(free):
        return a
    b = int(free[np.argmin(g[free])])
    if w[b] * (g[s] - g[b]) >= w[a] * (g[s] - g[a]):
        return b
    return a


def _frank_wolfe(objective, w, mu, floor, cfg):
    """Pairwise Frank-Wolfe with exact line search."""
    lower = floor * mu
    trace = []
    for iteration in range(cfg.max_iterations):
        g = objective.sense * objective.grad(w)
        gap = _fw_gap(g, w, mu, floor)
        trace.append((objective.f(w), gap))
        if gap <= cfg.certificate_tolerance:
            return w, iteration, trace, True
        active = np.flatnonzero(w > lower)
        s = int(np.argmax(g))
        a = _drop_vertex(objective, g, w, active, s, keep_marginals=floor == 0.0)
        if s == a:
            logger.debug("frank-wolfe stalled at iteration %d, gap %.3g", iteration, gap)
            return w, iteration, trace, False
        gamma_max = w[a] - lower[a]
        gamma = objective.line_search(
            w, s, a, gamma_max, cfg.line_search_tolerance, keep_marginals=floor == 0.0
        )
        if gamma <= 0.0:
            logger.debug("zero step at iteration %d, gap %.3g", iteration, gap)
            return w, iteration, trace, False
        w = w.copy()
        w[s] += gamma
        if gamma == gamma_max:
            w[a] = lower[a]
        else:
            w[a] -= gamma
        logger.debug(
            "iteration %d: gap %.3g, %d -> %d, step %.3g", iteration, gap, a, s, gamma
        )
    g = objective.sense * objective.grad(w)
    gap = _fw_gap(g, w, mu, floor)
    trace.append((objective.f(w), gap))
    return w, cfg.max_iterations, trace, gap <= cfg.certificate_tolerance


def _exp_gradient(objective, w, mu, floor, cfg):
    """
    Multiplicative updates ``nu' ~ nu exp(eta g)`` on the unfloored part; a step that
    lowers ``sense * f`` is retried with half the step size.
    """
    nu = _unfloor(w, mu, floor)
    eta = cfg.step_size
    value = objective.sense * objective.f(w)
    trace = []
    for iteration in range(cfg.max_iterations):
        g = objective.sense * objective.grad(w)
        gap = _fw_gap(g, w, mu, floor)
        trace.append((objective.f(w), gap))
        if gap <= cfg.certificate_tolerance:
            return w, iteration, trace, True
        support = nu > 0.0
        exponent = (1.0 - floor) * (g[support] - g[support].max())
        while True:
            z = np.zeros_like(nu)
            z[support] = nu[support] * np.exp(eta * exponent)
            candidate_nu = z / z.sum()
            candidate = floor * mu + (1.0 - floor) * candidate_nu
            candidate_value = objective.sense * objective.f(candidate)
            if candidate_value >= value - cfg.line_search_tolerance or eta < MIN_STEP_SIZE:
                break
            eta /= 2.0
            logger.debug("iteration %d: step size halved to %.3g", iteration, eta)
        nu, w, value = candidate_nu, candidate, candidate_value
    g = objective.sense * objective.grad(w)
    gap = _fw_gap(g, w, mu, floor)
    trace.append((objective.f(w), gap))
    return w, cfg.max_iterations, trace, gap <= cfg.certificate_tolerance


ENGINES = {"frank-wolfe": _frank_wolfe, "exp-gradient": _exp_gradient}


def _unfloor(w, mu, floor):
    if floor == 0.0:
        return w.copy()
    return np.maximum((w - floor * mu) / (1.0 - floor), 0.0)


def optimize(objective, cfg, initial=None, labels=None):
    """
    Run the configured engine on the floored class with uniform base prior.

    :param initial: unfloored starting prior (uniform when omitted); it is mixed
                    with the base prior at ``cfg.floor``
    :returns: :class:`SolverResult` with the objective in ``objective.f`` units
    """
    size = objective.probs.shape[0]
    mu = np.full(size, 1.0 / size)
    nu0 = mu if initial is None else np.asarray(initial.weights, dtype=float)
    w = cfg.floor * mu + (1.0 - cfg.floor) * nu0
    if not math.isfinite(objective.f(w)):
        raise RejectedInput(
            "the objective is not finite at the starting prior; "
            "restrict the grid to parameters with finite risk"
        )
    w, iterations, trace, converged = ENGINES[cfg.algorithm](
        objective, w, mu, cfg.floor, cfg
    )
    g = objective.sense * objective.grad(w)
    if not converged:
        logger.warning(
            "%s did not converge in %d iterations (floor %.3g, gap %.3g)",
            cfg.algorithm,
            iterations,
            cfg.floor,
            trace[-1][1],
        )
    trace = np.array(trace, dtype=float).reshape(-1, 2)
    trace.setflags(write=False)
    unfloored = _unfloor(w, mu, cfg.floor)
    return SolverResult(
        prior=Prior(w / w.sum(), labels),
        objective=float(objective.f(w)),
        certificate_gap=max(_fw_gap(g, w, mu, cfg.floor), 0.0),
        iterations=iterations,
        trace=trace,
        converged=converged,
        algorithm=cfg.algorithm,
        floor=cfg.floor,
        base=Prior(mu, labels),
        minimax_gap=max(_minimax_gap(g, w), 0.0),
        support_size=int(np.count_nonzero(w > config.SUPPORT_THRESHOLD)),
        unfloored_prior=Prior(unfloored / unfloored.sum(), labels),
    )


def require_valid(m):
    report = validate_model(m)
    if not report.is_valid:
        raise ModelValidationFailed(report)


def solve_lip(
    m: ModelTable, cfg: Optional[SolverConfig] = None, initial: Optional[Prior] = None
) -> SolverResult:
    """
    Maximize ``I(theta; y | x)`` over priors in the floored class.

    Non-convergence is reported through ``converged``, never raised. For models that
    are invariant under the mirror relabeling, the symmetrized prior and its objective
    are attached.
    """
    cfg = SolverConfig() if cfg is None else cfg
    require_valid(m)
    if initial is not None and len(initial) != m.size:
        raise RejectedInput("the initial prior does not match the grid")
    result = optimize(LatentInformation(m.probs), cfg, initial, m.theta_labels)
    result = _with_objective(m, result)
    logger.info(
        "solved %d-point grid: I = %.12g nats, gap %.3g, %d iterations",
        m.size,
        result.objective,
        result.certificate_gap,
        result.iterations,
    )
    if is_mirror_symmetric(m):
        symmetrized = symmetrize(m, result.prior)
        result = _replace(
            result,
            symmetrized=symmetrized,
            symmetrized_objective=conditional_mutual_information(m, symmetrized),
        )
    return result


def _with_objective(m, result):
    return _replace(result, objective=conditional_mutual_information(m, result.prior))


def _replace(result, **changes):
    values = {name: getattr(result, name) for name in SolverResult.__dataclass_fields__}
    values.update(changes)
    return SolverResult(**values)


def default_anneal_floors():
    return tuple(floor for floor in config.ANNEAL_FLOORS if floor < 0.5)


def anneal_lip(
    m: ModelTable,
    floors: Optional[Sequence[float]] = None,
    cfg: Optional[SolverConfig] = None,
) -> List[SolverResult]:
    """
    Solve on a decreasing sequence of floors, each warm-started from the previous
    solution with its floor stripped off and the new one applied.
    """
    cfg = SolverConfig() if cfg is None else cfg
    floors = default_anneal_floors() if floors is None else tuple(floors)
    _check_floors(floors)
    results = []
    initial = None
    for floor in floors:
        result = solve_lip(m, cfg.with_floor(floor), initial)
        logger.debug(
            "anneal floor %.3g: I = %.12g, gap %.3g", floor, result.objective, result.certificate_gap
        )
        results.append(result)
        initial = result.unfloored_prior
    return results


def _check_floors(floors):
    if not floors:
        raise RejectedInput("at least one floor is required")
    if any(not 0.0 < floor < 0.5 for floor in floors):
        raise RejectedInput("annealing floors must lie in (0, 0.5)")
    if any(b >= a for a, b in zip(floors, floors[1:])):
        raise RejectedInput("annealing floors must be strictly decreasing")


def certificate(m: ModelTable, prior: Prior) -> Certificate:
    """
    Sandwich for the minimax risk: ``I(prior) <= minimax value <= sup_risk``.

    :raises ZeroMarginal: if some ``p_pi(x) = 0``
    """
    g = lip_gradient(m, prior)
    value = conditional_mutual_information(m, prior)
    sup_risk = float(g.max())
    return Certificate(gap=max(sup_risk - value, 0.0), sup_risk=sup_risk, bayes_risk_value=value)


def minimax_predictive(m: ModelTable, cfg: Optional[SolverConfig] = None) -> MinimaxPredictive:
    """
    Solve for a latent information prior and return its (limit of) Bayes predictive.

    When the solved prior leaves some x-marginal (numerically) empty the solve is
    repeated on the annealing schedule and the last floored prior is used.
    """
    cfg = SolverConfig() if cfg is None else cfg
    result = solve_lip(m, cfg)
    annealed = ()
    marginals = m.joint(result.prior).sum(axis=1)
    if marginals.min() <= config.MARGINAL_THRESHOLD:
        logger.info(
            "optimum leaves x = %s nearly unreachable; annealing",
            m.space.x_labels[int(np.argmin(marginals))],
        )
        annealed = tuple(anneal_lip(m, cfg=cfg))
        result = annealed[-1]
    limit = limit_predictive(m, result.prior, uniform_prior(m))
    return MinimaxPredictive(
        predictive=limit.final,
        result=result,
        limit=limit,
        certificate=certificate(m, result.prior),
        annealed=annealed,
    )


__all__ = (
    "Certificate",
    "DqFunctional",
    "LatentInformation",
    "MinimaxPredictive",
    "Objective",
    "SolverConfig",
    "SolverResult",
    "anneal_lip",
    "certificate",
    "minimax_predictive",
    "optimize",
    "solve_lip",
)
