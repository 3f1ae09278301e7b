"""
The finite model, priors on its parameter grid, predictive tables and zero patterns.

All objects are immutable after construction: arrays are copied on the way in and
flagged read-only, so they can be shared freely between threads and sweep workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from lipsolve import config
from lipsolve.exceptions import RejectedInput, ZeroMarginal


def _frozen(values, ndim, name):
    array = np.array(values, dtype=float)
    if array.ndim != ndim:
        raise RejectedInput(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    array.setflags(write=False)
    return array


def _labels(values, name):
    labels = tuple(str(label) for label in values)
    if not labels:
        raise RejectedInput(f"{name} must contain at least one label")
    if any(len(label) == 0 for label in labels):
        raise RejectedInput(f"{name} contains an empty label")
    if len(set(labels)) != len(labels):
        seen = set()
        duplicate = next(label for label in labels if label in seen or seen.add(label))
        raise RejectedInput(f"{name} contains the duplicate label '{duplicate}'")
    return labels


@dataclass(frozen=True)
class OutcomeSpace:
    """Ordered labels of the data space X (size k) and the future space Y (size l)."""

    x_labels: Tuple[str, ...]
    y_labels: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "x_labels", _labels(self.x_labels, "x_labels"))
        object.__setattr__(self, "y_labels", _labels(self.y_labels, "y_labels"))

    @property
    def k(self) -> int:
        return len(self.x_labels)

    @property
    def l(self) -> int:
        return len(self.y_labels)


@dataclass(frozen=True, eq=False)
class ModelTable:
    """
    Joint probabilities ``probs[t, i, j] = p(x_i, y_j | theta_t)``.

    Construction only checks structure (labels and shape). Probability invariants
    are checked by :func:`validate_model`, so that a broken table can still be
    loaded and diagnosed.

    :param theta_values: numeric grid values, present for builder-made models only
    """

    space: OutcomeSpace
    theta_labels: Tuple[str, ...]
    probs: np.ndarray
    theta_values: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "theta_labels", _labels(self.theta_labels, "theta_labels"))
        probs = _frozen(self.probs, 3, "probs")
        expected = (len(self.theta_labels), self.space.k, self.space.l)
        if probs.shape != expected:
            raise RejectedInput(
                f"probs has shape {probs.shape} but the labels require {expected}"
            )
        object.__setattr__(self, "probs", probs)
        if self.theta_values is not None:
            values = _frozen(self.theta_values, 1, "theta_values")
            if values.shape[0] != len(self.theta_labels):
                raise RejectedInput("theta_values must have one entry per theta label")
            object.__setattr__(self, "theta_values", values)

    @property
    def size(self) -> int:
        return len(self.theta_labels)

    @property
    def x_marginals(self) -> np.ndarray:
        """``p(x_i | theta_t)`` indexed ``[t, i]``."""
        return self.probs.sum(axis=2)

    def joint(self, prior: "Prior") -> np.ndarray:
        """``p_pi(x_i, y_j)`` indexed ``[i, j]``."""
        return np.tensordot(prior.weights, self.probs, axes=1)

    def require_positive_marginals(self, prior: "Prior", operation: str) -> np.ndarray:
        """
        Return ``p_pi(x, y)`` after checking that every x-marginal is positive.

        :raises ZeroMarginal: naming the first offending x
        """
        joint = self.joint(prior)
        marginal = joint.sum(axis=1)
        zeros = np.flatnonzero(marginal <= 0.0)
        if zeros.size:
            i = int(zeros[0])
            raise ZeroMarginal(i, self.space.x_labels[i], operation)
        return joint


@dataclass(frozen=True, eq=False)
class Prior:
    """A weight vector on the theta grid, summing to one."""

    weights: np.ndarray
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        weights = _frozen(self.weights, 1, "prior weights")
        if weights.size == 0:
            raise RejectedInput("a prior needs at least one weight")
        if not np.all(np.isfinite(weights)) or np.any(weights < 0.0):
            raise RejectedInput("prior weights must be finite and nonnegative")
        total = float(weights.sum())
        if abs(total - 1.0) > config.PROBABILITY_TOLERANCE:
            raise RejectedInput(f"prior weights sum to {total!r}, not 1")
        object.__setattr__(self, "weights", weights)
        if self.labels is not None:
            labels = _labels(self.labels, "prior labels")
            if len(labels) != weights.size:
                raise RejectedInput("prior labels must match the number of weights")
            object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.weights.size

    def support(self, threshold: float = 0.0) -> Tuple[int, ...]:
        return tuple(int(t) for t in np.flatnonzero(self.weights > threshold))


@dataclass(frozen=True, eq=False)
class PredictiveTable:
    """``q[i, j] = q(y_j; x_i)``; every row sums to one."""

    q: np.ndarray
    space: OutcomeSpace

    def __post_init__(self):
        q = _frozen(self.q, 2, "predictive table")
        if q.shape != (self.space.k, self.space.l):
            raise RejectedInput(
                f"predictive table has shape {q.shape}, expected {(self.space.k, self.space.l)}"
            )
        if not np.all(np.isfinite(q)) or np.any(q < 0.0):
            raise RejectedInput("predictive entries must be finite and nonnegative")
        sums = q.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > config.PROBABILITY_TOLERANCE)
        if bad.size:
            i = int(bad[0])
            raise RejectedInput(
                f"predictive row x={self.space.x_labels[i]} sums to {sums[i]!r}, not 1"
            )
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class ZeroPattern:
    """
    ``n_q``: cells where q is exactly zero; ``theta_q``: parameters putting no mass on
    those cells (the only ones with finite risk); ``x_q``: data values reachable from
    ``theta_q``.
    """

    n_q: FrozenSet[Tuple[int, int]]
    theta_q: FrozenSet[int]
    x_q: FrozenSet[int]


@dataclass(frozen=True)
class Violation:
    kind: str
    index: Tuple[int, ...]
    message: str

    def __str__(self):
        return f"[{self.kind}] at {self.index}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = field(default_factory=tuple)

    def __iter__(self) -> Iterator[Violation]:
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)

    def __str__(self):
        if not self.violations:
            return "valid"
        return "\n".join(str(violation) for violation in self.violations)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def kinds(self) -> FrozenSet[str]:
        return frozenset(violation.kind for violation in self.violations)


def validate_model(m: ModelTable) -> ValidationReport:
    """
    Check normalization, range and Assumption 2 (every x reachable from some theta).

    Diagnostics, not exceptions: every violation is listed with its coordinates.
    """
    violations = []
    probs = m.probs
    bad_cells = np.argwhere(~np.isfinite(probs) | (probs < 0.0) | (probs > 1.0))
    for t, i, j in bad_cells:
        violations.append(
            Violation(
                "range",
                (int(t), int(i), int(j)),
                f"p(x={m.space.x_labels[i]}, y={m.space.y_labels[j]} | theta={m.theta_labels[t]}) "
                f"= {probs[t, i, j]!r} is not in [0, 1]",
            )
        )
    sums = probs.sum(axis=(1, 2))
    for t in np.flatnonzero(~(np.abs(sums - 1.0) <= config.PROBABILITY_TOLERANCE)):
        violations.append(
            Violation(
                "normalization",
                (int(t),),
                f"row theta={m.theta_labels[t]} sums to {sums[t]!r}, not 1",
            )
        )
    reachable = (m.x_marginals > 0.0).any(axis=0)
    for i in np.flatnonzero(~reachable):
        violations.append(
            Violation(
                "assumption-2",
                (int(i),),
                f"x={m.space.x_labels[i]} has zero probability under every theta",
            )
        )
    return ValidationReport(tuple(violations))


def zero_pattern(m: ModelTable, q: PredictiveTable) -> ZeroPattern:
    """Exact zero sets of ``q``; no tolerance is applied."""
    mask = q.q == 0.0
    n_q = frozenset((int(i), int(j)) for i, j in np.argwhere(mask))
    theta_q = frozenset(
        t for t in range(m.size) if not np.any(m.probs[t][mask] > 0.0)
    )
    reachable = m.x_marginals > 0.0
    x_q = frozenset(
        i for i in range(m.space.k) if any(reachable[t, i] for t in theta_q)
    )
    return ZeroPattern(n_q, theta_q, x_q)


def restrict_model(
    m: ModelTable, theta_indices: Sequence[int], x_indices: Sequence[int]
) -> ModelTable:
    """Sub-table on the given parameter and data indices (all y are kept)."""
    theta_indices = sorted(theta_indices)
    x_indices = sorted(x_indices)
    values = None if m.theta_values is None else m.theta_values[theta_indices]
    return ModelTable(
        space=OutcomeSpace(
            tuple(m.space.x_labels[i] for i in x_indices), m.space.y_labels
        ),
        theta_labels=tuple(m.theta_labels[t] for t in theta_indices),
        probs=m.probs[np.ix_(theta_indices, x_indices, range(m.space.l))],
        theta_values=values,
    )


def _grid(space: Union[ModelTable, int]):
    if isinstance(space, ModelTable):
        return space.size, space.theta_labels
    if int(space) < 1:
        raise RejectedInput("a prior needs at least one grid point")
    return int(space), None


def point_mass(space: Union[ModelTable, int], t: int) -> Prior:
    """``delta_theta_t``."""
    size, labels = _grid(space)
    if not 0 <= t < size:
        raise RejectedInput(f"theta index {t} is outside the grid of size {size}")
    weights = np.zeros(size)
    weights[t] = 1.0
    return Prior(weights, labels)


def uniform_prior(space: Union[ModelTable, int]) -> Prior:
    size, labels = _grid(space)
    return Prior(np.full(size, 1.0 / size), labels)


def mix(a: Prior, b: Prior, lam: float) -> Prior:
    """``lam * a + (1 - lam) * b``, componentwise."""
    if not 0.0 <= lam <= 1.0:
        raise RejectedInput(f"mixture weight {lam!r} is not in [0, 1]")
    if len(a) != len(b):
        raise RejectedInput("cannot mix priors on grids of different sizes")
    if lam == 0.0:
        return b
    if lam == 1.0:
        return a
    return Prior(lam * a.weights + (1.0 - lam) * b.weights, a.labels or b.labels)
