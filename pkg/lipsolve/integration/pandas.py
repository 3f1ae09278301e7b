"""
Provides integration with `pandas <https://pandas.pydata.org/>`_.

Example:

    >>> from lipsolve.builders import build_binomial_model
    >>> from lipsolve.solver import solve_lip
    >>> from lipsolve.integration.pandas import prior_frame
    >>> m = build_binomial_model(0, 1, (0.0, 0.5, 1.0))
    >>> prior_frame(solve_lip(m).prior, m.theta_labels)
      theta_label  weight
    0           0     0.5
    1         0.5     0.0
    2           1     0.5

"""

from pandas import DataFrame

from lipsolve.util import atomic_write

FLOAT_FORMAT = "%.17g"


def prior_frame(prior, theta_labels=None):
    labels = theta_labels or prior.labels or tuple(str(t) for t in range(len(prior)))
    return DataFrame({"theta_label": list(labels), "weight": prior.weights})


def risk_profile_frame(profile):
    """One row per parameter; infinite risks are written as ``inf``."""
    return DataFrame({"theta_label": list(profile.theta_labels), "risk": profile.values})


def risk_comparison_frame(report):
    """Rows of a :class:`~lipsolve.dominator.DominanceReport` of dominating against input."""
    return DataFrame(
        [(row.theta_label, row.r2, row.r1, row.relation) for row in report],
        columns=["theta_label", "risk_q", "risk_dominating", "relation"],
    )


def sweep_frame(entries):
    """
    Long format ``N, M, theta_label, weight`` for plotting priors side by side.

    :param entries: iterable of ``(n_past, m_future, theta_labels, prior)``
    """
    rows = [
        (n_past, m_future, label, float(weight))
        for n_past, m_future, labels, prior in entries
        for label, weight in zip(labels, prior.weights)
    ]
    return DataFrame(rows, columns=["N", "M", "theta_label", "weight"])


def summary_frame(entries):
    """
    One row per solved pair.

    :param entries: iterable of ``(n_past, m_future, result, tv_uniform, tv_jeffreys)``
    """
    return DataFrame(
        [
            (
                n_past,
                m_future,
                result.objective,
                result.certificate_gap,
                result.support_size,
                result.iterations,
                result.converged,
                tv_uniform,
                tv_jeffreys,
            )
            for n_past, m_future, result, tv_uniform, tv_jeffreys in entries
        ],
        columns=[
            "N",
            "M",
            "objective",
            "certificate_gap",
            "support_size",
            "iterations",
            "converged",
            "tv_uniform",
            "tv_jeffreys",
        ],
    )


def to_csv(frame, path=None):
    """CSV text of ``frame``; written atomically to ``path`` when given."""
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    if path is not None:
        atomic_write(path, text)
    return text
