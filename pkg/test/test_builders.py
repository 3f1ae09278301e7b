import math

import numpy as np
from pytest import approx, mark, raises

from lipsolve.builders import (
    binomial_mle_map,
    binomial_pmf,
    build_binomial_model,
    build_example1_model,
    build_example2_model,
    example2_predictive,
    theta_label,
)
from lipsolve.exceptions import RejectedInput
from lipsolve.model import validate_model


def test_binomial_pmf_rows():
    pmf = binomial_pmf(3, [0.0, 0.5, 1.0])
    assert pmf[0].tolist() == [1.0, 0.0, 0.0, 0.0]
    assert pmf[2].tolist() == [0.0, 0.0, 0.0, 1.0]
    assert pmf[1] == approx([1 / 8, 3 / 8, 3 / 8, 1 / 8], abs=1e-15)


def test_binomial_model_layout(grid):
    m = build_binomial_model(2, 1, grid)
    assert m.space.x_labels == ("0", "1", "2")
    assert m.space.y_labels == ("0", "1")
    assert m.theta_labels == ("0", "0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9", "1")
    assert m.probs.shape == (11, 3, 2)
    assert validate_model(m).is_valid
    theta = 0.3
    expected = 2 * theta * (1 - theta) * theta
    assert m.probs[3, 1, 1] == approx(expected, rel=1e-12)
    assert list(m.theta_values) == list(grid)


def test_binomial_endpoints_are_exact_zeros(grid):
    m = build_binomial_model(5, 5, grid)
    assert np.count_nonzero(m.probs[0]) == 1
    assert m.probs[0, 0, 0] == 1.0
    assert m.probs[-1, 5, 5] == 1.0


def test_no_past_data_has_a_single_x():
    m = build_binomial_model(0, 4, (0.25, 0.75))
    assert m.space.k == 1
    assert m.probs[:, 0, :].sum(axis=1) == approx([1.0, 1.0])


@mark.parametrize(
    "n_past, m_future, theta_grid",
    [
        (-1, 1, (0.5,)),
        (0, 0, (0.5,)),
        (1.5, 1, (0.5,)),
        (0, 1, ()),
        (0, 1, (0.5, 0.5)),
        (0, 1, (0.2, float("nan"))),
        (0, 1, (0.0, 1.01)),
    ],
)
def test_binomial_model_rejects(n_past, m_future, theta_grid):
    with raises(RejectedInput):
        build_binomial_model(n_past, m_future, theta_grid)


def test_theta_labels_distinguish_close_values():
    assert theta_label(0.1) == "0.1"
    assert theta_label(1 / 3) == "0.3333333333"
    with raises(RejectedInput, match="too close"):
        build_binomial_model(0, 1, (0.1, 0.1 + 1e-13))


def test_example1_needs_the_endpoints():
    with raises(RejectedInput, match="theta = 1"):
        build_example1_model((0.0, 0.5))
    m = build_example1_model((0.0, 0.5, 1.0))
    assert m.space.k == 3 and m.space.l == 2


def test_example2_layout():
    m = build_example2_model(0.5)
    assert validate_model(m).is_valid
    assert m.probs[0, 2].tolist() == [0.0, 0.0]
    assert m.probs[1].tolist() == [[0.125, 0.125], [0.125, 0.125], [0.25, 0.25]]
    for eps in (0.0, 1.0, -0.1, math.nan):
        with raises(RejectedInput):
            build_example2_model(eps)


def test_example2_predictive_rows():
    q = example2_predictive()
    assert q.q[0] == approx([2 / 3, 1 / 3])
    assert q.q[1] == approx([1 / 3, 2 / 3])
    assert q.q[2] == approx([1 / 3, 2 / 3])


def test_mle_map(grid):
    assert binomial_mle_map(2, grid) == {0: 0, 1: 5, 2: 10}
    assert binomial_mle_map(3, (0.0, 0.5, 1.0)) == {0: 0, 1: 1, 2: 1, 3: 2}
    with raises(RejectedInput):
        binomial_mle_map(0, grid)
