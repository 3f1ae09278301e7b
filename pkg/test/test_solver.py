import json
import math

import numpy as np
from pytest import approx, mark, raises

from lipsolve import config
from lipsolve.builders import build_binomial_model
from lipsolve.exceptions import ModelValidationFailed, RejectedInput
from lipsolve.functionals import conditional_mutual_information, lip_gradient
from lipsolve.model import ModelTable, OutcomeSpace, Prior, point_mass, uniform_prior
from lipsolve.schema import SolverResultDocument
from lipsolve.solver import (
    DqFunctional,
    LatentInformation,
    SolverConfig,
    anneal_lip,
    certificate,
    minimax_predictive,
    optimize,
    solve_lip,
)
from lipsolve.util import dump_json


def _check_equalizer(m, result):
    risks = lip_gradient(m, result.prior)
    assert risks.max() <= result.objective + result.certificate_gap + 1e-9
    for t in np.flatnonzero(result.prior.weights > 1e-6):
        assert risks[t] == approx(result.objective, abs=1e-4)


def test_solver_config_defaults():
    cfg = SolverConfig()
    assert cfg.algorithm == config.ALGORITHM
    assert cfg.floor == 0.0
    assert cfg.max_iterations == config.MAX_ITERATIONS
    assert cfg.certificate_tolerance == 1e-8
    assert SolverConfig(algorithm="eg").algorithm == "exp-gradient"
    assert SolverConfig(algorithm="fw").with_floor(0.25).floor == 0.25


@mark.parametrize(
    "options",
    [
        {"algorithm": "newton"},
        {"floor": 0.5},
        {"floor": -0.1},
        {"max_iterations": 0},
        {"max_iterations": 2.5},
        {"certificate_tolerance": 0.0},
        {"step_size": -1.0},
    ],
)
def test_solver_config_rejects(options):
    with raises(RejectedInput):
        SolverConfig(**options)


def test_endpoint_capacity(coin):
    result = solve_lip(coin)
    assert result.converged
    assert result.objective == approx(math.log(2), abs=1e-6)
    assert result.certificate_gap <= 1e-6
    assert result.prior.weights[0] >= 0.499
    assert result.prior.weights[-1] >= 0.499
    assert result.support_size == 2
    assert result.prior.labels == coin.theta_labels
    _check_equalizer(coin, result)


def test_objective_matches_prior(coin, example2):
    for m in (coin, example2):
        result = solve_lip(m)
        assert result.objective == approx(
            conditional_mutual_information(m, result.prior), abs=1e-12
        )
        assert result.minimax_gap >= 0.0
        assert result.certificate_gap >= 0.0


def test_trace_never_descends(coin):
    result = solve_lip(coin)
    assert result.trace.shape == (result.iterations + 1, 2)
    objectives = result.trace[:, 0]
    assert np.all(np.diff(objectives) >= -1e-10)
    assert result.trace[-1, 1] <= 1e-8


def test_single_parameter_model():
    m = build_binomial_model(1, 1, (0.4,))
    result = solve_lip(m)
    assert result.prior.weights.tolist() == [1.0]
    assert result.objective == approx(0.0, abs=1e-15)
    assert result.certificate_gap == approx(0.0, abs=1e-15)
    assert result.iterations == 0
    assert result.converged


def test_example2_equalizer(example2):
    result = solve_lip(example2)
    assert result.converged
    assert result.symmetrized is None
    assert 0.0 < result.objective <= math.log(2)
    _check_equalizer(example2, result)


def test_engines_agree(example2):
    fw = solve_lip(example2, SolverConfig(algorithm="fw"))
    eg = solve_lip(example2, SolverConfig(algorithm="eg"))
    assert eg.algorithm == "exp-gradient"
    assert eg.objective == approx(fw.objective, abs=1e-6)


def test_exp_gradient_on_endpoint_problem(coin):
    result = solve_lip(coin, SolverConfig(algorithm="exp-gradient"))
    assert result.objective == approx(math.log(2), abs=1e-6)


def test_non_convergence_is_reported(coin):
    result = solve_lip(coin, SolverConfig(max_iterations=1))
    assert not result.converged
    assert result.iterations == 1
    assert result.certificate_gap > 1e-8


def test_floor_is_respected(coin):
    result = solve_lip(coin, SolverConfig(floor=0.1))
    assert result.converged
    assert result.floor == 0.1
    assert np.all(result.prior.weights >= 0.1 / coin.size - 1e-15)
    assert result.unfloored_prior.weights[1:-1] == approx(np.zeros(coin.size - 2), abs=1e-9)
    assert result.base.weights == approx(np.full(coin.size, 1 / coin.size))


def test_symmetrized_prior_of_mirror_symmetric_model(coin):
    result = solve_lip(coin)
    assert result.symmetrized is not None
    assert result.symmetrized.weights == approx(result.symmetrized.weights[::-1])
    assert result.symmetrized_objective >= result.objective - 1e-10


def test_solver_rejects_invalid_models():
    probs = np.array([[[0.5], [0.0]]])
    m = ModelTable(OutcomeSpace(("0", "1"), ("0",)), ("a",), probs)
    with raises(ModelValidationFailed):
        solve_lip(m)


def test_initial_prior_must_match(coin):
    with raises(RejectedInput):
        solve_lip(coin, initial=uniform_prior(3))


def test_anneal_lip(coin):
    results = anneal_lip(coin)
    assert len(results) == 19
    assert [r.floor for r in results] == [2.0**-k for k in range(2, 21)]
    assert all(r.converged for r in results)
    objectives = [r.objective for r in results]
    assert np.all(np.diff(objectives) >= -1e-10)
    final = results[-1]
    assert final.prior.weights[0] >= 0.499
    assert final.prior.weights[-1] >= 0.499
    assert final.objective == approx(math.log(2), abs=1e-5)


def test_anneal_matches_full_support_optimum(example2):
    direct = solve_lip(example2)
    final = anneal_lip(example2)[-1]
    assert 0.5 * np.abs(final.prior.weights - direct.prior.weights).sum() <= 1e-6


def test_anneal_rejects_bad_floors(coin):
    for floors in ((), (0.5,), (0.1, 0.2), (0.0,)):
        with raises(RejectedInput):
            anneal_lip(coin, floors)


def test_certificate():
    m = build_binomial_model(0, 1, (0.2, 0.8))
    assert certificate(m, point_mass(m, 0)).gap > 0.0
    result = solve_lip(m)
    cert = certificate(m, result.prior)
    assert cert.gap <= 1e-6
    assert cert.bayes_risk_value == approx(result.objective, abs=1e-12)
    assert cert.bayes_risk_value <= cert.sup_risk


def test_certificate_of_uniform_prior(example2):
    cert = certificate(example2, uniform_prior(example2))
    assert cert.gap >= 0.0
    assert cert.sup_risk >= cert.bayes_risk_value


def test_minimax_predictive(coin, example2):
    minimax = minimax_predictive(coin)
    assert minimax.predictive.q[0] == approx([0.5, 0.5], abs=1e-6)
    assert minimax.annealed == ()
    assert minimax.value == approx(math.log(2), abs=1e-6)

    minimax = minimax_predictive(example2)
    assert minimax.certificate.gap <= 1e-6
    assert minimax.value == approx(minimax.result.objective, abs=1e-12)


def test_minimax_predictive_of_single_parameter():
    m = build_binomial_model(2, 1, (0.3,))
    minimax = minimax_predictive(m)
    assert minimax.value == approx(0.0, abs=1e-15)
    assert minimax.predictive.q == approx(np.tile([0.7, 0.3], (3, 1)))


@mark.slow
def test_large_future_sample_gives_full_support(grid):
    m = build_binomial_model(0, 1000, grid)
    result = solve_lip(m)
    assert result.converged
    assert np.all(result.prior.weights > 1e-3)
    assert result.symmetrized_objective == approx(result.objective, abs=1e-6)


def _lone_reacher_model():
    """Only c reaches x = 2, with tiny probability; the optimum drains c."""
    probs = np.array(
        [
            [[0.5, 0.0], [0.5, 0.0], [0.0, 0.0]],
            [[0.0, 0.5], [0.0, 0.5], [0.0, 0.0]],
            [[0.25, 0.25], [0.25, 0.25 - 1e-7], [1e-7, 0.0]],
        ]
    )
    return ModelTable(OutcomeSpace(("0", "1", "2"), ("0", "1")), ("a", "b", "c"), probs)


def test_floor_zero_drains_a_lone_reacher():
    m = _lone_reacher_model()
    result = solve_lip(m)
    assert result.converged
    assert result.objective == approx(math.log(2), abs=1e-6)
    assert result.prior.weights[:2] == approx([0.5, 0.5], abs=1e-4)
    assert result.prior.weights[2] > 0.0
    assert np.all(np.isfinite(result.trace))
    assert minimax_predictive(m).value == approx(result.objective, abs=1e-5)


def test_one_sided_gradient_at_an_empty_row():
    m = _lone_reacher_model()
    objective = LatentInformation(m.probs)
    w = np.array([0.5, 0.5, 0.0])
    g = objective.grad(w)
    assert np.all(np.isfinite(g))
    h = 1e-6
    step = np.array([-1.0, 0.0, 1.0])
    numeric = (objective.f(w + h * step) - objective.f(w)) / h
    assert numeric == approx(g[2] - g[0], abs=1e-5)

    q = np.full((3, 2), 0.5)
    g = DqFunctional(m.probs, q).grad(w)
    assert np.all(np.isfinite(g))


def _disjoint_outcomes_model():
    probs = np.zeros((3, 1, 3))
    for t in range(3):
        probs[t, 0, t] = 1.0
    return ModelTable(OutcomeSpace(("0",), ("0", "1", "2")), ("a", "b", "c"), probs)


def test_infinite_gap_is_reported_and_written():
    m = _disjoint_outcomes_model()
    result = solve_lip(m, SolverConfig(max_iterations=1), initial=point_mass(m, 0))
    assert not result.converged
    assert result.certificate_gap == math.inf
    assert result.minimax_gap == math.inf
    assert result.trace[0, 1] == math.inf
    assert not np.isnan(result.trace).any()

    document = SolverResultDocument.from_object(result, m.theta_labels, trace=True)
    data = json.loads(dump_json(document.to_dict()))
    assert data["certificate_gap"] == "inf"
    assert data["trace"][-1][1] == "inf"
    loaded = SolverResultDocument.inflate(data)
    assert loaded.certificate_gap == math.inf
    assert loaded.trace[-1, 1] == math.inf


def test_disjoint_outcomes_reach_capacity():
    m = _disjoint_outcomes_model()
    result = solve_lip(m, initial=point_mass(m, 0))
    assert result.converged
    assert result.objective == approx(math.log(3), abs=1e-6)


def test_infinite_starting_objective_is_rejected():
    m = _disjoint_outcomes_model()
    q = np.array([[1.0, 0.0, 0.0]])
    with raises(RejectedInput):
        optimize(DqFunctional(m.probs, q), SolverConfig(floor=0.1))


@mark.slow
def test_support_grows_with_future_sample(grid):
    small = solve_lip(build_binomial_model(0, 1, grid))
    large = solve_lip(build_binomial_model(0, 100, grid))
    assert small.converged and large.converged
    assert small.support_size == 2
    assert large.support_size > small.support_size


@mark.slow
def test_past_data_moves_weight_towards_the_middle(grid):
    middle = [grid.index(theta) for theta in (0.4, 0.5, 0.6)]
    without = solve_lip(build_binomial_model(0, 5, grid))
    with_data = solve_lip(build_binomial_model(100, 5, grid))
    assert with_data.prior.weights[middle].sum() > without.prior.weights[middle].sum()
