import numpy as np
from pytest import approx, raises, warns

from lipsolve.builders import build_binomial_model
from lipsolve.exceptions import (
    FallbackRowWarning,
    RejectedInput,
    UndefinedConditional,
    ZeroMarginal,
)
from lipsolve.functionals import kl_risk, risk_profile
from lipsolve.model import Prior, point_mass, uniform_prior
from lipsolve.predictive import (
    DIRECT,
    LIMIT_FILLED,
    AnnealingSchedule,
    bayes_predictive,
    limit_predictive,
    plug_in_predictive,
    verify_limit_by_annealing,
)


def _endpoints(m):
    weights = np.zeros(m.size)
    weights[0] = weights[-1] = 0.5
    return Prior(weights)


def test_bayes_predictive_of_point_mass(example2):
    q = bayes_predictive(example2, point_mass(example2, 1))
    assert q.q == approx(np.full((3, 2), 0.5))


def test_bayes_predictive_examples(example1, example2):
    q = bayes_predictive(example2, uniform_prior(example2))
    assert q.q[2] == approx([0.5, 0.5], abs=1e-15)
    assert np.allclose(q.q.sum(axis=1), 1.0, rtol=0.0, atol=1e-12)
    q = bayes_predictive(example1, uniform_prior(example1))
    assert q.q[1, 1] == approx(0.5, abs=1e-12)


def test_bayes_predictive_needs_positive_marginals(example2):
    with raises(ZeroMarginal) as e:
        bayes_predictive(example2, point_mass(example2, 0))
    assert e.value.x_index == 2


def test_plug_in_predictive(example1):
    q = plug_in_predictive(example1, {0: 0, 1: 5, 2: 10})
    assert q.q[0].tolist() == [1.0, 0.0]
    assert q.q[2].tolist() == [0.0, 1.0]
    assert q.q[1] == approx([0.5, 0.5], abs=1e-15)


def test_plug_in_risk_at_middle_of_binomial():
    m = build_binomial_model(2, 1, (0.25, 0.5, 0.75))
    q = plug_in_predictive(m, {0: 0, 1: 1, 2: 2})
    risk = kl_risk(m, 1, q)
    assert 0.0 < risk < np.inf


def test_plug_in_undefined_conditional(example2):
    with raises(UndefinedConditional) as e:
        plug_in_predictive(example2, {0: 0, 1: 0, 2: 0})
    assert (e.value.x_index, e.value.theta_index) == (2, 0)
    with warns(FallbackRowWarning, match="x = 2"):
        q = plug_in_predictive(example2, {0: 0, 1: 0, 2: 0}, fallback=True)
    assert q.q[2].tolist() == [0.5, 0.5]


def test_plug_in_rejects_incomplete_maps(example2):
    with raises(RejectedInput):
        plug_in_predictive(example2, {0: 0, 1: 0})
    with raises(RejectedInput):
        plug_in_predictive(example2, {0: 0, 1: 0, 2: 5})


def test_limit_predictive_example1(example1):
    report = limit_predictive(example1, _endpoints(example1))
    q = report.final.q
    assert q[0].tolist() == [1.0, 0.0]
    assert q[2].tolist() == [0.0, 1.0]
    assert q[1] == approx([0.5, 0.5], abs=1e-12)
    assert report.flags == (DIRECT, LIMIT_FILLED, DIRECT)
    assert report.filled_rows == (1,)


def test_limit_risks_at_endpoints_do_not_depend_on_base(example1):
    skewed = np.linspace(1.0, 2.0, example1.size)
    for mu in (uniform_prior(example1), Prior(skewed / skewed.sum())):
        profile = risk_profile(example1, limit_predictive(example1, _endpoints(example1), mu).final)
        assert profile[0] == 0.0
        assert profile[example1.size - 1] == 0.0


def test_limit_predictive_example2(example2):
    report = limit_predictive(example2, point_mass(example2, 0), uniform_prior(example2))
    assert report.final.q[2] == approx([0.5, 0.5], abs=1e-15)
    assert report.final.q[0] == approx([2 / 3, 1 / 3], abs=1e-15)
    assert report.flags == (DIRECT, DIRECT, LIMIT_FILLED)


def test_limit_equals_bayes_for_full_support(example2):
    prior = Prior([0.3, 0.7])
    report = limit_predictive(example2, prior)
    assert np.array_equal(report.final.q, bayes_predictive(example2, prior).q)
    assert set(report.flags) == {DIRECT}


def test_limit_base_needs_full_support(example2):
    with raises(ZeroMarginal):
        limit_predictive(example2, uniform_prior(example2), point_mass(example2, 0))


def test_annealing_schedule():
    schedule = AnnealingSchedule()
    assert schedule.floors[0] == 0.5
    assert schedule.floors[-1] == 2.0**-20
    assert schedule.tolerance == 1e-5
    for floors in ((), (0.5, 0.5), (0.25, 0.5), (2.0,), (0.0,)):
        with raises(RejectedInput):
            AnnealingSchedule(floors)
    with raises(RejectedInput):
        AnnealingSchedule((0.5,), tolerance=0.0)


def test_verify_limit_example1(example1):
    report = verify_limit_by_annealing(example1, _endpoints(example1))
    assert report.converged
    assert report.max_deviation <= 1e-5
    assert len(report.trace) == 20
    deviations = [deviation for _, deviation in report.trace]
    assert deviations[-1] < deviations[0]
    assert report.flags == (DIRECT, LIMIT_FILLED, DIRECT)


def test_verify_limit_example2(example2):
    report = verify_limit_by_annealing(example2, point_mass(example2, 0))
    assert report.converged
    assert report.final.q[2] == approx([0.5, 0.5])


def test_verify_limit_full_support_deviation_shrinks(example2):
    report = verify_limit_by_annealing(example2, Prior([0.3, 0.7]))
    for floor, deviation in report.trace:
        assert deviation <= floor


def test_verify_limit_flags_slow_schedules(example1):
    report = verify_limit_by_annealing(
        example1, _endpoints(example1), schedule=AnnealingSchedule((0.5, 0.25))
    )
    assert not report.converged
    assert report.max_deviation > 1e-5
