import json

import numpy as np
from pytest import raises

from lipsolve import config
from lipsolve.builders import build_binomial_model, example2_predictive
from lipsolve.exceptions import InflateError, ModelValidationFailed, RequiredProperty
from lipsolve.io import (
    load_model,
    load_predictive,
    load_prior,
    save_model,
    save_predictive,
    save_prior,
    write_document,
)
from lipsolve.model import Prior
from lipsolve.predictive import verify_limit_by_annealing
from lipsolve.schema import LimitReportDocument, SolverResultDocument
from lipsolve.solver import solve_lip
from lipsolve.util import dump_json, key_lines, parse_int_pair


def test_model_file_keeps_every_value(tmp_path, example2):
    path = tmp_path / "example2.json"
    save_model(example2, path)
    loaded = load_model(path)
    assert loaded.theta_labels == example2.theta_labels
    assert loaded.space == example2.space
    assert np.array_equal(loaded.probs, example2.probs)
    assert loaded.theta_values is None


def test_model_files_are_byte_identical(tmp_path, grid):
    m = build_binomial_model(3, 2, grid)
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    save_model(m, first)
    save_model(build_binomial_model(3, 2, grid), second)
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text().endswith("}\n")
    data = json.loads(first.read_text())
    assert list(data) == ["x_labels", "y_labels", "theta_labels", "theta_values", "probs"]


def test_invalid_model_is_reported(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(
        json.dumps(
            {
                "x_labels": ["0", "1"],
                "y_labels": ["0"],
                "theta_labels": ["a"],
                "probs": [[[0.75], [0.0]]],
            }
        )
    )
    with raises(ModelValidationFailed) as e:
        load_model(path)
    assert e.value.report.kinds() == {"normalization", "assumption-2"}
    assert str(path) in str(e.value)
    m = load_model(path, validate=False)
    assert m.probs[0, 0, 0] == 0.75


def test_malformed_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "x_labels": ["0"],\n  "y_labels": [\n}\n')
    with raises(InflateError) as e:
        load_model(path)
    assert e.value.line is not None


def test_shape_mismatch_points_at_probs(tmp_path):
    path = tmp_path / "shape.json"
    path.write_text(
        '{\n  "x_labels": ["0", "1"],\n  "y_labels": ["0"],\n  "theta_labels": ["a"],\n'
        '  "probs": [[[1.0]]]\n}\n'
    )
    with raises(InflateError) as e:
        load_model(path)
    assert e.value.property_name == "probs"
    assert e.value.line == 5


def test_missing_field(tmp_path):
    path = tmp_path / "missing.json"
    path.write_text('{"x_labels": ["0"], "y_labels": ["0"], "probs": [[[1.0]]]}')
    with raises(RequiredProperty):
        load_model(path)


def test_prior_and_predictive_files(tmp_path, example2_q):
    prior = Prior([0.25, 0.75], ("theta1", "theta2"))
    save_prior(prior, tmp_path / "prior.json")
    loaded = load_prior(tmp_path / "prior.json")
    assert loaded.labels == prior.labels
    assert loaded.weights.tolist() == [0.25, 0.75]

    save_predictive(example2_q, tmp_path / "q.json")
    q = load_predictive(tmp_path / "q.json")
    assert q.space == example2_q.space
    assert np.array_equal(q.q, example2_q.q)

    (tmp_path / "bad_prior.json").write_text('{"weights": [0.5, 0.25]}')
    with raises(InflateError, match="weights"):
        load_prior(tmp_path / "bad_prior.json")


def test_solver_result_document(tmp_path, coin):
    result = solve_lip(coin)
    document = SolverResultDocument.from_object(
        result, coin.theta_labels, generator=config.USER_AGENT, trace=True
    )
    write_document(document, tmp_path / "result.json")
    data = json.loads((tmp_path / "result.json").read_text())
    assert data["generator"].startswith("lipsolve/v")
    assert data["algorithm"] == "frank-wolfe"
    assert data["converged"] is True
    assert len(data["weights"]) == coin.size
    assert len(data["trace"][0]) == 2
    assert "symmetrized_weights" in data


def test_limit_report_document(example2):
    report = verify_limit_by_annealing(example2, Prior([1.0, 0.0]))
    data = LimitReportDocument.from_object(report).to_dict()
    assert data["flags"] == ["direct", "direct", "limit-filled"]
    assert len(data["floors"]) == len(config.ANNEAL_FLOORS)
    assert data["converged"] is True


def test_dump_json_is_stable():
    assert dump_json({"b": 0.1, "a": [1e-300, 2.0]}) == (
        '{\n  "b": 0.1,\n  "a": [\n    1e-300,\n    2.0\n  ]\n}\n'
    )
    with raises(ValueError):
        dump_json({"a": float("inf")})


def test_key_lines():
    text = '{\n  "x_labels": ["0"],\n  "probs": [\n    1\n  ]\n}'
    assert key_lines(text) == {"x_labels": 2, "probs": 3}


def test_parse_int_pair():
    assert parse_int_pair("5, 100") == (5, 100)
    with raises(ValueError):
        parse_int_pair("5")
    with raises(ValueError):
        parse_int_pair("a,b")
