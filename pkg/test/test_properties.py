import math

import numpy as np
from pytest import mark, raises

from lipsolve.exceptions import DeflateError, InflateError, RequiredProperty
from lipsolve.properties import (
    ArrayProperty,
    BooleanProperty,
    ExtendedRealProperty,
    FloatProperty,
    IntegerProperty,
    LabelsProperty,
    ListProperty,
    StringProperty,
    validator,
)
from lipsolve.schema import Document, RiskProfileDocument


class Settings(Document):
    name = StringProperty(required=True)
    algorithm = StringProperty(choices=("frank-wolfe", "exp-gradient"))
    iterations = IntegerProperty(default=0)
    floor = FloatProperty(json_key="floor_weight")
    converged = BooleanProperty()
    labels = LabelsProperty()
    weights = ArrayProperty(ndim=1)


def test_required_and_default_are_exclusive():
    with raises(ValueError):
        StringProperty(required=True, default="x")


def test_validator_rejects_other_methods():
    with raises(ValueError, match="Unknown Property method"):

        @validator
        def normalize(self, value):
            return value


def test_string_choices():
    with raises(InflateError, match="Invalid choice"):
        Settings.inflate({"name": "run", "algorithm": "newton"})
    with raises(DeflateError):
        Settings.deflate({"name": "run", "algorithm": "newton"})


def test_defaults_and_json_keys():
    settings = Settings.inflate({"name": "run", "floor_weight": 0.25})
    assert settings.iterations == 0
    assert settings.floor == 0.25
    assert settings.converged is None
    assert settings.to_dict() == {"name": "run", "iterations": 0, "floor_weight": 0.25}


def test_required_property():
    with raises(RequiredProperty, match="'name'"):
        Settings.inflate({"iterations": 3})
    with raises(RequiredProperty):
        Settings(iterations=3).to_dict()


@mark.parametrize(
    "data",
    [
        {"name": "run", "iterations": 2.5},
        {"name": "run", "iterations": True},
        {"name": "run", "floor_weight": "0.5"},
        {"name": "run", "floor_weight": float("inf")},
        {"name": "run", "converged": "yes"},
        {"name": "run", "labels": "abc"},
        {"name": "run", "labels": ["a", "a"]},
        {"name": "run", "labels": []},
        {"name": "run", "weights": [[0.5, 0.5]]},
        {"name": "run", "weights": ["a"]},
        {"name": 3},
    ],
)
def test_inflate_rejects(data):
    with raises(InflateError):
        Settings.inflate(data)


def test_inflate_error_names_field_and_line():
    with raises(InflateError) as e:
        Settings.inflate({"name": "run", "labels": ["a", "a"]}, {"labels": 4})
    assert e.value.property_name == "labels"
    assert e.value.line == 4
    assert "line 4" in str(e.value)
    assert "duplicate label 'a'" in str(e.value)


def test_array_property_is_read_only():
    settings = Settings.inflate({"name": "run", "weights": [0.25, 0.75]})
    assert isinstance(settings.weights, np.ndarray)
    with raises(ValueError):
        settings.weights[0] = 1.0
    assert Settings.inflate({"name": "run", "weights": []}).weights.shape == (0,)


def test_extended_reals():
    prop = ExtendedRealProperty()
    assert prop.inflate("inf") == math.inf
    assert prop.inflate(0.5) == 0.5
    assert prop.deflate(math.inf) == "inf"
    for value in ("-inf", -1.0, float("nan"), True):
        with raises(InflateError):
            prop.inflate(value)


def test_list_property():
    with raises(TypeError):
        ListProperty(ListProperty(FloatProperty()))
    with raises(ValueError):
        ListProperty(FloatProperty(required=True))
    profile = RiskProfileDocument.inflate(
        {"theta_labels": ["0", "0.5", "1"], "risks": [0.0, "inf", 0.0]}
    )
    assert profile.risks == (0.0, math.inf, 0.0)
    assert profile.to_dict()["risks"] == [0.0, "inf", 0.0]
    with raises(InflateError):
        RiskProfileDocument.inflate({"theta_labels": ["0"], "risks": ["nan"]})


def test_inflate_needs_an_object():
    with raises(InflateError, match="JSON object expected"):
        Settings.inflate([1, 2])


def test_array_property_with_infinite_entries():
    prop = ArrayProperty(ndim=2, allow_infinite=True)
    values = np.array([[0.5, math.inf], [0.1, 0.2]])
    assert prop.deflate(values) == [[0.5, "inf"], [0.1, 0.2]]
    inflated = prop.inflate([[0.5, "inf"], [0.1, 0.2]])
    assert inflated[0, 1] == math.inf
    assert inflated[1].tolist() == [0.1, 0.2]
    with raises(InflateError):
        prop.inflate([[0.5, "nan"]])
    with raises(DeflateError):
        ArrayProperty(ndim=2).deflate(values)
