import functools
import math
from abc import ABCMeta, abstractmethod
from typing import Any

import numpy as np

from lipsolve.exceptions import DeflateError, InflateError

INFINITY = "inf"


def validator(fn):
    fn_name = fn.func_name if hasattr(fn, "func_name") else fn.__name__
    if fn_name == "inflate":
        exc_class = InflateError
    elif fn_name == "deflate":
        exc_class = DeflateError
    else:
        raise ValueError("Unknown Property method " + fn_name)

    @functools.wraps(fn)
    def _validator(self, value, obj=None, rethrow=True):
        if rethrow:
            try:
                return fn(self, value)
            except Exception as e:
                raise exc_class(self.name, self.owner, str(e), obj) from e
        else:
            # For ListProperty items, where the list reports the error.
            return fn(self, value)

    return _validator


class Property(metaclass=ABCMeta):
    """
    Base class for document fields.

    :param required: Marks the field as required. Defaults to ``False``.
    :type required: :class:`bool`
    :param default: A default value or callable that returns one, used when the
                    field is absent from a document.
    :param json_key: The key this field maps to in the JSON file.
                     Defaults to the attribute name.
    :type json_key: :class:`str`
    """

    def __init__(self, required=False, default=None, json_key=None):
        if default is not None and required:
            raise ValueError(
                "The arguments `required` and `default` are mutually exclusive."
            )
        self.required = required
        self.default = default
        self.has_default = self.default is not None
        self.json_key = json_key
        self.name = None
        self.owner = None

    def __set_name__(self, owner, name):
        self.name = name
        self.owner = owner

    def default_value(self):
        """
        Generate a default value

        :return: the value
        """
        if self.has_default:
            if hasattr(self.default, "__call__"):
                return self.default()
            return self.default
        raise ValueError("No default value specified")

    def get_json_key(self, attribute_name):
        return self.json_key or attribute_name

    @abstractmethod
    def inflate(self, value: Any, obj=None, rethrow=True) -> Any:
        pass

    @abstractmethod
    def deflate(self, value: Any, obj=None, rethrow=True) -> Any:
        pass


class StringProperty(Property):
    """
    Stores a string

    :param choices: the accepted values; any string when ``None``
    """

    def __init__(self, choices=None, **kwargs):
        super().__init__(**kwargs)
        self.choices = None if choices is None else tuple(choices)

    def normalize(self, value):
        if not isinstance(value, str):
            raise ValueError(f"string expected, got {value!r}")
        if self.choices is not None and value not in self.choices:
            raise ValueError(f"Invalid choice: {value}")
        return value

    @validator
    def inflate(self, value):
        return self.normalize(value)

    @validator
    def deflate(self, value):
        return self.normalize(value)


class IntegerProperty(Property):
    @validator
    def inflate(self, value):
        if isinstance(value, bool) or int(value) != value:
            raise ValueError(f"integer expected, got {value!r}")
        return int(value)

    @validator
    def deflate(self, value):
        return int(value)


class FloatProperty(Property):
    """
    Stores a finite floating point value
    """

    @validator
    def inflate(self, value):
        if isinstance(value, (bool, str)):
            raise ValueError(f"number expected, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"finite number expected, got {value!r}")
        return value

    @validator
    def deflate(self, value):
        return float(value)


class ExtendedRealProperty(Property):
    """
    A value in ``[0, +inf]``; infinity is written as the string ``"inf"``.
    """

    @validator
    def inflate(self, value):
        if value == INFINITY:
            return math.inf
        if isinstance(value, (bool, str)):
            raise ValueError(f"number or {INFINITY!r} expected, got {value!r}")
        value = float(value)
        if math.isnan(value) or value < 0.0:
            raise ValueError(f"nonnegative value expected, got {value!r}")
        return value

    @validator
    def deflate(self, value):
        value = float(value)
        if math.isnan(value) or value < 0.0:
            raise ValueError(f"nonnegative value expected, got {value!r}")
        return INFINITY if math.isinf(value) else value


class BooleanProperty(Property):
    @validator
    def inflate(self, value):
        if not isinstance(value, bool):
            raise ValueError(f"true or false expected, got {value!r}")
        return value

    @validator
    def deflate(self, value):
        return bool(value)


class LabelsProperty(Property):
    """
    An ordered list of unique, non-empty strings, kept as a tuple.
    """

    def normalize(self, value):
        if isinstance(value, str) or not hasattr(value, "__iter__"):
            raise ValueError(f"list of labels expected, got {value!r}")
        labels = tuple(value)
        if not labels:
            raise ValueError("at least one label is required")
        for label in labels:
            if not isinstance(label, str) or not label:
                raise ValueError(f"labels must be non-empty strings, got {label!r}")
        seen = set()
        for label in labels:
            if label in seen:
                raise ValueError(f"duplicate label '{label}'")
            seen.add(label)
        return labels

    @validator
    def inflate(self, value):
        return self.normalize(value)

    @validator
    def deflate(self, value):
        return list(self.normalize(value))


class ArrayProperty(Property):
    """
    A rectangular array of finite numbers with a fixed number of dimensions,
    inflated into a read-only float :class:`numpy.ndarray`.

    Range checks are left to the domain types so that a loaded table with bad
    probabilities can still be diagnosed.

    :param allow_infinite: accept ``+inf`` entries, written as ``"inf"``
    """

    def __init__(self, ndim=1, allow_infinite=False, **kwargs):
        if ndim < 1:
            raise ValueError("`ndim` must be at least 1")
        self.ndim = ndim
        self.allow_infinite = allow_infinite
        super().__init__(**kwargs)

    def _array(self, value):
        if isinstance(value, str):
            raise ValueError(f"array expected, got {value!r}")
        if self.allow_infinite:
            value = np.array(value, dtype=object)
            value[value == INFINITY] = math.inf
        array = np.array(value, dtype=float)
        if array.size == 0:
            array = np.zeros((0,) * self.ndim)
        if array.ndim != self.ndim:
            raise ValueError(
                f"{self.ndim}-dimensional array expected, got shape {array.shape}"
            )
        finite = np.isfinite(array)
        if self.allow_infinite:
            finite |= np.isposinf(array)
        if not np.all(finite):
            raise ValueError("array entries must be finite numbers")
        array.setflags(write=False)
        return array

    @validator
    def inflate(self, value):
        return self._array(value)

    @validator
    def deflate(self, value):
        array = self._array(value)
        if self.allow_infinite and np.isposinf(array).any():
            array = array.astype(object)
            array[np.isposinf(array.astype(float))] = INFINITY
        return array.tolist()


class ListProperty(Property):
    """
    Stores a list of items of one property type.
    """

    def __init__(self, base_property, **kwargs):
        if not isinstance(base_property, Property):
            raise TypeError("Expecting lipsolve Property")
        if isinstance(base_property, ListProperty):
            raise TypeError("Cannot have nested ListProperty")
        if base_property.required or base_property.has_default:
            raise ValueError("ListProperty base_property cannot be required or defaulted")
        self.base_property = base_property
        super().__init__(**kwargs)

    @validator
    def inflate(self, value):
        if isinstance(value, str):
            raise ValueError(f"list expected, got {value!r}")
        return tuple(self.base_property.inflate(item, rethrow=False) for item in value)

    @validator
    def deflate(self, value):
        return [self.base_property.deflate(item, rethrow=False) for item in value]
