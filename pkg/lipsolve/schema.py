"""
Declarative JSON documents for models, priors, predictive tables and results.

A document class lists its fields as :class:`~lipsolve.properties.Property` class
attributes. Field order in the class body is the key order in written files.
"""

from lipsolve.exceptions import InflateError, RejectedInput, RequiredProperty
from lipsolve.properties import (
    ArrayProperty,
    BooleanProperty,
    ExtendedRealProperty,
    FloatProperty,
    IntegerProperty,
    LabelsProperty,
    ListProperty,
    Property,
    StringProperty,
)
from lipsolve.model import ModelTable, OutcomeSpace, PredictiveTable, Prior


class Document:
    """
    Common methods for turning JSON objects into documents and back.
    """

    def __init__(self, **kwargs):
        for name, property in self.defined_properties().items():
            if kwargs.get(name) is None:
                if property.has_default:
                    setattr(self, name, property.default_value())
                else:
                    setattr(self, name, None)
            else:
                setattr(self, name, kwargs[name])

    @property
    def __properties__(self):
        return {name: getattr(self, name) for name in self.defined_properties()}

    @classmethod
    def defined_properties(cls):
        props = {}
        for baseclass in reversed(cls.__mro__):
            props.update(
                (name, property)
                for name, property in vars(baseclass).items()
                if isinstance(property, Property)
            )
        return props

    @classmethod
    def deflate(cls, properties, obj=None, skip_empty=True):
        """
        Deflate a mapping of attribute values into a JSON-ready dict, keyed by
        each field's json key. Optional fields left at ``None`` are dropped unless
        ``skip_empty`` is false.
        """
        deflated = {}
        for name, property in cls.defined_properties().items():
            key = property.get_json_key(name)
            if properties.get(name) is not None:
                deflated[key] = property.deflate(properties[name], obj)
            elif property.has_default:
                deflated[key] = property.deflate(property.default_value(), obj)
            elif property.required:
                raise RequiredProperty(name, cls)
            elif not skip_empty:
                deflated[key] = None
        return deflated

    @classmethod
    def inflate(cls, data, lines=None):
        """
        Inflate a parsed JSON object into an instance of cls.

        :param lines: optional map of json key to its line in the source file,
                      used to point diagnostics at the offending field
        """
        if not isinstance(data, dict):
            raise InflateError(
                "<document>", cls, f"JSON object expected, got {type(data).__name__}"
            )
        lines = lines or {}
        inflated = {}
        for name, property in cls.defined_properties().items():
            key = property.get_json_key(name)
            if key in data and data[key] is not None:
                inflated[name] = property.inflate(data[key], lines.get(key))
            elif property.has_default:
                inflated[name] = property.default_value()
            elif property.required:
                raise RequiredProperty(key, cls)
            else:
                inflated[name] = None
        instance = cls(**inflated)
        instance._lines = lines
        return instance

    def to_dict(self):
        return self.deflate(self.__properties__)

    def _rejected(self, name, error):
        """Re-raise a domain-type rejection as a field diagnostic."""
        line = getattr(self, "_lines", {}).get(name)
        return InflateError(name, self.__class__, str(error), line)


class ModelDocument(Document):
    x_labels = LabelsProperty(required=True)
    y_labels = LabelsProperty(required=True)
    theta_labels = LabelsProperty(required=True)
    theta_values = ArrayProperty(ndim=1)
    probs = ArrayProperty(ndim=3, required=True)

    @classmethod
    def from_object(cls, m: ModelTable):
        return cls(
            x_labels=m.space.x_labels,
            y_labels=m.space.y_labels,
            theta_labels=m.theta_labels,
            theta_values=m.theta_values,
            probs=m.probs,
        )

    def to_object(self) -> ModelTable:
        try:
            return ModelTable(
                OutcomeSpace(self.x_labels, self.y_labels),
                self.theta_labels,
                self.probs,
                self.theta_values,
            )
        except RejectedInput as e:
            raise self._rejected("probs", e) from e


class PriorDocument(Document):
    labels = LabelsProperty()
    weights = ArrayProperty(ndim=1, required=True)

    @classmethod
    def from_object(cls, prior: Prior, labels=None):
        return cls(labels=labels or prior.labels, weights=prior.weights)

    def to_object(self) -> Prior:
        try:
            return Prior(self.weights, self.labels)
        except RejectedInput as e:
            raise self._rejected("weights", e) from e


class PredictiveDocument(Document):
    x_labels = LabelsProperty(required=True)
    y_labels = LabelsProperty(required=True)
    q = ArrayProperty(ndim=2, required=True)

    @classmethod
    def from_object(cls, q: PredictiveTable):
        return cls(x_labels=q.space.x_labels, y_labels=q.space.y_labels, q=q.q)

    def to_object(self) -> PredictiveTable:
        try:
            return PredictiveTable(self.q, OutcomeSpace(self.x_labels, self.y_labels))
        except RejectedInput as e:
            raise self._rejected("q", e) from e


class RiskProfileDocument(Document):
    theta_labels = LabelsProperty(required=True)
    risks = ListProperty(ExtendedRealProperty(), required=True)


class SolverResultDocument(Document):
    generator = StringProperty()
    algorithm = StringProperty(choices=("frank-wolfe", "exp-gradient"))
    floor = FloatProperty()
    theta_labels = LabelsProperty(required=True)
    weights = ArrayProperty(ndim=1, required=True)
    unfloored_weights = ArrayProperty(ndim=1)
    objective = FloatProperty(required=True)
    certificate_gap = ExtendedRealProperty(required=True)
    minimax_gap = ExtendedRealProperty()
    iterations = IntegerProperty(default=0)
    converged = BooleanProperty(required=True)
    support_size = IntegerProperty()
    symmetrized_weights = ArrayProperty(ndim=1)
    symmetrized_objective = FloatProperty()
    trace = ArrayProperty(ndim=2, allow_infinite=True)

    @classmethod
    def from_object(cls, result, theta_labels, generator=None, trace=False):
        return cls(
            generator=generator,
            algorithm=result.algorithm,
            floor=result.floor,
            theta_labels=theta_labels,
            weights=result.prior.weights,
            unfloored_weights=result.unfloored_prior.weights,
            objective=result.objective,
            certificate_gap=result.certificate_gap,
            minimax_gap=result.minimax_gap,
            iterations=result.iterations,
            converged=result.converged,
            support_size=result.support_size,
            symmetrized_weights=(
                None if result.symmetrized is None else result.symmetrized.weights
            ),
            symmetrized_objective=result.symmetrized_objective,
            trace=result.trace if trace and len(result.trace) else None,
        )


class LimitReportDocument(Document):
    x_labels = LabelsProperty(required=True)
    y_labels = LabelsProperty(required=True)
    q = ArrayProperty(ndim=2, required=True)
    flags = ListProperty(StringProperty(choices=("direct", "limit-filled")), required=True)
    floors = ArrayProperty(ndim=1)
    deviations = ArrayProperty(ndim=1)
    max_deviation = FloatProperty()
    converged = BooleanProperty(default=True)

    @classmethod
    def from_object(cls, report):
        floors = [floor for floor, _ in report.trace] or None
        deviations = [deviation for _, deviation in report.trace] or None
        return cls(
            x_labels=report.final.space.x_labels,
            y_labels=report.final.space.y_labels,
            q=report.final.q,
            flags=report.flags,
            floors=floors,
            deviations=deviations,
            max_deviation=report.max_deviation,
            converged=report.converged,
        )
