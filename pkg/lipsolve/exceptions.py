class LipsolveException(Exception):
    """
    A base class that identifies all exceptions raised by :mod:`lipsolve`.
    """

    pass


class RejectedInput(ValueError, LipsolveException):
    """
    An argument or input file does not describe a valid problem.

    Example: a binomial grid value outside ``[0, 1]``.
    """

    def __init__(self, msg):
        self.message = msg
        super().__init__(msg)


class ModelValidationFailed(RejectedInput):
    """
    A model table breaks one or more of its invariants.

    The full :class:`~lipsolve.model.ValidationReport` is kept on the exception so
    that callers (and ``lipsolve_validate``) can list every violation, not just the first.
    """

    def __init__(self, report, source=None):
        self.report = report
        self.source = source
        super().__init__(str(report))

    def __reduce__(self):
        return self.__class__, (self.report, self.source)

    def __str__(self):
        where = f" in {self.source}" if self.source else ""
        lines = "\n".join(f"  - {violation}" for violation in self.report)
        return f"Model validation failed{where}:\n{lines}"


class InflateError(ValueError, LipsolveException):
    def __init__(self, key, cls, msg, line=None):
        self.property_name = key
        self.document_class = cls
        self.msg = msg
        self.line = line
        super().__init__(key, cls, msg, line)

    def __str__(self):
        where = f" (line {self.line})" if self.line else ""
        return f"Attempting to inflate field '{self.property_name}' of {self.document_class.__name__}{where}: {self.msg}"


class DeflateError(ValueError, LipsolveException):
    def __init__(self, key, cls, msg, obj=None):
        self.property_name = key
        self.document_class = cls
        self.msg = msg
        self.obj = repr(obj)
        super().__init__(key, cls, msg, obj)

    def __str__(self):
        return f"Attempting to deflate field '{self.property_name}' of {self.document_class.__name__}: {self.msg}"


class RequiredProperty(LipsolveException):
    def __init__(self, key, cls):
        self.property_name = key
        self.document_class = cls
        super().__init__(key, cls)

    def __str__(self):
        return f"field '{self.property_name}' is required in {self.document_class.__name__} documents"


class ZeroMarginal(ValueError, LipsolveException):
    """
    A prior gives zero probability to an observable ``x`` where the operation needs
    the conditional ``p_pi(y|x)`` to be defined.
    """

    def __init__(self, x_index, x_label, operation):
        self.x_index = x_index
        self.x_label = x_label
        self.operation = operation
        super().__init__(x_index, x_label, operation)

    def __str__(self):
        return (
            f"{self.operation}: prior marginal p(x) is zero at x index {self.x_index} "
            f"(label '{self.x_label}')"
        )


class UndefinedConditional(ValueError, LipsolveException):
    def __init__(self, x_index, theta_index):
        self.x_index = x_index
        self.theta_index = theta_index
        super().__init__(x_index, theta_index)

    def __str__(self):
        return (
            f"p(y|x, theta) is undefined at x index {self.x_index}: "
            f"p(x|theta) = 0 for theta index {self.theta_index} and no fallback was requested"
        )


class GridTooLarge(RejectedInput):
    def __init__(self, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(
            f"|Theta| = {size} exceeds the enumeration limit of {limit}; "
            "use solve_lip and its certificate instead"
        )

    def __reduce__(self):
        return self.__class__, (self.size, self.limit)


class FallbackRowWarning(UserWarning):
    """
    Raised as a warning when a plug-in predictive substitutes uniform rows.
    """

    pass


__all__ = (
    DeflateError.__name__,
    FallbackRowWarning.__name__,
    GridTooLarge.__name__,
    InflateError.__name__,
    LipsolveException.__name__,
    ModelValidationFailed.__name__,
    RejectedInput.__name__,
    RequiredProperty.__name__,
    UndefinedConditional.__name__,
    ZeroMarginal.__name__,
)
