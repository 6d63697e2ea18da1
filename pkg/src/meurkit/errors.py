"""Exception hierarchy shared across the package."""


class UncertaintyError(ValueError):
    """Base class for every error raised by meurkit."""


class ValidationError(UncertaintyError):
    """An input object violates one of its invariants."""


class DimensionError(ValidationError):
    pass


class HermiticityError(ValidationError):
    pass


class NormalizationError(ValidationError):
    pass


class ParseError(UncertaintyError):
    """A scenario document could not be parsed."""


class RangeError(UncertaintyError):
    pass


class NegativeVarianceError(UncertaintyError):
    pass


class DegenerateVarianceError(UncertaintyError):
    """A standard deviation is too small for a bound that divides by it."""


class ZeroVectorError(UncertaintyError):
    """A vector to be normalized has (numerically) vanishing norm."""


class DenominatorVanishesError(UncertaintyError):
    """A bound denominator fell below the guard threshold."""


class InvalidExclusionOperatorError(ValidationError):
    pass


class NoFeasibleLambdaError(UncertaintyError):
    pass


class EmptyListError(UncertaintyError):
    pass


class MixedTargetError(UncertaintyError):
    pass


class ZeroCommutatorWarning(UserWarning):
    """A pairwise commutator expectation vanishes, collapsing a product bound to 0."""


#: Short reason codes used in sweep tables and fuzz summaries.
REASON_CODES = {
    DenominatorVanishesError: "denominator-guard",
    DegenerateVarianceError: "degenerate-variance",
    ZeroVectorError: "zero-vector",
    NoFeasibleLambdaError: "no-feasible-lambda",
    RangeError: "out-of-range",
    ValidationError: "invalid-input",
}


def reason_code(exc: BaseException) -> str:
    for cls, code in REASON_CODES.items():
        if isinstance(exc, cls):
            return code
    return type(exc).__name__
