"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the command line
front end reports alongside the message.
"""


class ShiftvarError(Exception):
    code = "error"


class ValidationError(ShiftvarError, ValueError):
    code = "validation"


class NotPrime(ValidationError):
    code = "not_prime"


class EvenOrTooSmall(ValidationError):
    code = "even_or_too_small"


class DivisionByZero(ShiftvarError, ZeroDivisionError):
    code = "division_by_zero"


class FieldMismatch(ValidationError):
    code = "field_mismatch"


class ArityMismatch(ValidationError):
    code = "arity_mismatch"


class DimensionMismatch(ValidationError):
    code = "dimension_mismatch"


class PolynomialSyntaxError(ValidationError):
    code = "syntax_error"


class VariableIndexOutOfRange(ValidationError):
    code = "variable_index_out_of_range"


class DegreeNotBelowP(ValidationError):
    code = "degree_not_below_p"


class ZeroPolynomial(ValidationError):
    code = "zero_polynomial"


class NotInvariantUnderU(ValidationError):
    code = "not_invariant_under_u"


class ZeroShift(ValidationError):
    code = "zero_shift"


class PreconditionViolated(ValidationError):
    code = "precondition_violated"


class RadiusTooLarge(ValidationError):
    code = "radius_too_large"


class MetadataMissing(ValidationError):
    code = "metadata_missing"


class DegreeTooSmall(ValidationError):
    code = "degree_too_small"


class RankBoundInvalid(ValidationError):
    code = "rank_bound_invalid"


class PrimeTooSmall(ValidationError):
    code = "prime_too_small"


class SizeLimitExceeded(ValidationError):
    code = "size_limit_exceeded"


class NotACertificate(ValidationError):
    code = "not_a_certificate"


class BudgetExceeded(ShiftvarError):
    """Raised when an exhaustive scan would exceed the configured cap."""

    code = "budget_exceeded"
