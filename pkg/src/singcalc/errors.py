"""Exception hierarchy.

Every domain error carries a short machine-readable ``code`` so the command
line front-end can emit it as JSON.
"""


class SingcalcError(ValueError):
    code = "domain-error"

    def to_json(self):
        return {"error": self.code, "message": str(self)}


class InvalidFraction(SingcalcError):
    code = "invalid-fraction"


class NotReduced(SingcalcError):
    code = "not-reduced"


class PositionOutOfRange(SingcalcError):
    code = "position-out-of-range"


class EntryNotOne(SingcalcError):
    code = "entry-not-one"


class NotWahl(SingcalcError):
    code = "not-wahl"


class DegenerateLength(SingcalcError):
    code = "degenerate-length"


class BoundExceeded(SingcalcError):
    code = "bound-exceeded"


class MalformedDecoration(SingcalcError):
    code = "malformed-decoration"


class InvalidInput(SingcalcError):
    code = "invalid-input"


class UnsupportedConfiguration(SingcalcError):
    """Raised for mk2A positions and mk1A with the curve at an inner block curve."""

    code = "unsupported-configuration"


class PreconditionViolation(SingcalcError):
    code = "pre-violation"


class AmbiguousAttachment(SingcalcError):
    code = "ambiguous-attachment"


class StepBudgetExceeded(SingcalcError):
    code = "step-budget-exceeded"


class InvalidDescriptor(SingcalcError):
    code = "invalid-descriptor"


class NotInK(SingcalcError):
    code = "not-in-k"
