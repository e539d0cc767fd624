"""Exception hierarchy for the whole package.

Every domain failure raises a subclass of StringySurfError, so callers (in
particular the CLI) can separate usage errors from domain errors with a
single except clause.
"""


class StringySurfError(Exception):
    """Base class for all domain errors raised by this package."""


# -- exact algebra ----------------------------------------------------------

class SingularMatrix(StringySurfError):
    pass


class NotSymmetric(StringySurfError):
    pass


class ScaleMismatch(StringySurfError):
    pass


class InexactDivision(StringySurfError):
    """Internal: exact polynomial division failed (divisor does not divide)."""


class PoleAtOne(StringySurfError):
    """A (w - 1) denominator factor did not cancel when taking the limit."""


class ZeroDiscrepancyFactor(StringySurfError):
    """A bare 1/(z^a - 1) factor with a = 0 appeared (inadmissible input)."""


# -- graphs -----------------------------------------------------------------

class SchemaError(StringySurfError):
    pass


class DuplicateId(SchemaError):
    pass


class SelfLoop(SchemaError):
    pass


class DisconnectedGraph(StringySurfError):
    pass


class NotNegativeDefinite(StringySurfError):
    pass


class BadParameters(StringySurfError):
    """Invalid continued-fraction parameters (gcd != 1 or q outside (0, n))."""


class InvalidSite(StringySurfError):
    pass


# -- checks and invariants --------------------------------------------------

class AssertionFailure(StringySurfError):
    """A checked identity or inequality failed on the given input."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class StructureViolation(AssertionFailure):
    """The resolution graph violates the negative-part/chain decomposition."""


class NotAdmissible(StringySurfError):
    """Stringy invariants are undefined for this germ."""


class InconsistentChainData(StringySurfError):
    """Chain discrepancies do not satisfy the adjunction relations."""


class ZeroBoundaryDiscrepancy(StringySurfError):
    pass


class NonSelfDualHX(StringySurfError):
    pass


class BadSeifertData(StringySurfError):
    pass


class StrictlyLogCanonical(StringySurfError):
    """Raised where a zero central discrepancy makes an invariant undefined."""


class NotInTable(StringySurfError):
    pass


class PreconditionNotMet(StringySurfError):
    pass
