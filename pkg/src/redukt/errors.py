"""Exception hierarchy shared across the library."""


class ReduktError(Exception):
    """Base class for all library errors."""


class UnknownElement(ReduktError):
    """An element set refers to something outside a structure's universe."""


class ArityLimitExceeded(ReduktError):
    """An isomorphism type would exceed the configured arity cap."""


class ExplosionGuard(ReduktError):
    """An enumeration would exceed the configured candidate ceiling."""


class SchemaMismatch(ReduktError):
    """A structure, formula, or problem was used with the wrong schema."""


class UnboundVariable(ReduktError):
    """A formula was evaluated with a free variable missing from the assignment."""


class NotWellFormed(ReduktError):
    """A reduction failed its well-formedness check; carries the report."""

    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class SemanticsViolation(ReduktError):
    """The structure built by applying a reduction failed post-hoc verification."""


class LiftFailure(ReduktError):
    """A gadget shorthand induces a reduction whose automorphism lift fails."""


class NotACongruence(ReduktError):
    """An interpretation's equality formula is not a congruence on this input."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotSetRespecting(ReduktError):
    """An interpretation merges tuples over different element sets."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MissingOrder(ReduktError):
    """A source schema lacks the linear-order symbol an operation requires."""


class NotInFragment(ReduktError):
    """A formula lies outside the quantifier-prefix fragment an operation needs."""


class BadParameters(ReduktError):
    """Numeric parameters violate a validator's precondition."""


class BadGadget(ReduktError):
    """A gadget payload is structurally unusable (e.g. missing endpoints)."""


class NodeGraphTooLarge(ReduktError):
    """The node-gadget characterization only covers node graphs of <= 3 nodes."""


class MalformedDocument(ReduktError):
    """A JSON document does not match the expected wire format."""
