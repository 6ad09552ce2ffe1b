"""Exception hierarchy shared by all modules."""


class JacobsthalError(Exception):
    """Base class for errors raised by this package."""


class CapacityError(JacobsthalError):
    """A request exceeds a configured table, scan or enumeration budget."""


class DomainError(JacobsthalError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RadicalParseError(JacobsthalError, ValueError):
    """Radical text could not be turned into a valid squarefree radical."""


class NotSquarefreeError(RadicalParseError):
    pass


class FactoringTimeout(RadicalParseError):
    pass


class IndeterminateError(JacobsthalError):
    """A certified comparison could not be decided at available precision."""
