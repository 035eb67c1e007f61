"""Exception and warning types raised across the package."""


class PosetError(ValueError):
    """Base class for all errors raised by posetdyn."""


class CycleError(PosetError):
    pass


class UnknownElement(PosetError, KeyError):
    def __str__(self):
        return PosetError.__str__(self)


class DuplicateElement(PosetError):
    pass


class RedundantCoverWarning(UserWarning):
    """A supplied cover pair was implied by the other covers and was dropped."""


class DegenerateError(PosetError):
    """Some chain of the poset is longer than the global label bound."""


class MissingRestriction(PosetError):
    pass


class InconsistentRestriction(PosetError):
    pass


class WeaklyInconsistentRestriction(PosetError):
    pass


class MismatchedContext(PosetError):
    pass


class InvalidLabeling(PosetError):
    pass


class NotAnIdeal(PosetError):
    pass


class LambdaChainViolation(PosetError):
    pass


class NotAToggleOrder(PosetError):
    pass


class NotColumnOrder(NotAToggleOrder):
    pass


class NotRankPreserving(PosetError):
    pass


class NotGlobalBoundMode(PosetError):
    pass


class LabelOutOfRange(PosetError):
    pass


class RelationViolation(PosetError):
    pass


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured state budget."""


class InputFormatError(PosetError):
    """A poset, restriction or labeling document could not be parsed."""
