"""Exception hierarchy shared by all modules."""


class BraidFanError(ValueError):
    """Base class; every library error is also a ValueError."""


class AllOnesMultiple(BraidFanError):
    pass


class DependentRays(BraidFanError):
    pass


class BudgetExceeded(BraidFanError):
    pass


class Unbounded(BraidFanError):
    pass


class EmptyPolytope(BraidFanError):
    pass


class DegenerateInput(BraidFanError):
    pass


class TopOrBottom(BraidFanError):
    pass


class MalformedChain(BraidFanError):
    pass


class IndexOutOfRange(BraidFanError):
    pass


class NotComparableInterval(BraidFanError):
    pass


class GeometryViolation(BraidFanError):
    pass


class MissingLabel(BraidFanError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class DegenerateP0(BraidFanError):
    pass


class EmptyQ(BraidFanError):
    pass


class NotIncreasing(BraidFanError):
    pass


class NotAppropriate(BraidFanError):
    pass


class NotConstantSum(BraidFanError):
    pass


class EpsTooLarge(BraidFanError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidSchedule(BraidFanError):
    pass
