"""Exception hierarchy.

Every domain error carries the name of the violated invariant in its class
name, which the CLI prints verbatim.
"""


class MinkBasisError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionMismatch(MinkBasisError, ValueError):
    pass


class SingularMatrix(MinkBasisError, ArithmeticError):
    pass


class NotSymmetric(MinkBasisError, ValueError):
    pass


class OutOfRange(MinkBasisError, ValueError):
    pass


class InvalidSurface(MinkBasisError, ValueError):
    pass


class OrbitBudgetExceeded(MinkBasisError):
    pass


class BudgetExceeded(MinkBasisError):
    pass


class DegenerateCone(MinkBasisError, ValueError):
    pass


class NotAmple(MinkBasisError, ValueError):
    pass


class NotPseudoEffective(MinkBasisError, ValueError):
    pass


class NotBig(MinkBasisError, ValueError):
    pass


class NotNef(MinkBasisError, ValueError):
    pass


class NotBigNef(MinkBasisError, ValueError):
    pass


class NotRealizable(MinkBasisError):
    pass


class NonBasisRay(MinkBasisError):
    pass


class ZeroCurve(MinkBasisError, ValueError):
    pass
