"""Exception hierarchy shared by all modules."""


class CohomFoldError(Exception):
    """Base class for errors raised by this package."""


class InvalidDimensionError(CohomFoldError, ValueError):
    pass


class InvalidParameterError(CohomFoldError, ValueError):
    pass


class DomainError(CohomFoldError, ValueError):
    """Input point does not lie on the expected manifold."""


class ConsistencyError(CohomFoldError, RuntimeError):
    """An internal numerical consistency check failed."""


class NonRegularValueError(CohomFoldError, ValueError):
    pass
