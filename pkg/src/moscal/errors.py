"""Exception hierarchy shared across the toolkit."""


class MoscalError(Exception):
    """Base class for all toolkit errors."""


class ParseError(MoscalError):
    """Instance file is malformed (bad JSON, missing fields, wrong types)."""


class ValidationError(MoscalError):
    """A model invariant is violated (e.g. fewer than two objectives)."""


class DimensionError(MoscalError):
    """Vector or matrix dimensions do not match the problem."""


class NumericalFailure(MoscalError):
    """Basis factorization failed repeatedly; the solve cannot continue."""


class LimitExceeded(MoscalError):
    """An iteration or node budget was exhausted."""


class TooLargeError(MoscalError):
    """Enumeration guard exceeded (brute-force oracle, TSP generator)."""


class InfeasibleModel(MoscalError):
    """The model has an empty feasible set where a nonempty one is required."""
