"""Exception types shared across the package."""


class FormatError(ValueError):
    """Malformed input data (bad token, broken tree dump, inconsistent CSV)."""


class ContractError(ValueError):
    """A documented precondition was violated by the caller."""


class ResourceLimitError(RuntimeError):
    """Refusing an operation whose output would be combinatorially unbounded."""


class ConsistencyError(RuntimeError):
    """Internal state that should be impossible; indicates a bug upstream."""
