"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An argument broke the documented contract of an operation."""
