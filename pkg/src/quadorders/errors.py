"""Shared exception types."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResourceBudgetError(RuntimeError):
    """A computation exceeded its configured resource budget."""


class ConfigError(ValueError):
    """A campaign configuration could not be parsed or validated."""
