"""Exception hierarchy shared by every module."""


class VilenkinError(Exception):
    """Base class for all library errors."""


class DomainError(VilenkinError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class CapacityError(VilenkinError, ValueError):
    """An index or size exceeds the stored radix sequence or the working resolution."""


class UsageError(VilenkinError, ValueError):
    """Incompatible operands or malformed configuration."""
