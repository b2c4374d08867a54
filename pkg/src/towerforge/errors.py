"""Shared exception types."""


class GuardExceeded(RuntimeError):
    """An enumeration or search would exceed its configured size guard."""
