"""Errors
=========
Root exceptions. Each package raises subclasses of these so that callers
(and the command line) can tell bad input from a failing model provider.
"""


class DalkError(Exception):
    """Base class for all errors raised by this project."""


class InputError(DalkError, ValueError):
    """Input files, arguments or data are malformed or inconsistent."""


class ProviderError(DalkError, RuntimeError):
    """A model or embedding provider failed, or a replay store had no answer."""
