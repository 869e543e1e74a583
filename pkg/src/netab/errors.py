"""Exception types shared across the package."""


class NetabError(Exception):
    """Base class for all errors raised by netab."""


class ValidationError(NetabError, ValueError):
    """Data violates a structural invariant (lengths, value ranges, graph shape)."""


class ParseError(NetabError, ValueError):
    """A file could not be parsed; message carries line/field context."""


class CapacityError(NetabError, ValueError):
    """Exact enumeration requested on a graph too large to enumerate."""
