"""Exception hierarchy shared by every module of the package."""


class NeqrGroverError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(NeqrGroverError, ValueError):
    pass


class InvalidImageError(NeqrGroverError, ValueError):
    """Image is not a square, power-of-two grid of 8-bit intensities."""


class CapacityExceededError(NeqrGroverError):
    """The requested register would exceed the dense simulator's qubit cap."""


class NotAnNeqrStateError(NeqrGroverError, ValueError):
    pass


class NoMarkedItemsError(NeqrGroverError):
    """A search was requested but nothing satisfies the predicate."""


class ParseError(NeqrGroverError, ValueError):
    pass


class ImageIOError(NeqrGroverError, OSError):
    pass
