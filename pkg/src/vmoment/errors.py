"""Exception types shared across the package."""


class VmomentError(Exception):
    """Base class for all package-specific errors."""


class RangeError(VmomentError, ValueError):
    """An argument points outside the tabulated range.

    The message always names the limit that would be needed.
    """


class ResourceError(VmomentError, RuntimeError):
    """A request would exceed an allocation or work-unit guard."""


class GuardError(ResourceError):
    """A brute-force guard refused to run; message carries the cost estimate."""
