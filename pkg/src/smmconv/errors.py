"""Exception types shared across the package."""


class SmmConvError(Exception):
    """Base class for all errors raised by this package."""


class GeometryError(SmmConvError, ValueError):
    """Convolution geometry parameters are invalid (e.g. empty output)."""


class ShapeMismatchError(SmmConvError, ValueError):
    """A tensor does not have the shape required by the operation."""


class BackendUnsupportedError(SmmConvError):
    """The geometry is valid but this backend does not implement it.

    Deliberately distinct from ShapeMismatchError: callers such as the
    benchmark harness treat 'unsupported' as a recordable outcome, not a bug.
    """


class ConfigError(SmmConvError, ValueError):
    """A layer-config file could not be parsed."""


class ChecksumMismatchError(SmmConvError, RuntimeError):
    """Backends disagreed on a benchmark checksum; results are not comparable."""
