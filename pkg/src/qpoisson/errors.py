"""Exception types raised across the package."""


class QPoissonError(Exception):
    """Base class for all package-specific errors."""


class CapacityError(QPoissonError):
    """A requested state would exceed the configured qubit cap."""


class DegenerateBranchError(QPoissonError):
    """A measurement branch has probability too small to normalize."""


class NoSuccessError(QPoissonError):
    """Post-selection on the rotation ancilla has vanishing probability."""


class EntangledCutError(QPoissonError):
    """A subset amplitude dump was requested across an entangled cut."""


class InvalidEncodingError(QPoissonError):
    """A basis index does not correspond to a valid interior grid point."""


class ConfigError(QPoissonError):
    """Command-line or config-file input is invalid."""
