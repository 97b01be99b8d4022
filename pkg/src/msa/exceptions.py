"""Exception types shared across the package."""


class MSAError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(MSAError):
    """Operands have incompatible shapes or ambient dimensions."""


class DegenerateDataError(MSAError):
    """The data cannot support the requested operation (too few samples, zero rank, ...)."""


class ConfigError(MSAError):
    """A configuration value is out of its valid range."""


class DataFileError(MSAError):
    """A data file is missing or malformed."""

    def __init__(self, message, path=None, line=None):
        where = str(path) if path is not None else ""
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)
        self.path = path
        self.line = line
