"""Exception hierarchy shared by all superrad modules."""


class SuperradError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(SuperradError, ValueError):
    pass


class CapacityError(SuperradError):
    """A register, matrix or statevector would exceed the configured size cap."""


class ConstructionError(SuperradError):
    """An internally assembled operator failed a consistency check."""


class IntegrationError(SuperradError):
    """The master-equation integrator drifted out of its trace tolerance."""


class NoCrossingError(SuperradError):
    """A series never reached the requested threshold."""


class ConfigError(SuperradError):
    """Scenario configuration could not be parsed or validated.

    ``key`` and ``line`` point at the offending entry when known.
    """

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
