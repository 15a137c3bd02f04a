"""Exception types shared across the package."""


class PlantflowError(Exception):
    """Base class for errors raised by this package."""


class PlantDataError(PlantflowError):
    """Invalid user-supplied input: networks, documents, modes, queries."""


class MappingError(PlantDataError):
    """A component assignment or model references something that does not exist."""


class DataFormatError(PlantDataError):
    """A network document violates the canonical schema."""
