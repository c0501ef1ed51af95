"""Shared exception types."""


class ResourceLimit(RuntimeError):
    """A configured size cap would be exceeded."""


class NotClosed(RuntimeError):
    """Tile enumeration is still growing at the requested level."""


class Overlap(ValueError):
    """Placements share a cell."""


class Unroutable(RuntimeError):
    """No skeleton path exists; indicates an internal consistency failure."""


class NotAnEpivertex(ValueError):
    """The vertex is not an epivertex of the given supertile."""


class InconsistentContext(ValueError):
    """The supplied decoration context admits no consistent decoration."""
