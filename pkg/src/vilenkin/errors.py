"""Exception types shared across the library."""


class InvalidElementError(ValueError):
    """A digit vector is not a valid element of the group it is used with."""


class ResolutionExceededError(ValueError):
    """An index, level, or grid does not fit within the fixed truncation level."""
