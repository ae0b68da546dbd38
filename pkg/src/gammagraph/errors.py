"""Exception hierarchy. Every domain failure derives from GammaGraphError."""


class GammaGraphError(ValueError):
    """Base class for domain errors (CLI exit code 1)."""


class GroupError(GammaGraphError):
    pass


class GraphError(GammaGraphError):
    pass


class CapExceeded(GammaGraphError):
    """An enumeration oracle hit its item cap; the instance is too large."""


class WallError(GammaGraphError):
    pass


class ModelError(GammaGraphError):
    pass


class LinkageError(GammaGraphError):
    pass


class ChainError(GammaGraphError):
    pass
