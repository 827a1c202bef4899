"""Exception hierarchy shared by all modules."""


class So3MesError(ValueError):
    """Base class for every domain error raised by the package."""


class InvalidOperatorError(So3MesError):
    pass


class NotMaximallyEntangledError(So3MesError):
    pass


class InvalidAxisError(So3MesError):
    pass


class DegenerateGeometryError(So3MesError):
    """Raised when sin(theta) vanishes and the eigenvector formula is undefined."""


class AccuracyError(So3MesError):
    pass


class NoSolutionError(So3MesError):
    pass


class InsufficientResolutionError(So3MesError):
    pass


class InternalConsistencyError(So3MesError):
    pass


class NonCommensurateClosureError(So3MesError):
    pass


class NotApplicableError(So3MesError):
    pass


class InvalidGeometryError(So3MesError):
    pass


class InconsistentParametersError(So3MesError):
    pass
