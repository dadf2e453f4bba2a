"""Exception types raised by the library."""


class VinbergLabError(Exception):
    """Base class for all library errors."""


class ConditionsNotMet(VinbergLabError):
    """The genus-equals-class argument does not apply to these lattices."""


class RankNotFour(VinbergLabError):
    pass


class LatticeMismatch(VinbergLabError):
    pass


class DegenerateFrame(VinbergLabError):
    """The normals do not span a positive definite subspace."""


class NotHyperbolic(VinbergLabError):
    pass
