"""Exception hierarchy shared across the package."""


class QhjSpectraError(Exception):
    """Base class for all errors raised by this package."""


class DegeneratePotentialError(QhjSpectraError):
    """V1 = 0: the sinh^2 term is absent and the pole structure degenerates."""


class UnsupportedBranchError(QhjSpectraError):
    """V1 <= 0: the indicial analysis at infinity needs a real sqrt(V1)."""


class ComplexResidueError(QhjSpectraError):
    """The indicial quadratic has complex roots (non-QES pole structure)."""


class InadmissibleParametersError(QhjSpectraError):
    """Parameters violate the QES admissibility condition for a chosen set."""


class InvariantViolationError(QhjSpectraError):
    """A computed quantity broke an invariant that should hold by construction."""


class QmfPoleError(QhjSpectraError):
    """The quantum momentum function was evaluated at one of its poles."""


class ContourCollisionError(QhjSpectraError):
    """A polynomial zero sits on (or too close to) the counting contour."""


class DegenerateVectorError(QhjSpectraError):
    """A grid vector is identically zero up to noise; node counting undefined."""


class HardMismatchError(QhjSpectraError):
    """An analytic level could not be matched to any numerical eigenvalue."""
