"""Exception hierarchy shared by all milnor modules."""


class MilnorError(Exception):
    """Base class for all errors raised by this package."""


class ModelError(MilnorError):
    """Invalid incidence data for a semi-stable special fiber."""


class DuplicateId(ModelError):
    pass


class EmptyPsi(ModelError):
    pass


class MissingFace(ModelError):
    pass


class FaceMismatch(ModelError):
    pass


class NonCommutingFaces(ModelError):
    pass


class MissingVertexStratum(ModelError):
    """Some component has no stratum of its own (components must be strata)."""


class UnknownComponent(ModelError):
    pass


class DomainError(MilnorError):
    """Numeric input outside the domain of a piecewise-linear operation."""


class NotInDeltaE(DomainError):
    """Point does not lie in the cell union attached to the component subset E."""


class NotInRPrime(MilnorError):
    """Series has no limit: numerator degree exceeds denominator degree."""


class MissingClass(MilnorError):
    """A stratum lacks its Grothendieck class."""


class ShapeMismatch(MilnorError):
    pass


class NotAChainMap(MilnorError):
    pass


class NotACover(MilnorError):
    pass


class FiltrationAbsent(MilnorError):
    pass


class ParseError(MilnorError):
    """Malformed input file or expression."""
