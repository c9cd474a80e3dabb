"""Exception hierarchy shared by every layer of the package."""


class PervglueError(Exception):
    """Base class for all errors raised by this package."""


class ShapeMismatch(PervglueError):
    """Matrix dimensions are incompatible with the requested operation."""


class NotInvertible(PervglueError):
    """A square matrix expected to be invertible is singular."""


class NotNilpotent(PervglueError):
    """An operator expected to be nilpotent is not."""


class InvalidParameter(PervglueError):
    """A construction was called with parameters outside its domain."""


class InvalidMorphism(PervglueError):
    """Components fail the commutation constraints of their realization."""


class RealizationMismatch(PervglueError):
    """Objects from different realizations were mixed."""


class NotAComplex(PervglueError):
    """Two consecutive maps do not compose to zero."""


class InvalidSESMorphism(PervglueError):
    """The rows of a snake-lemma input are not exact or its squares fail."""


class InvalidDiad(PervglueError):
    """Side conditions of a diad (injectivity/surjectivity) fail."""


class InvalidTriad(PervglueError):
    """Side conditions or exactness of a triad fail."""


class ConstraintViolation(PervglueError):
    """The v o u = 1 - t gluing constraint fails."""


class ParseError(PervglueError):
    """A serialized document is malformed."""
