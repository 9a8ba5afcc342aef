"""
Exception hierarchy for the sphere decision library.

Domain errors subclass the closest builtin so callers that only know about
``ValueError`` or ``ArithmeticError`` still catch them. Input errors carry
the JSON path of the offending element.
"""

from typing import Optional


class SpheresError(Exception):
    """Base class for every error raised by this package."""


class LetterOutOfRange(SpheresError, ValueError):
    def __init__(self, letter: int, rank: int):
        self.letter = letter
        self.rank = rank
        super().__init__(f"letter {letter} is not a generator or inverse of F_{rank}")


class RankMismatch(SpheresError, ValueError):
    def __init__(self, left: int, right: int):
        self.left = left
        self.right = right
        super().__init__(f"rank mismatch: {left} != {right}")


class EmptySupport(SpheresError, ValueError):
    """Raised when a hull is requested for classes with no support."""


class ZeroClass(SpheresError, ValueError):
    """The zero class (or a null-homologous weight system) is not a sphere class."""


class NotEmbeddable(SpheresError, ValueError):
    """A disjointness test was asked about a class that is not embeddable in the cover."""

    def __init__(self, which: str, certificate=None):
        self.which = which
        self.certificate = certificate
        super().__init__(f"class {which} is not representable by an embedded sphere in the universal cover")


class NotEmbeddableInM(SpheresError, ValueError):
    def __init__(self, which: str, certificate=None):
        self.which = which
        self.certificate = certificate
        super().__init__(f"class {which} is not representable by an embedded sphere in M")


class IntersectionOverflow(SpheresError, ArithmeticError):
    """A weight or intersection number left the signed 64-bit range."""


class BrokenPath(SpheresError, ValueError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"step {index} does not start where the previous step ended")


class LimitExceeded(SpheresError, RuntimeError):
    """A configured resource limit was exceeded."""


class InputError(SpheresError, ValueError):
    """Invalid input document; ``path`` locates the offending JSON element."""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class MalformedJson(InputError):
    pass


class NonReducedWord(InputError):
    pass


class GenOutOfRange(InputError):
    pass


class ZeroWeight(InputError):
    pass


class DuplicateEdge(InputError):
    pass


class DuplicateName(InputError):
    pass


class UnknownClass(InputError):
    pass


class InvalidSettings(InputError):
    """A ``SPHERES_*`` environment value failed validation; ``path`` names the variable."""
