"""Exception types shared across the package."""


class StochEffError(Exception):
    pass


class InvariantError(StochEffError, ValueError):
    """A value violates a type invariant (negative weight, mass above one, ...)."""


class SpaceMismatchError(StochEffError, ValueError):
    """Two operands live over different finite spaces."""


class UnknownStateError(StochEffError, KeyError):
    pass


class NotAMorphismError(StochEffError, ValueError):
    pass


class NotACongruenceError(StochEffError, ValueError):
    pass


class SearchBoundExceeded(StochEffError):
    """The equivalence search used up its candidate budget without a verdict."""
