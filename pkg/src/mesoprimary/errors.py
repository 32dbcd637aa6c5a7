"""Exception types shared across the library.

Exit-code mapping used by the CLI: parse errors are code 2, bound and
certification failures are code 3, precondition violations are code 4.
"""


class MesoprimaryError(Exception):
    """Base class for all library errors."""


class PresentationSyntaxError(MesoprimaryError):
    """Raised on malformed presentation files; carries line/column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class BoundExceeded(MesoprimaryError):
    """A configured search or iteration cap was hit before stabilization."""


class CompletionCapExceeded(BoundExceeded):
    """Rule-count safety cap hit during completion."""


class RegionNotCertified(BoundExceeded):
    """A finiteness certificate for an enumeration region failed.

    ``direction`` names the offending coordinate when known.
    """

    def __init__(self, message: str, direction: str | None = None):
        super().__init__(message)
        self.direction = direction


class StabilizerNotCertified(BoundExceeded):
    """The stabilizer candidate lattice could not be certified exact."""


class SeparatorSearchExhausted(BoundExceeded):
    """Bounded separator-witness search ended without a hit."""


class PreconditionError(MesoprimaryError):
    """An operation was called outside its documented precondition."""


class MixedPrimesError(PreconditionError):
    """Lattice refinement combined prime congruences over distinct primes."""


class NilElementError(PreconditionError):
    """A nil element was passed where a non-nil class is required."""


class EmbeddedPrimeError(PreconditionError):
    """Associated primes are not all minimal; names the offending pair."""

    def __init__(self, lower: str, upper: str):
        super().__init__(f"embedded prime present: {lower} < {upper}")
        self.lower = lower
        self.upper = upper


class NoUniqueMinimumError(PreconditionError):
    """Poset realization requires a unique minimum element."""
