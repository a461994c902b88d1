"""Exception types shared across the package.

Every error raised on bad user input derives from SeqforgeError so callers
(and the command line front end) can catch one base class.
"""


class SeqforgeError(Exception):
    """Base class for all package errors."""


class InvalidResidue(SeqforgeError):
    def __init__(self, position: int, char: str):
        self.position = position
        self.char = char
        super().__init__(f"invalid residue {char!r} at position {position}")


class EmptySequence(SeqforgeError):
    pass


class WrongAlphabet(SeqforgeError):
    pass


class AlphabetMismatch(SeqforgeError):
    pass


class WindowTooLarge(SeqforgeError):
    pass


class TooShort(SeqforgeError):
    pass


class NoHeader(SeqforgeError):
    pass


class DuplicateId(SeqforgeError):
    pass


class MissingAccession(SeqforgeError):
    pass


class LengthMismatch(SeqforgeError):
    pass


class UnterminatedRecord(SeqforgeError):
    pass


class MotifSyntaxError(SeqforgeError):
    """Bad motif pattern text. Carries the offending position."""

    def __init__(self, position: int, reason: str):
        self.position = position
        self.reason = reason
        super().__init__(f"bad pattern at position {position}: {reason}")


class QuerySyntaxError(SeqforgeError):
    def __init__(self, position: int, reason: str):
        self.position = position
        self.reason = reason
        super().__init__(f"bad query at position {position}: {reason}")


class UnknownField(SeqforgeError):
    def __init__(self, tag: str):
        self.tag = tag
        super().__init__(f"unknown field tag [{tag}]")


class DuplicateAccession(SeqforgeError):
    pass


class CorruptStore(SeqforgeError):
    pass


class StoreLocked(SeqforgeError):
    pass


class MalformedMatrix(SeqforgeError):
    pass


class UnknownResidue(SeqforgeError):
    def __init__(self, residue: str):
        self.residue = residue
        super().__init__(f"no mass for residue {residue!r}")
