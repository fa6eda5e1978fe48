"""Exception types shared across the package."""

from __future__ import annotations


class EtaleAtlasError(Exception):
    """Base class for every error raised by this package."""


class InputError(EtaleAtlasError):
    """Problem with user-supplied input (files, flags). CLI exit status 2."""

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
            if line is not None:
                where += f"{line}:"
            where += " "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class MalformedSpec(InputError):
    pass


class DomainError(EtaleAtlasError):
    """Mathematically invalid request on well-formed input. CLI exit status 1."""


class NotAGroup(DomainError):
    pass


class TooLarge(DomainError):
    pass


class NotNormal(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class WrongParent(DomainError):
    pass


class NotACocycle(DomainError):
    pass


class NotAbelian(DomainError):
    pass


class NotQuadratic(DomainError):
    def __init__(self, message: str, witness: tuple | None = None):
        self.witness = witness
        super().__init__(message)


class InternalInconsistency(EtaleAtlasError):
    """An internal check failed; always a defect, never a user error."""
