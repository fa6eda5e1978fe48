"""Finite data classifying étale and Lagrangian algebras in twisted Drinfeld centers,
on top of exact bar-complex group cohomology."""

from .errors import (
    DomainError,
    EtaleAtlasError,
    InputError,
    InternalInconsistency,
    MalformedSpec,
    NotACocycle,
    NotAGroup,
    NotAbelian,
    NotNormal,
    NotQuadratic,
    TooLarge,
    WrongParent,
)

__version__ = "0.1.0"
