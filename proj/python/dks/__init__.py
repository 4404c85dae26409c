"""Python bindings for default information structures.

Sets are passed and returned as lists of token names.
"""

from ._dks import (
    DefaultStructure,
    InvariantBreach,
    LoadError,
    ModelError,
    ParseError,
    Relation,
    Representation,
    run_cli,
)

__all__ = [
    "DefaultStructure",
    "InvariantBreach",
    "LoadError",
    "ModelError",
    "ParseError",
    "Relation",
    "Representation",
    "run_cli",
]
