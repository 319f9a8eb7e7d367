"""Exact cohomotopy invariants of triangulated closed manifolds.

Computes the first nonstable cohomotopy group F1(X) = pi^n(X) of a closed
connected triangulated (n+1)-manifold, n >= 3, as an exact finitely
generated abelian group, together with the twisted homology, characteristic
class and extension data that determine it.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .linalg import (
    PresentedGroup,
    SmithDecomposition,
    SparseIntMatrix,
    group_from_presentation,
    smith_normal_form,
)

__all__ = [
    "PresentedGroup",
    "SmithDecomposition",
    "SparseIntMatrix",
    "group_from_presentation",
    "smith_normal_form",
    "__version__",
]
