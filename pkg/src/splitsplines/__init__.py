"""Exact dimension computations for C^r splines on simplicial subdivisions."""
from .linalg import QMatrix, kernel_basis, rank, rref
from .mesh import AffineForm, MeshError, SimplicialComplex, ValidationReport
from .algebra import (
    ChainComplexRJ,
    LinearHomogeneousForm,
    PowerIdeal,
    build_complex,
    euler_dim,
    face_ideal,
    homogenize,
    homology_graded_dims,
    ideal_graded_dim,
    ideals_equal,
)

__version__ = "0.1.0"
