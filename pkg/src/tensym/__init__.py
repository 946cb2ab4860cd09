"""Exact symmetry algebras of order-3 tensors."""

from __future__ import annotations

__version__ = "0.1.0"

from .exact import LaurentPoly, Matrix, modular_rank, nullspace, rank
from .symmetry import LieTriple, SymmetryReport, symmetry_report
from .tensor import Tensor3, genericity
from .zoo import construct, expected_sym_dim, list_names

__all__ = [
    "LaurentPoly",
    "LieTriple",
    "Matrix",
    "SymmetryReport",
    "Tensor3",
    "construct",
    "expected_sym_dim",
    "genericity",
    "list_names",
    "modular_rank",
    "nullspace",
    "rank",
    "symmetry_report",
]
