"""Symmetry Lie algebra of an order-3 tensor.

The annihilator of ``T`` in ``gl(A) + gl(B) + gl(C)`` under the Leibniz
action is the kernel of an explicit integer linear system with one row per
index triple ``(i, j, k)``.  It always contains the 2-dimensional space of
scalar triples ``(lambda, mu, nu)`` with ``lambda + mu + nu = 0``, so the
symmetry group has dimension ``nullity - 2``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .exact import Matrix, Span, modular_rank, nullspace
from .tensor import Tensor3

__all__ = [
    "LieTriple",
    "SymmetryReport",
    "act",
    "annihilator_system",
    "bracket",
    "family_membership",
    "symmetry_report",
]


@dataclass(frozen=True)
class LieTriple:
    """An element ``(U, V, W)`` of ``gl(A) + gl(B) + gl(C)``; entry ``U[i, i']`` is ``u^i_{i'}``."""

    U: Matrix
    V: Matrix
    W: Matrix

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.U.rows, self.V.rows, self.W.rows)

    @classmethod
    def zero(cls, dims: Sequence[int]) -> LieTriple:
        return cls(*(Matrix.zeros(n, n) for n in dims))

    @classmethod
    def scalars(cls, dims: Sequence[int], lam: Any, mu: Any, nu: Any) -> LieTriple:
        a, b, c = dims
        return cls(Matrix.identity(a).scale(lam), Matrix.identity(b).scale(mu), Matrix.identity(c).scale(nu))

    @classmethod
    def from_vector(cls, vec: Sequence[Any], dims: Sequence[int]) -> LieTriple:
        """Inverse of :meth:`to_vector`."""
        a, b, c = dims
        if len(vec) != a * a + b * b + c * c:
            raise ValueError("vector length does not match dims")
        mats = []
        off = 0
        for n in (a, b, c):
            mats.append(Matrix(n, n, {(r, s): vec[off + r * n + s] for r in range(n) for s in range(n)}))
            off += n * n
        return cls(*mats)

    def to_vector(self) -> list[Fraction]:
        """Coordinates in the system's column order: U row-major, then V, then W."""
        return [x for M in (self.U, self.V, self.W) for x in M.entries]

    def to_sparse(self) -> dict[int, Fraction]:
        out = {}
        off = 0
        for M in (self.U, self.V, self.W):
            n = M.rows
            for (r, s), v in M.items():
                out[off + r * n + s] = v
            off += n * n
        return out

    def __add__(self, other: LieTriple) -> LieTriple:
        return LieTriple(self.U + other.U, self.V + other.V, self.W + other.W)

    def __sub__(self, other: LieTriple) -> LieTriple:
        return LieTriple(self.U - other.U, self.V - other.V, self.W - other.W)

    def scale(self, s: Any) -> LieTriple:
        return LieTriple(self.U.scale(s), self.V.scale(s), self.W.scale(s))

    def is_zero(self) -> bool:
        return self.U.is_zero() and self.V.is_zero() and self.W.is_zero()

    def to_json_obj(self) -> dict[str, list[list[str]]]:
        return {
            name: [[str(x) for x in row] for row in M.to_rows()]
            for name, M in (("U", self.U), ("V", self.V), ("W", self.W))
        }


@dataclass(frozen=True)
class SymmetryReport:
    tilde_dim: int
    sym_dim: int
    basis: tuple[LieTriple, ...]
    mode: str
    dims: tuple[int, int, int]

    def span(self) -> Span:
        a, b, c = self.dims
        return Span((L.to_sparse() for L in self.basis), a * a + b * b + c * c)

    def to_json_obj(self, include_basis: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "tilde_dim": self.tilde_dim,
            "sym_dim": self.sym_dim,
            "mode": self.mode,
        }
        if include_basis:
            out["basis"] = [L.to_json_obj() for L in self.basis]
        return out


def _offsets(dims: Sequence[int]) -> tuple[int, int, int]:
    a, b, _ = dims
    return (0, a * a, a * a + b * b)


def annihilator_system(T: Tensor3) -> Matrix:
    """Matrix of the linear conditions ``L . T = 0`` on ``L = (U, V, W)``.

    Row ``((i-1) b + (j-1)) c + (k-1)`` is the equation
    ``u^i_{i'} T^{i'jk} + v^j_{j'} T^{ij'k} + w^k_{k'} T^{ijk'} = 0``;
    columns follow :meth:`LieTriple.to_vector`.
    """
    a, b, c = T.dims
    ou, ov, ow = _offsets(T.dims)

    def row(i: int, j: int, k: int) -> int:
        return ((i - 1) * b + (j - 1)) * c + (k - 1)

    data: dict[tuple[int, int], Fraction] = {}

    def add(key: tuple[int, int], v: Fraction) -> None:
        data[key] = data.get(key, Fraction(0)) + v

    for (i0, j0, k0), t in T.items():
        for i in range(1, a + 1):
            add((row(i, j0, k0), ou + (i - 1) * a + (i0 - 1)), t)
        for j in range(1, b + 1):
            add((row(i0, j, k0), ov + (j - 1) * b + (j0 - 1)), t)
        for k in range(1, c + 1):
            add((row(i0, j0, k), ow + (k - 1) * c + (k0 - 1)), t)
    return Matrix(a * b * c, a * a + b * b + c * c, data)


def act(L: LieTriple, T: Tensor3) -> Tensor3:
    """Leibniz action ``L . T``."""
    if L.dims != T.dims:
        raise ValueError(f"triple dims {L.dims} do not match tensor dims {T.dims}")
    out: dict[tuple[int, int, int], Fraction] = {}
    cols = [M.transpose().row_dicts() for M in (L.U, L.V, L.W)]
    for idx, t in T.items():
        for mode in range(3):
            for dst, w in cols[mode][idx[mode] - 1].items():
                key = list(idx)
                key[mode] = dst + 1
                key = tuple(key)
                out[key] = out.get(key, Fraction(0)) + w * t
    return Tensor3(T.dims, out)


def bracket(L1: LieTriple, L2: LieTriple) -> LieTriple:
    """Componentwise commutator ``([U1, U2], [V1, V2], [W1, W2])``."""
    if L1.dims != L2.dims:
        raise ValueError("shape mismatch")
    return LieTriple(
        *(X @ Y - Y @ X for X, Y in ((L1.U, L2.U), (L1.V, L2.V), (L1.W, L2.W)))
    )


def symmetry_report(T: Tensor3, mode: str = "exact", *, seed: int = 0) -> SymmetryReport:
    """Dimension of the symmetry Lie algebra of ``T`` and a basis of its annihilator.

    In exact mode the basis is the reduced column echelon basis of the kernel
    and every element is checked to annihilate ``T``.  Modular mode only
    computes the dimension (probabilistically) and returns an empty basis.
    """
    if min(T.dims) < 1:
        raise ValueError("tensor dimensions must be >= 1")
    S = annihilator_system(T)
    if mode == "modular":
        r, _ = modular_rank(S, seed=seed)
        nullity = S.cols - r
        return SymmetryReport(nullity, nullity - 2, (), "probabilistic", T.dims)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    N = nullspace(S)
    basis = tuple(LieTriple.from_vector(col, T.dims) for col in N.columns())
    for L in basis:
        if not act(L, T).is_zero():  # pragma: no cover - would indicate an elimination bug
            raise ArithmeticError("kernel vector does not annihilate the tensor")
    return SymmetryReport(len(basis), len(basis) - 2, basis, "exact", T.dims)


def family_membership(
    T: Tensor3, samples: Iterable[LieTriple], report: SymmetryReport | None = None
) -> bool:
    """True iff every sample annihilates ``T`` and lies in the span of the computed basis."""
    samples = list(samples)
    if any(L.dims != T.dims for L in samples):
        return False
    if report is None or report.mode != "exact":
        report = symmetry_report(T)
    span = report.span()
    return all(act(L, T).is_zero() and L.to_sparse() in span for L in samples)
