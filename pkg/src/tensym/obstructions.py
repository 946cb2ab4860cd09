"""Border-rank obstruction by slice commutators, and exact degeneration limits.

A degeneration family is a triple of square matrices whose entries are
Laurent polynomials in ``eps``.  Applying it to a tensor gives a tensor
over Laurent polynomials; the limit at ``eps = 0`` exists when no negative
powers survive.
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import LaurentPoly, Matrix, NegativeExponent, det, inverse, laurent_limit, rank
from .tensor import NonInvertibleWitness, Tensor3, contract, unit_covector

__all__ = [
    "BorderRankReport",
    "DegenerationFamily",
    "LaurentTensor",
    "NoLimit",
    "apply_family",
    "binding_family",
    "commutator_obstruction",
    "identity_family",
    "limit",
    "one_a_family",
    "scaling_family",
]


class NoLimit(ValueError):
    """Some entry still has a negative power of eps."""


# ---------------------------------------------------------------------------
# Border rank


@dataclass(frozen=True)
class BorderRankReport:
    m: int
    witness: tuple[Fraction, ...]
    commutator_ranks: dict[tuple[int, int], int] = field(default_factory=dict)
    obstructed: bool = False
    bound: int = 0

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "witness": [str(x) for x in self.witness],
            "commutator_ranks": {f"{i},{j}": r for (i, j), r in sorted(self.commutator_ranks.items())},
            "obstructed": self.obstructed,
            "border_rank_lower_bound": self.bound,
        }


def commutator_obstruction(T: Tensor3, alpha: Sequence[Any]) -> BorderRankReport:
    """Strassen commutator test for an ``m x m x m`` tensor with ``T(alpha)`` invertible.

    With ``N_i = T(alpha)^{-1} T(alpha^i)``, any nonzero commutator
    ``[N_i, N_j]`` shows the border rank is at least ``m + 1``.  Commutator
    ranks are diagnostics only; the bound never exceeds ``m + 1``.
    """
    if not T.is_cubic():
        raise ValueError(f"commutator test needs an m x m x m tensor, got {T.dims}")
    m = T.dims[0]
    alpha = tuple(Fraction(x) for x in alpha)
    base = contract(T, "A", alpha)
    if rank(base) < m:
        raise NonInvertibleWitness("T(alpha) is not invertible")
    inv = inverse(base)
    slices = [inv @ contract(T, "A", unit_covector(m, i)) for i in range(1, m + 1)]
    ranks: dict[tuple[int, int], int] = {}
    for i in range(m):
        for j in range(i + 1, m):
            C = slices[i] @ slices[j] - slices[j] @ slices[i]
            ranks[(i + 1, j + 1)] = 0 if C.is_zero() else rank(C)
    obstructed = any(ranks.values())
    return BorderRankReport(m, alpha, ranks, obstructed, m + 1 if obstructed else m)


# ---------------------------------------------------------------------------
# Degenerations


def _laurent(v: Any) -> LaurentPoly:
    return v if isinstance(v, LaurentPoly) else LaurentPoly.constant(v)


def _laurent_det_nonzero(M: Matrix) -> bool:
    """Decide exactly whether ``det M(eps)`` is a nonzero Laurent polynomial.

    The determinant times ``eps^(-n*lo)`` is a polynomial of degree at most
    ``n*(hi - lo)``, so it vanishes identically iff it vanishes at that many
    plus one distinct nonzero points.
    """
    n = M.rows
    exps = [e for _, v in M.items() for e in _laurent(v).terms]
    if n == 0:
        return True
    if not exps:
        return False
    span = max(exps) - min(exps)
    for point in range(1, n * span + 2):
        val = M.map(lambda v: _laurent(v).evaluate(point))
        if det(val) != 0:
            return True
    return False


@dataclass(frozen=True)
class DegenerationFamily:
    """Per-factor linear maps ``(X(eps), Y(eps), Z(eps))``; column ``i`` of X is the image of ``a_i``."""

    X: Matrix
    Y: Matrix
    Z: Matrix

    def __post_init__(self):
        for name in ("X", "Y", "Z"):
            M = getattr(self, name)
            if not M.is_square():
                raise ValueError(f"{name} must be square")
            if not _laurent_det_nonzero(M):
                raise ValueError(f"{name}(eps) is singular for every eps")

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.X.rows, self.Y.rows, self.Z.rows)

    @classmethod
    def diagonal(cls, xs: Sequence[int], ys: Sequence[int], zs: Sequence[int]) -> DegenerationFamily:
        """Monomial-diagonal family ``a_i -> eps^xs[i] a_i`` and likewise for B, C."""
        mk = lambda es: Matrix.diag([LaurentPoly.monomial(e) for e in es])  # noqa: E731
        return cls(mk(xs), mk(ys), mk(zs))

    def to_json_obj(self) -> dict[str, Any]:
        return {
            name: [[_laurent(v).to_json() for v in row] for row in getattr(self, name).to_rows()]
            for name in ("X", "Y", "Z")
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping[str, Any]) -> DegenerationFamily:
        mats = []
        for name in ("X", "Y", "Z"):
            rows = obj[name]
            mats.append(Matrix.from_rows([[LaurentPoly.from_json(e) for e in row] for row in rows]))
        return cls(*mats)

    @classmethod
    def from_json(cls, text: str) -> DegenerationFamily:
        return cls.from_json_obj(json.loads(text))


def identity_family(dims: Sequence[int]) -> DegenerationFamily:
    a, b, c = dims
    return DegenerationFamily.diagonal([0] * a, [0] * b, [0] * c)


def scaling_family(dims: Sequence[int], exps: tuple[int, int, int] = (1, 0, 0)) -> DegenerationFamily:
    a, b, c = dims
    return DegenerationFamily.diagonal([exps[0]] * a, [exps[1]] * b, [exps[2]] * c)


def binding_family(m: int) -> DegenerationFamily:
    """``a1 -> a1/eps, a_rho -> eps a_rho``; same on B; ``c1 -> eps^2 c1``, ``c_tau`` fixed.

    Sends any binding tensor normalized so that ``T^{1jk} = delta_jk`` and
    ``T^{i1k} = delta_ik`` to ``T_utriv,m``.
    """
    ab = [-1] + [1] * (m - 1)
    return DegenerationFamily.diagonal(ab, ab, [2] + [0] * (m - 1))


def one_a_family(dims: Sequence[int]) -> DegenerationFamily:
    """``a_rho -> eps a_rho`` for rho >= 2; sends a tensor with ``T^{1jk} = delta_jk`` to ``T_0``."""
    a, b, c = dims
    return DegenerationFamily.diagonal([0] + [1] * (a - 1), [0] * b, [0] * c)


class LaurentTensor:
    """Order-3 tensor with Laurent polynomial entries (1-based indices)."""

    __slots__ = ("dims", "_entries")

    def __init__(self, dims: Sequence[int], entries: Mapping[tuple[int, int, int], LaurentPoly]):
        self.dims = tuple(dims)
        self._entries = {k: v for k, v in entries.items() if v}

    @property
    def entries(self) -> dict[tuple[int, int, int], LaurentPoly]:
        return dict(self._entries)

    def items(self):
        return self._entries.items()

    def __getitem__(self, idx) -> LaurentPoly:
        return self._entries.get(tuple(idx), LaurentPoly())

    def at(self, eps: Any) -> Tensor3:
        return Tensor3(self.dims, {k: v.evaluate(eps) for k, v in self._entries.items()})

    def exponents(self) -> set[int]:
        return {e for v in self._entries.values() for e in v.terms}

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "dims": list(self.dims),
            "entries": [
                {"i": i, "j": j, "k": k, "v": v.to_json()} for (i, j, k), v in sorted(self._entries.items())
            ],
        }


def apply_family(T: Tensor3, fam: DegenerationFamily) -> LaurentTensor:
    """``(X(eps), Y(eps), Z(eps)) . T`` computed exactly."""
    if fam.dims != T.dims:
        raise ValueError(f"family dims {fam.dims} do not match tensor dims {T.dims}")
    entries: dict[tuple[int, int, int], Any] = dict(T.items())
    for mode, M in enumerate((fam.X, fam.Y, fam.Z)):
        cols = M.transpose().row_dicts()
        out: dict[tuple[int, int, int], LaurentPoly] = {}
        for idx, v in entries.items():
            for dst, w in cols[idx[mode] - 1].items():
                key = list(idx)
                key[mode] = dst + 1
                key = tuple(key)
                term = _laurent(w) * v
                out[key] = out[key] + term if key in out else term
        entries = out
    return LaurentTensor(T.dims, {k: _laurent(v) for k, v in entries.items()})


def limit(LT: LaurentTensor) -> Tensor3:
    """The tensor at ``eps -> 0``; raises NoLimit if a negative power survives."""
    out = {}
    for idx, v in LT.items():
        try:
            out[idx] = laurent_limit(v)
        except NegativeExponent as exc:
            raise NoLimit(f"entry {idx}: {exc}") from None
    return Tensor3(LT.dims, out)
