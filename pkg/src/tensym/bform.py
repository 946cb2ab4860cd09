"""Stabilizers of non-degenerate bilinear forms.

A full-rank ``B`` splits as ``Q + Lam`` (symmetric plus skew).  With
``E = ker Lam`` and ``F = ker Q`` the profile is ``(e, l, f)`` where
``e = dim E``, ``f = dim F`` and ``l = k - e - f``.  The stabilizer algebra
is ``{X : X B + B X^t = 0}``.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any

from .exact import Matrix, as_fraction, nullspace, rank

__all__ = [
    "BFormProfile",
    "InfeasibleProfile",
    "KTooSmall",
    "SingularForm",
    "case_label",
    "classify",
    "expected_dims",
    "profile",
    "random_with_profile",
    "stabilizer",
    "stabilizer_dim",
    "stabilizer_system",
]

LEMMA_MIN_K = 12


class SingularForm(ValueError):
    pass


class InfeasibleProfile(ValueError):
    pass


class KTooSmall(UserWarning):
    """Case labels are only meaningful for k >= 12."""


@dataclass(frozen=True)
class BFormProfile:
    k: int
    Q: Matrix
    Lambda: Matrix
    e: int
    l: int
    f: int
    q_restricted: int
    stab_dim: int
    case_label: str = "Other"
    expected_dims: frozenset[int] = field(default_factory=frozenset)
    match: bool | None = None
    advisory: bool = False

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "e": self.e,
            "l": self.l,
            "f": self.f,
            "q_restricted": self.q_restricted,
            "stab_dim": self.stab_dim,
            "case_label": self.case_label,
            "expected_dims": sorted(self.expected_dims),
            "match": self.match,
            "advisory": self.advisory,
        }


def _check_square(B: Matrix) -> int:
    if not B.is_square():
        raise SingularForm(f"bilinear form must be square, got {B.rows}x{B.cols}")
    k = B.rows
    if rank(B) < k:
        raise SingularForm("bilinear form is not of full rank")
    return k


def split(B: Matrix) -> tuple[Matrix, Matrix]:
    """``(Q, Lam)`` with ``Q = (B + B^t)/2`` and ``Lam = (B - B^t)/2``."""
    Bt = B.transpose()
    half = Fraction(1, 2)
    return (B + Bt).scale(half), (B - Bt).scale(half)


def stabilizer_system(B: Matrix) -> Matrix:
    """Matrix of ``X -> X B + B X^t`` on the k^2 entries of X (row-major)."""
    k = B.rows
    data: dict[tuple[int, int], Fraction] = {}

    def add(key, v):
        data[key] = data.get(key, Fraction(0)) + v

    # (X B)_{rs} = X_{rt} B_{ts};  (B X^t)_{rs} = B_{rt} X_{st}
    for (t, s), v in B.items():
        for r in range(k):
            add((r * k + s, r * k + t), v)
    for (r, t), v in B.items():
        for s in range(k):
            add((r * k + s, s * k + t), v)
    return Matrix(k * k, k * k, data)


def stabilizer_dim(B: Matrix) -> int:
    k = _check_square(B)
    return k * k - rank(stabilizer_system(B))


def stabilizer(B: Matrix) -> tuple[int, list[Matrix]]:
    """Dimension and basis of the Lie algebra ``{X : X B + B X^t = 0}``."""
    k = _check_square(B)
    N = nullspace(stabilizer_system(B))
    basis = [Matrix(k, k, {(i // k, i % k): v for i, v in enumerate(col) if v}) for col in N.columns()]
    return len(basis), basis


def case_label(k: int, e: int, l: int, f: int) -> str:
    table = {
        (0, 0, k): "A1",
        (k, 0, 0): "A2",
        (0, 1, k - 1): "A3",
        (1, 0, k - 1): "A4",
        (0, 2, k - 2): "B1",
        (1, 1, k - 2): "B2",
        (2, 0, k - 2): "B3",
    }
    return table.get((e, l, f), "Other")


def expected_dims(label: str, k: int) -> frozenset[int]:
    """Candidate stabilizer dimensions for each exceptional case.

    B1 has two orbits; B3 carries both the headline value ``C(k,2) - k + 1``
    and the value ``C(k-1,2) + 1`` from the direct e = 2 count.
    """
    c = comb(k, 2)
    return frozenset({
        "A1": {comb(k + 1, 2)},
        "A2": {c},
        "A3": {c + 1},
        "A4": {c},
        "B1": {c - k + 3, c - k + 2},
        "B2": {c - k + 1},
        "B3": {c - k + 1, comb(k - 1, 2) + 1},
    }.get(label, set()))


def profile(B: Matrix) -> BFormProfile:
    k = _check_square(B)
    Q, Lam = split(B)
    e = k - rank(Lam)
    f = k - rank(Q)
    E = nullspace(Lam)
    q_restricted = rank(E.transpose() @ Q @ E) if e else 0
    stab_dim = stabilizer_dim(B)
    return BFormProfile(k, Q, Lam, e, k - e - f, f, q_restricted, stab_dim)


def classify(B: Matrix) -> BFormProfile:
    """Profile plus case label, expected dimensions and whether they match."""
    p = profile(B)
    label = case_label(p.k, p.e, p.l, p.f)
    exp = expected_dims(label, p.k)
    advisory = p.k < LEMMA_MIN_K
    if advisory:
        warnings.warn(f"k = {p.k} < {LEMMA_MIN_K}: case label is advisory only", KTooSmall, stacklevel=2)
    if label == "Other":
        match = p.stab_dim <= comb(p.k, 2) - p.k - 1
    else:
        match = p.stab_dim in exp
    return BFormProfile(
        p.k, p.Q, p.Lambda, p.e, p.l, p.f, p.q_restricted, p.stab_dim,
        case_label=label, expected_dims=exp, match=match, advisory=advisory,
    )


# ---------------------------------------------------------------------------
# Generator


def _symplectic_pairs(pairs: list[tuple[int, int]], n: int) -> dict[tuple[int, int], Fraction]:
    data = {}
    for x, y in pairs:
        data[(x, y)] = Fraction(1)
        data[(y, x)] = Fraction(-1)
    return data


def canonical_form(k: int, e: int, l: int, f: int, q_restricted: int, subcase: str = "default") -> Matrix:
    """Block representative of the profile on ``W = E + L + F``.

    ``Q`` is ``Id_q`` on ``E1``, a hyperbolic pairing between ``E2`` and
    ``L1`` and ``Id`` on ``L2``; it vanishes on ``F``.  ``Lam`` is zero on
    ``E`` and symplectic on ``L + F``.  In the default subcase ``Lam`` pairs
    basis vectors of ``L + F`` consecutively; ``"isotropic"`` pairs each
    vector of ``L`` with one of ``F`` so ``Lam`` vanishes on ``L``.
    """
    q = q_restricted
    if min(k, e, l, f, q) < 0 or e + l + f != k:
        raise InfeasibleProfile("need e + l + f = k with nonnegative parts")
    if (l + f) % 2:
        raise InfeasibleProfile("rank of the skew part l + f must be even")
    if q > e or e - q > l:
        raise InfeasibleProfile("need q <= e and e - q <= l")
    if subcase not in ("default", "isotropic"):
        raise ValueError(f"unknown subcase {subcase!r}")
    E = list(range(e))
    L = list(range(e, e + l))
    F = list(range(e + l, k))
    data: dict[tuple[int, int], Fraction] = {}
    one = Fraction(1)
    for x in E[:q]:
        data[(x, x)] = one
    for x, y in zip(E[q:], L[: e - q]):
        data[(x, y)] = one
        data[(y, x)] = one
    for y in L[e - q :]:
        data[(y, y)] = one
    LF = L + F
    if subcase == "isotropic":
        if f < l:
            raise InfeasibleProfile("isotropic subcase needs f >= l")
        rest = F[l:]
        candidates = [list(zip(L, F[:l])) + list(zip(rest[0::2], rest[1::2]))]
    else:
        # consecutive pairing first; the alternatives only differ in how L meets F
        candidates = [list(zip(LF[0::2], LF[1::2]))]
        half = len(LF) // 2
        candidates.append(list(zip(LF[:half], LF[half:])))
        candidates.append(list(zip(LF[::-1][0::2], LF[::-1][1::2])))
    for pairs in candidates:
        full = dict(data)
        for key, v in _symplectic_pairs(pairs, k).items():
            full[key] = full.get(key, Fraction(0)) + v
        B = Matrix(k, k, full)
        if rank(B) == k:
            return B
    raise InfeasibleProfile(f"profile {(e, l, f, q)} admits no full-rank form of this shape")


def random_invertible(k: int, rng: random.Random, bound: int = 3) -> Matrix:
    while True:
        S = Matrix.from_rows([[rng.randint(-bound, bound) for _ in range(k)] for _ in range(k)])
        if rank(S) == k:
            return S


def random_with_profile(
    k: int, e: int, l: int, f: int, q_restricted: int, subcase: str = "default", seed: int = 0
) -> Matrix:
    """A random full-rank form congruent to :func:`canonical_form` for the profile."""
    B = canonical_form(k, e, l, f, q_restricted, subcase)
    S = random_invertible(k, random.Random(seed))
    return S @ B @ S.transpose()


def matrix_from_json_obj(obj: Any) -> Matrix:
    try:
        k = obj["k"]
        rows = obj["rows"]
    except (KeyError, TypeError) as exc:
        raise ValueError("bilinear form JSON needs 'k' and 'rows'") from exc
    if len(rows) != k or any(len(r) != k for r in rows):
        raise ValueError("rows do not form a k x k matrix")
    return Matrix.from_rows([[as_fraction(x) for x in r] for r in rows])


def matrix_to_json_obj(B: Matrix) -> dict[str, Any]:
    return {"k": B.rows, "rows": [[str(x) for x in r] for r in B.to_rows()]}
