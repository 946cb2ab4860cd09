"""Order-3 tensors over Q: flattenings, contractions, genericity, normal forms.

Indices are 1-based everywhere, both in :class:`Tensor3` and in the JSON
interchange format.
"""

from __future__ import annotations

import json
import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple

from .exact import Matrix, as_fraction, inverse, rank

__all__ = [
    "FACTORS",
    "BasisChange",
    "FactorGenericity",
    "GenericityReport",
    "IncompatibleWitnesses",
    "NonInvertibleWitness",
    "Tensor3",
    "TensorParseError",
    "contract",
    "flatten",
    "flattening_ranks",
    "genericity",
    "normalize_1A",
    "normalize_binding",
    "parse_rational",
    "transform",
    "unit_covector",
]

FACTORS = ("A", "B", "C")
WITNESS_BITS = 30


class TensorParseError(ValueError):
    pass


class NonInvertibleWitness(ValueError):
    """The contraction by the supplied covector is not an invertible matrix."""


class IncompatibleWitnesses(ValueError):
    pass


Index = tuple[int, int, int]


class Tensor3:
    """Sparse tensor in ``C^a (x) C^b (x) C^c`` with rational coefficients."""

    __slots__ = ("dims", "_entries")

    def __init__(self, dims: Sequence[int], entries: Mapping[Index, Any] | None = None):
        a, b, c = (int(d) for d in dims)
        if min(a, b, c) < 0:
            raise ValueError("tensor dimensions must be nonnegative")
        self.dims = (a, b, c)
        clean: dict[Index, Fraction] = {}
        for (i, j, k), v in (entries or {}).items():
            if not (1 <= i <= a and 1 <= j <= b and 1 <= k <= c):
                raise IndexError(f"index {(i, j, k)} outside dims {self.dims}")
            v = as_fraction(v)
            if v:
                clean[(int(i), int(j), int(k))] = v
        self._entries = clean

    @classmethod
    def from_terms(cls, dims: Sequence[int], terms: Iterable[tuple[int, int, int, Any]]) -> Tensor3:
        """Build from ``(i, j, k, coeff)`` terms; repeated indices are summed."""
        acc: dict[Index, Fraction] = {}
        for i, j, k, v in terms:
            acc[(i, j, k)] = acc.get((i, j, k), Fraction(0)) + as_fraction(v)
        return cls(dims, acc)

    @classmethod
    def zero(cls, dims: Sequence[int]) -> Tensor3:
        return cls(dims)

    @property
    def entries(self) -> dict[Index, Fraction]:
        return dict(self._entries)

    def items(self):
        return self._entries.items()

    def __getitem__(self, idx: Index) -> Fraction:
        return self._entries.get(tuple(idx), Fraction(0))

    def __len__(self) -> int:
        return len(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def is_cubic(self) -> bool:
        return self.dims[0] == self.dims[1] == self.dims[2]

    def __add__(self, other: Tensor3) -> Tensor3:
        if self.dims != other.dims:
            raise ValueError("dimension mismatch")
        acc = dict(self._entries)
        for k, v in other._entries.items():
            acc[k] = acc.get(k, Fraction(0)) + v
        return Tensor3(self.dims, acc)

    def __neg__(self) -> Tensor3:
        return Tensor3(self.dims, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other: Tensor3) -> Tensor3:
        return self + (-other)

    def scale(self, s: Any) -> Tensor3:
        s = as_fraction(s)
        return Tensor3(self.dims, {k: v * s for k, v in self._entries.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.dims == other.dims and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.dims, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"Tensor3(dims={self.dims}, nnz={len(self._entries)})"

    # JSON -------------------------------------------------------------------

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "dims": list(self.dims),
            "entries": [
                {"i": i, "j": j, "k": k, "v": str(v)}
                for (i, j, k), v in sorted(self._entries.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Any) -> Tensor3:
        try:
            dims = obj["dims"]
            raw = obj["entries"]
        except (KeyError, TypeError) as exc:
            raise TensorParseError("tensor JSON needs 'dims' and 'entries'") from exc
        if not (isinstance(dims, list) and len(dims) == 3 and all(_is_nat(d) for d in dims)):
            raise TensorParseError(f"bad dims {dims!r}")
        if not isinstance(raw, list):
            raise TensorParseError("'entries' must be a list")
        entries: dict[Index, Fraction] = {}
        for e in raw:
            try:
                idx = (e["i"], e["j"], e["k"])
                text = e["v"]
            except (KeyError, TypeError) as exc:
                raise TensorParseError(f"bad entry {e!r}") from exc
            if not all(_is_nat(x) for x in idx):
                raise TensorParseError(f"bad index in {e!r}")
            if not all(1 <= x <= d for x, d in zip(idx, dims)):
                raise TensorParseError(f"index {idx} outside dims {dims}")
            if idx in entries:
                raise TensorParseError(f"duplicate entry {idx}")
            v = parse_rational(text)
            if v == 0:
                raise TensorParseError(f"explicit zero at {idx}")
            entries[idx] = v
        return cls(dims, entries)

    @classmethod
    def from_json(cls, text: str) -> Tensor3:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TensorParseError(str(exc)) from exc
        return cls.from_json_obj(obj)


def _is_nat(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def parse_rational(text: Any) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` with integer p and q > 0."""
    if not isinstance(text, str):
        raise TensorParseError(f"rational must be a string, got {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError as exc:
        raise TensorParseError(f"bad rational {text!r}") from exc
    if q <= 0:
        raise TensorParseError(f"denominator must be positive in {text!r}")
    return Fraction(p, q)


# ---------------------------------------------------------------------------
# Flattenings and contractions


def _factor_index(factor: str) -> int:
    try:
        return FACTORS.index(factor.upper())
    except (ValueError, AttributeError):
        raise ValueError(f"factor must be one of {FACTORS}, got {factor!r}") from None


def flatten(T: Tensor3, factor: str) -> Matrix:
    """The flattening ``T_X : X^* -> (other two factors)`` as a matrix.

    For factor A the result is ``a x (b*c)`` with row i the vectorized slice
    ``T^{i..}`` (column ``(j-1)*c + (k-1)``); B and C are analogous with the
    remaining indices in their natural order.
    """
    f = _factor_index(factor)
    a, b, c = T.dims
    data = {}
    for (i, j, k), v in T.items():
        if f == 0:
            data[(i - 1, (j - 1) * c + (k - 1))] = v
        elif f == 1:
            data[(j - 1, (i - 1) * c + (k - 1))] = v
        else:
            data[(k - 1, (i - 1) * b + (j - 1))] = v
    rows = T.dims[f]
    cols = (b * c, a * c, a * b)[f]
    return Matrix(rows, cols, data)


def flattening_ranks(T: Tensor3) -> tuple[int, int, int]:
    return tuple(rank(flatten(T, f)) for f in FACTORS)  # type: ignore[return-value]


def contract(T: Tensor3, factor: str, covector: Sequence[Any]) -> Matrix:
    """``T(alpha) = sum_i alpha_i T^{i..}``, a matrix on the two remaining factors."""
    f = _factor_index(factor)
    if len(covector) != T.dims[f]:
        raise ValueError(f"covector has length {len(covector)}, factor {FACTORS[f]} has dimension {T.dims[f]}")
    cov = [as_fraction(x) for x in covector]
    a, b, c = T.dims
    shape = ((b, c), (a, c), (a, b))[f]
    data: dict[tuple[int, int], Fraction] = {}
    for idx, v in T.items():
        w = cov[idx[f] - 1]
        if not w:
            continue
        rest = tuple(x - 1 for n, x in enumerate(idx) if n != f)
        data[rest] = data.get(rest, Fraction(0)) + w * v
    return Matrix(shape[0], shape[1], data)


def unit_covector(n: int, i: int) -> list[Fraction]:
    """The dual basis covector ``alpha^i`` (1-based) of length n."""
    return [Fraction(int(x == i)) for x in range(1, n + 1)]


# ---------------------------------------------------------------------------
# Group action


class BasisChange(NamedTuple):
    X: Matrix
    Y: Matrix
    Z: Matrix

    @classmethod
    def identity(cls, dims: Sequence[int]) -> BasisChange:
        return cls(*(Matrix.identity(n) for n in dims))

    def compose(self, inner: BasisChange) -> BasisChange:
        """``self o inner``: applying ``inner`` first, then ``self``."""
        return BasisChange(self.X @ inner.X, self.Y @ inner.Y, self.Z @ inner.Z)


def _apply_mode(entries: Mapping[Index, Fraction], M: Matrix, mode: int) -> dict[Index, Fraction]:
    cols = M.transpose().row_dicts()  # cols[src] = {dst: coeff}
    out: dict[Index, Fraction] = {}
    for idx, v in entries.items():
        for dst, w in cols[idx[mode] - 1].items():
            key = list(idx)
            key[mode] = dst + 1
            key = tuple(key)
            out[key] = out.get(key, Fraction(0)) + w * v
    return {k: v for k, v in out.items() if v}


def transform(T: Tensor3, X: Matrix, Y: Matrix, Z: Matrix) -> Tensor3:
    """``(X, Y, Z) . T`` with entries ``X^i_i' Y^j_j' Z^k_k' T^{i'j'k'}``."""
    a, b, c = T.dims
    if X.shape != (a, a) or Y.shape != (b, b) or Z.shape != (c, c):
        raise ValueError("basis change shapes do not match tensor dims")
    e = _apply_mode(T.entries, X, 0)
    e = _apply_mode(e, Y, 1)
    e = _apply_mode(e, Z, 2)
    return Tensor3(T.dims, e)


# ---------------------------------------------------------------------------
# Genericity


@dataclass(frozen=True)
class FactorGenericity:
    """``certified`` carries an exact witness covector; ``probably_not`` a failure bound."""

    status: str
    witness: tuple[Fraction, ...] | None = None
    trials: int = 0
    failure_bound: float | None = None

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def to_json_obj(self) -> dict[str, Any]:
        out: dict[str, Any] = {"status": self.status, "trials": self.trials}
        if self.witness is not None:
            out["witness"] = [str(x) for x in self.witness]
        if self.failure_bound is not None:
            out["failure_bound"] = self.failure_bound
        return out


@dataclass(frozen=True)
class GenericityReport:
    flattening_ranks: tuple[int, int, int]
    concise: bool
    one_generic_flags: dict[str, FactorGenericity] = field(default_factory=dict)
    binding: bool = False
    one_generic: bool = False
    extended_convention: bool = False

    def witness(self, factor: str) -> tuple[Fraction, ...] | None:
        return self.one_generic_flags[factor].witness

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "flattening_ranks": list(self.flattening_ranks),
            "concise": self.concise,
            "one_generic_flags": {f: g.to_json_obj() for f, g in self.one_generic_flags.items()},
            "binding": self.binding,
            "one_generic": self.one_generic,
            "extended_convention": self.extended_convention,
        }


def _max_contraction_rank(T: Tensor3, f: int) -> int:
    others = [d for n, d in enumerate(T.dims) if n != f]
    return min(others)


def _factor_genericity(T: Tensor3, f: int, trials: int, rng: random.Random) -> FactorGenericity:
    target = _max_contraction_rank(T, f)
    n = T.dims[f]
    if T.is_zero() or target == 0 or n == 0:
        return FactorGenericity("probably_not", trials=0, failure_bound=1.0)
    for _ in range(trials):
        cov = [Fraction(rng.randint(1, 2**WITNESS_BITS)) for _ in range(n)]
        if rank(contract(T, FACTORS[f], cov)) == target:
            return FactorGenericity("certified", witness=tuple(cov), trials=trials)
    # Schwartz-Zippel: a nonzero minor of degree <= maxdim vanishes w.p. <= maxdim / 2^30
    bound = (max(T.dims) / 2**WITNESS_BITS) ** trials
    return FactorGenericity("probably_not", trials=trials, failure_bound=bound)


def genericity(T: Tensor3, trials: int = 20, seed: int = 0) -> GenericityReport:
    """Conciseness and 1_A/1_B/1_C-genericity with seeded random witnesses.

    A YES answer is certified by an exact rank computation on the witness
    contraction; a NO answer is probabilistic.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ranks = flattening_ranks(T)
    concise = ranks == T.dims
    flags = {}
    for f, name in enumerate(FACTORS):
        rng = random.Random(f"{seed}/{name}")
        flags[name] = _factor_genericity(T, f, trials, rng)
    binding = flags["A"].certified and flags["B"].certified
    return GenericityReport(
        flattening_ranks=ranks,
        concise=concise,
        one_generic_flags=flags,
        binding=binding,
        one_generic=binding and flags["C"].certified,
        extended_convention=not T.is_cubic(),
    )


# ---------------------------------------------------------------------------
# Normal forms


def _invertible_contraction(T: Tensor3, factor: str, covector: Sequence[Any]) -> Matrix:
    M = contract(T, factor, covector)
    if not M.is_square() or rank(M) < M.rows:
        raise NonInvertibleWitness(f"T({factor.lower()}-covector) is not invertible")
    return M


def _complete_to_basis(row: Sequence[Fraction]) -> Matrix:
    """Invertible matrix whose first row is ``row`` and other rows are unit vectors."""
    n = len(row)
    p = next(i for i, x in enumerate(row) if x)
    rows = [list(row)]
    for i in range(n):
        if i != p:
            rows.append([Fraction(int(c == i)) for c in range(n)])
    return Matrix.from_rows(rows)


def normalize_1A(T: Tensor3, alpha: Sequence[Any]) -> tuple[Tensor3, BasisChange]:
    """Move ``T`` so that ``T'^{1jk} = delta_jk``, using the witness ``alpha``.

    Returns the new tensor and the triple ``g`` with ``T' = g . T``.
    """
    alpha = [as_fraction(x) for x in alpha]
    M = _invertible_contraction(T, "A", alpha)
    g = BasisChange(_complete_to_basis(alpha), inverse(M), Matrix.identity(T.dims[2]))
    return transform(T, *g), g


def normalize_binding(T: Tensor3, alpha: Sequence[Any], beta: Sequence[Any]) -> tuple[Tensor3, BasisChange]:
    """Normalize so that both ``T'^{1jk} = delta_jk`` and ``T'^{i1k} = delta_ik``.

    The second step stays inside the stabilizer of the first normalization:
    ``(X, Y, (Y^t)^{-1})`` with ``X`` fixing the first dual basis vector.
    """
    beta = [as_fraction(x) for x in beta]
    if not T.is_cubic():
        raise IncompatibleWitnesses("binding normalization needs a = b = c")
    _invertible_contraction(T, "B", beta)
    T1, g1 = normalize_1A(T, alpha)
    # beta seen from the new basis of B
    beta1 = list(inverse(g1.Y).transpose().apply(beta))
    N = _invertible_contraction(T1, "B", beta1)
    Y = _complete_to_basis(beta1)
    X = Y @ inverse(N)
    if X.row_dicts()[0] != {0: Fraction(1)}:
        raise IncompatibleWitnesses("second normalization leaves the stabilizer of T^{1jk} = delta_jk")
    Z = inverse(Y).transpose()
    g2 = BasisChange(X, Y, Z)
    return transform(T1, *g2), g2.compose(g1)
