"""Exact scalars and linear algebra over the rationals.

Scalars are :class:`fractions.Fraction` (always reduced, positive
denominator) or :class:`LaurentPoly` in one formal parameter ``eps``.
:class:`Matrix` is an immutable sparse container; the elimination
routines below never mutate their inputs.
"""

from __future__ import annotations

import heapq
import random
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, Union

from sympy import randprime

__all__ = [
    "Fraction",
    "LaurentPoly",
    "Matrix",
    "NegativeExponent",
    "Span",
    "as_fraction",
    "det",
    "inverse",
    "laurent_limit",
    "modular_rank",
    "nullspace",
    "rank",
    "rref",
]

Scalar = Union[Fraction, "LaurentPoly"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class NegativeExponent(ValueError):
    """A Laurent polynomial has a pole at eps = 0, so its limit does not exist."""


def as_fraction(value: Any) -> Fraction:
    """Coerce ints, Fractions and decimal strings like ``"-1/2"`` to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Finite sum ``sum c_e eps**e`` with integer exponents and rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Any] | None = None):
        clean: dict[int, Fraction] = {}
        for exp, coeff in (terms or {}).items():
            c = as_fraction(coeff)
            if c:
                clean[int(exp)] = c
        self._terms = dict(sorted(clean.items()))
        self._hash: int | None = None

    @classmethod
    def constant(cls, value: Any) -> LaurentPoly:
        return cls({0: value})

    @classmethod
    def monomial(cls, exp: int, coeff: Any = 1) -> LaurentPoly:
        return cls({exp: coeff})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def min_exponent(self) -> int | None:
        return min(self._terms) if self._terms else None

    def max_exponent(self) -> int | None:
        return max(self._terms) if self._terms else None

    def coeff(self, exp: int) -> Fraction:
        return self._terms.get(exp, _ZERO)

    def evaluate(self, eps: Any) -> Fraction:
        e = as_fraction(eps)
        return sum((c * e**k for k, c in self._terms.items()), _ZERO)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @staticmethod
    def _lift(other: Any) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.constant(other)

    def __add__(self, other: Any) -> LaurentPoly:
        o = self._lift(other)
        out = dict(self._terms)
        for k, c in o._terms.items():
            out[k] = out.get(k, _ZERO) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: Any) -> LaurentPoly:
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> LaurentPoly:
        return self._lift(other) - self

    def __mul__(self, other: Any) -> LaurentPoly:
        o = self._lift(other)
        out: dict[int, Fraction] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in o._terms.items():
                out[k1 + k2] = out.get(k1 + k2, _ZERO) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((k, c),) = self._terms.items()
            return LaurentPoly({k * n: c**n})
        out = LaurentPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == LaurentPoly.constant(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "LaurentPoly(0)"
        parts = [f"{c}*eps^{k}" if k else str(c) for k, c in self._terms.items()]
        return "LaurentPoly(" + " + ".join(parts) + ")"

    def to_json(self) -> dict[str, str]:
        return {str(k): str(c) for k, c in self._terms.items()}

    @classmethod
    def from_json(cls, obj: Mapping[str, str]) -> LaurentPoly:
        return cls({int(k): as_fraction(v) for k, v in obj.items()})


def laurent_limit(p: LaurentPoly | Fraction | int) -> Fraction:
    """Value of ``p`` as eps -> 0; raises NegativeExponent if ``p`` has a pole."""
    if not isinstance(p, LaurentPoly):
        return as_fraction(p)
    low = p.min_exponent()
    if low is not None and low < 0:
        raise NegativeExponent(f"term eps^{low} has no limit at eps = 0")
    return p.coeff(0)


# ---------------------------------------------------------------------------
# Matrices


class Matrix:
    """Immutable ``rows x cols`` matrix stored as a map of nonzero entries.

    Indices are 0-based.  Entries are Fractions or LaurentPolys.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Mapping[tuple[int, int], Any] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        clean: dict[tuple[int, int], Scalar] = {}
        for (r, c), v in (data or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            if not isinstance(v, LaurentPoly):
                v = as_fraction(v)
            if v:
                clean[(r, c)] = v
        self.rows = rows
        self.cols = cols
        self._data = clean

    # construction ---------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]]) -> Matrix:
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        data = {}
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                data[(r, c)] = v
        return cls(nrows, ncols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], nrows: int | None = None) -> Matrix:
        n = len(columns[0]) if columns else (nrows or 0)
        data = {(r, c): v for c, col in enumerate(columns) for r, v in enumerate(col)}
        return cls(n, len(columns), data)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(n, n, {(i, i): _ONE for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls(rows, cols)

    @classmethod
    def diag(cls, values: Sequence[Any]) -> Matrix:
        return cls(len(values), len(values), {(i, i): v for i, v in enumerate(values)})

    @classmethod
    def block_diag(cls, *blocks: Matrix) -> Matrix:
        data = {}
        r0 = c0 = 0
        for b in blocks:
            for (r, c), v in b._data.items():
                data[(r0 + r, c0 + c)] = v
            r0 += b.rows
            c0 += b.cols
        return cls(r0, c0, data)

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[Scalar, ...]:
        """Row-major sequence of all entries (zeros included)."""
        return tuple(self[r, c] for r in range(self.rows) for c in range(self.cols))

    def items(self) -> Iterable[tuple[tuple[int, int], Scalar]]:
        return self._data.items()

    def nnz(self) -> int:
        return len(self._data)

    def __getitem__(self, key: tuple[int, int]) -> Scalar:
        r, c = key
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(key)
        return self._data.get((r, c), _ZERO)

    def row_dicts(self) -> list[dict[int, Scalar]]:
        out: list[dict[int, Scalar]] = [{} for _ in range(self.rows)]
        for (r, c), v in self._data.items():
            out[r][c] = v
        return out

    def to_rows(self) -> list[list[Scalar]]:
        out = [[_ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), v in self._data.items():
            out[r][c] = v
        return out

    def column(self, c: int) -> list[Scalar]:
        return [self[r, c] for r in range(self.rows)]

    def columns(self) -> list[list[Scalar]]:
        cols = [[_ZERO] * self.rows for _ in range(self.cols)]
        for (r, c), v in self._data.items():
            cols[c][r] = v
        return cols

    def is_zero(self) -> bool:
        return not self._data

    def is_square(self) -> bool:
        return self.rows == self.cols

    # algebra --------------------------------------------------------------

    def transpose(self) -> Matrix:
        return Matrix(self.cols, self.rows, {(c, r): v for (r, c), v in self._data.items()})

    T = property(transpose)

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same_shape(other)
        data = dict(self._data)
        for k, v in other._data.items():
            data[k] = data[k] + v if k in data else v
        return Matrix(self.rows, self.cols, data)

    def __neg__(self) -> Matrix:
        return Matrix(self.rows, self.cols, {k: -v for k, v in self._data.items()})

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def scale(self, s: Any) -> Matrix:
        if not isinstance(s, LaurentPoly):
            s = as_fraction(s)
        return Matrix(self.rows, self.cols, {k: v * s for k, v in self._data.items()})

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        right = other.row_dicts()
        data: dict[tuple[int, int], Scalar] = {}
        for (r, k), v in self._data.items():
            for c, w in right[k].items():
                key = (r, c)
                data[key] = data[key] + v * w if key in data else v * w
        return Matrix(self.rows, other.cols, data)

    def apply(self, vector: Sequence[Any]) -> list[Scalar]:
        if len(vector) != self.cols:
            raise ValueError("vector length mismatch")
        out: list[Scalar] = [_ZERO] * self.rows
        for (r, c), v in self._data.items():
            x = vector[c]
            if x:
                out[r] = out[r] + v * x
        return out

    def hstack(self, other: Matrix) -> Matrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        data = dict(self._data)
        data.update({(r, c + self.cols): v for (r, c), v in other._data.items()})
        return Matrix(self.rows, self.cols + other.cols, data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        rmap = {r: i for i, r in enumerate(rows)}
        cmap = {c: j for j, c in enumerate(cols)}
        data = {(rmap[r], cmap[c]): v for (r, c), v in self._data.items() if r in rmap and c in cmap}
        return Matrix(len(rows), len(cols), data)

    def map(self, fn) -> Matrix:
        return Matrix(self.rows, self.cols, {k: fn(v) for k, v in self._data.items()})

    def _check_same_shape(self, other: Matrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, frozenset(self._data.items())))

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            body = "; ".join(" ".join(str(v) for v in row) for row in self.to_rows())
            return f"Matrix({self.rows}x{self.cols}: {body})"
        return f"Matrix({self.rows}x{self.cols}, nnz={self.nnz()})"


def _require_rational(M: Matrix) -> None:
    for _, v in M.items():
        if isinstance(v, LaurentPoly):
            raise TypeError("operation requires a matrix over the rationals")


# ---------------------------------------------------------------------------
# Dense fraction-free elimination (Bareiss)


def _integer_rows(M: Matrix) -> list[list[int]]:
    """Scale each row by the lcm of its denominators; rank and det sign are kept."""
    rows = M.to_rows()
    out = []
    for row in rows:
        den = 1
        for v in row:
            d = v.denominator
            den = den * d // _gcd(den, d)
        out.append([int(v * den) for v in row])
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _bareiss(rows: list[list[int]], *, square: bool) -> tuple[int, int]:
    """Fraction-free elimination in place. Returns (rank, signed last pivot)."""
    n, m = len(rows), (len(rows[0]) if rows else 0)
    prev = 1
    sign = 1
    r = 0
    for c in range(m):
        if r == n:
            break
        # smallest nonzero magnitude keeps intermediate growth down
        best = None
        for i in range(r, n):
            v = rows[i][c]
            if v and (best is None or abs(v) < abs(rows[best][c])):
                best = i
        if best is None:
            if square:
                return r, 0
            continue
        if best != r:
            rows[r], rows[best] = rows[best], rows[r]
            sign = -sign
        piv = rows[r][c]
        prow = rows[r]
        for i in range(r + 1, n):
            row = rows[i]
            f = row[c]
            for j in range(c + 1, m):
                row[j] = (piv * row[j] - f * prow[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r, sign * prev


def det(M: Matrix) -> Fraction:
    """Exact determinant by Bareiss elimination."""
    if not M.is_square():
        raise ValueError(f"determinant of non-square {M.rows}x{M.cols} matrix")
    _require_rational(M)
    if M.rows == 0:
        return _ONE
    den = 1
    rows = M.to_rows()
    scaled = []
    for row in rows:
        d = 1
        for v in row:
            d = d * v.denominator // _gcd(d, v.denominator)
        den *= d
        scaled.append([int(v * d) for v in row])
    r, last = _bareiss(scaled, square=True)
    if r < M.rows:
        return _ZERO
    return Fraction(last, den)


# ---------------------------------------------------------------------------
# Sparse Gaussian elimination over Q or GF(p)


class _Field:
    """Arithmetic on dict rows over Q (p=None) or GF(p)."""

    def __init__(self, p: int | None = None):
        self.p = p

    def inv(self, x):
        return pow(x, -1, self.p) if self.p else 1 / x

    def norm(self, x):
        return x % self.p if self.p else x


def _reduce(row: dict[int, Any], pivots: Mapping[int, Mapping[int, Any]], p: int | None) -> dict[int, Any]:
    """Eliminate every pivot column from ``row`` (in place), in increasing column order."""
    heap = list(row)
    heapq.heapify(heap)
    last = -1
    while heap:
        c = heapq.heappop(heap)
        if c == last:
            continue
        last = c
        f = row.get(c)
        if not f or c not in pivots:
            continue
        for cc, w in pivots[c].items():
            nv = row.get(cc, 0) - f * w
            if p:
                nv %= p
            if nv:
                if cc not in row:
                    heapq.heappush(heap, cc)
                row[cc] = nv
            else:
                row.pop(cc, None)
    return row


def _echelon(rows: Iterable[Mapping[int, Any]], field: _Field) -> dict[int, dict[int, Any]]:
    """Row echelon basis keyed by pivot column.

    Each stored row has coefficient 1 at its pivot and only columns greater
    than its pivot otherwise.
    """
    p = field.p
    pivots: dict[int, dict[int, Any]] = {}
    for src in rows:
        row = {c: field.norm(v) for c, v in src.items()}
        row = _reduce({c: v for c, v in row.items() if v}, pivots, p)
        if not row:
            continue
        lead = min(row)
        inv = field.inv(row[lead])
        if p:
            pivots[lead] = {c: v * inv % p for c, v in row.items()}
        else:
            pivots[lead] = {c: v * inv for c, v in row.items()}
    return pivots


def _back_substitute(pivots: dict[int, dict[int, Any]], field: _Field) -> dict[int, dict[int, Any]]:
    """Turn an echelon basis into reduced row echelon form."""
    p = field.p
    order = sorted(pivots, reverse=True)
    done: dict[int, dict[int, Any]] = {}
    for lead in order:
        row = dict(pivots[lead])
        for c in sorted(c for c in row if c != lead and c in done):
            f = row.get(c)
            if not f:
                continue
            for cc, w in done[c].items():
                nv = row.get(cc, 0) - f * w
                if p:
                    nv %= p
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        done[lead] = row
    return done


def rref(M: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form over Q and the pivot columns."""
    _require_rational(M)
    field = _Field()
    red = _back_substitute(_echelon(M.row_dicts(), field), field)
    piv = tuple(sorted(red))
    data = {(i, c): v for i, lead in enumerate(piv) for c, v in red[lead].items()}
    return Matrix(len(piv), M.cols, data), piv


def nullspace(M: Matrix) -> Matrix:
    """Columns form a basis of ``{x : M x = 0}``, in reduced column echelon form.

    Basis vector ``k`` has a 1 in the k-th free column and zeros in the
    other free columns.
    """
    _require_rational(M)
    field = _Field()
    red = _back_substitute(_echelon(M.row_dicts(), field), field)
    free = [c for c in range(M.cols) if c not in red]
    col_of = {f: k for k, f in enumerate(free)}
    data: dict[tuple[int, int], Fraction] = {}
    for f in free:
        data[(f, col_of[f])] = _ONE
    for lead, row in red.items():
        for c, v in row.items():
            if c != lead:
                data[(lead, col_of[c])] = -v
    return Matrix(M.cols, len(free), data)


def inverse(M: Matrix) -> Matrix:
    """Exact inverse; raises ZeroDivisionError when singular."""
    if not M.is_square():
        raise ValueError("inverse of non-square matrix")
    n = M.rows
    aug = M.hstack(Matrix.identity(n))
    R, piv = rref(aug)
    if piv[:n] != tuple(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return R.submatrix(range(n), range(n, 2 * n))


# ---------------------------------------------------------------------------
# Rank


_DENSE_LIMIT = 40_000  # rows*cols below which dense Bareiss is used


def _exact_rank(M: Matrix) -> int:
    if M.is_zero():
        return 0
    if M.rows * M.cols <= _DENSE_LIMIT:
        return _bareiss(_integer_rows(M), square=False)[0]
    return len(_echelon(M.row_dicts(), _Field()))


def _rank_mod(M: Matrix, p: int) -> int:
    rows = []
    for row in M.row_dicts():
        rows.append({c: v.numerator * pow(v.denominator, -1, p) % p for c, v in row.items()})
    return len(_echelon(rows, _Field(p)))


def _denominators_ok(M: Matrix, p: int) -> bool:
    return all(v.denominator % p for _, v in M.items())


def modular_rank(M: Matrix, *, primes: int = 3, seed: int = 0, threads: int | None = None) -> tuple[int, list[int]]:
    """Maximum rank of ``M`` modulo ``primes`` random primes near 2**62.

    Returns ``(rank, per-prime ranks)``.  Rank mod p never exceeds the rank
    over Q, so the result is a lower bound that is exact with high probability.
    """
    _require_rational(M)
    rng = random.Random(seed)
    chosen: list[int] = []
    while len(chosen) < max(primes, 1):
        lo = 2**62 - 2**40
        p = randprime(lo + rng.randrange(2**39), 2**62)
        if p not in chosen and _denominators_ok(M, p):
            chosen.append(p)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            ranks = list(pool.map(lambda q: _rank_mod(M, q), chosen))
    else:
        ranks = [_rank_mod(M, q) for q in chosen]
    return max(ranks), ranks


def rank(M: Matrix, mode: str = "exact", *, seed: int = 0) -> int:
    """Rank of a rational matrix.

    ``mode="exact"`` is deterministic; ``mode="modular"`` is probabilistic
    (see :func:`modular_rank`).
    """
    _require_rational(M)
    if mode == "exact":
        return _exact_rank(M)
    if mode == "modular":
        return modular_rank(M, seed=seed)[0]
    raise ValueError(f"unknown rank mode {mode!r}")


class Span:
    """Exact span of a set of rational vectors with a membership test.

    ``v in span`` is the rank test ``rank([basis | v]) == rank(basis)``,
    carried out by reducing ``v`` against an echelon basis.
    """

    def __init__(self, vectors: Iterable[Sequence[Any] | Mapping[int, Any]], length: int):
        self.length = length
        self._field = _Field()
        self._pivots = _echelon((_as_sparse(v) for v in vectors), self._field)

    @property
    def dim(self) -> int:
        return len(self._pivots)

    def __contains__(self, vector: Sequence[Any] | Mapping[int, Any]) -> bool:
        return not _reduce(_as_sparse(vector), self._pivots, None)


def _as_sparse(v: Sequence[Any] | Mapping[int, Any]) -> dict[int, Any]:
    if isinstance(v, Mapping):
        return {int(k): as_fraction(x) for k, x in v.items() if x}
    return {i: as_fraction(x) for i, x in enumerate(v) if x}
