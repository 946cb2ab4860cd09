"""Named tensors with large symmetry groups and their symmetry dimensions.

All constructors return integer tensors with entries in {-1, 0, 1}, in the
basis and index conventions of the displays they reproduce (1-based; the
0-indexed families ``strassen`` and ``cw_small`` are shifted by one).
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from math import comb

from .tensor import Tensor3

__all__ = [
    "InvalidSize",
    "ZooEntry",
    "construct",
    "cw_big_usual",
    "expected_sym_dim",
    "list_names",
]

THEOREM_MIN_M = 14

THEOREM_EXACT = "TheoremExact"
PRESENTATION_EXACT = "PresentationExact"
PAPER_EXAMPLE = "PaperExample"


class InvalidSize(ValueError):
    pass


@dataclass(frozen=True)
class ZooEntry:
    name: str
    size: int
    tensor: Tensor3
    expected_sym_dim: int
    provenance: str


Terms = list[tuple[int, int, int, int]]


def _unital_part(m: int) -> Terms:
    """``a1 b1 c1 + sum_rho (a1 b_rho c_rho + a_rho b1 c_rho)``."""
    terms = [(1, 1, 1, 1)]
    for r in range(2, m + 1):
        terms += [(1, r, r, 1), (r, 1, r, 1)]
    return terms


def _rank_one(m: int) -> Tensor3:
    return Tensor3.from_terms((m, m, m), [(1, 1, 1, 1)])


def _t0(m: int) -> Tensor3:
    return Tensor3.from_terms((m, m, m), [(1, j, j, 1) for j in range(1, m + 1)])


def _utriv(m: int) -> Tensor3:
    return Tensor3.from_terms((m, m, m), _unital_part(m))


def _cw_big(q: int) -> Tensor3:
    m = q + 2
    terms = _unital_part(m) + [(s, s, m, 1) for s in range(2, m)]
    return Tensor3.from_terms((m, m, m), terms)


def cw_big_usual(q: int) -> Tensor3:
    """The customary presentation, with ``c_1`` and ``c_{q+2}`` in swapped roles."""
    n = q + 2
    terms = [(1, 1, n, 1), (1, n, 1, 1), (n, 1, 1, 1)]
    for l in range(2, q + 2):
        terms += [(l, l, 1, 1), (l, 1, l, 1), (1, l, l, 1)]
    return Tensor3.from_terms((n, n, n), terms)


def _max_even(m: int) -> Tensor3:
    h = m // 2
    terms = _unital_part(m)
    for xi in range(2, h + 1):
        terms += [(xi, xi + h - 1, m, 1), (xi + h - 1, xi, m, -1)]
    return Tensor3.from_terms((m, m, m), terms)


def _max_odd_skew(m: int) -> Tensor3:
    q = (m - 1) // 2
    terms = _unital_part(m) + [(2, 2, m, 1)]
    for eta in range(3, q + 2):
        terms += [(eta, eta + q - 1, m, 1), (eta + q - 1, eta, m, -1)]
    return Tensor3.from_terms((m, m, m), terms)


def _max_minus1_odd(m: int) -> Tensor3:
    p = (m - 1) // 2
    terms = _unital_part(m)
    for xi in range(2, p + 2):
        terms += [(xi, xi + p, 1, 1), (xi + p, xi, 1, -1)]
    return Tensor3.from_terms((m, m, m), terms)


def _strassen(q: int) -> Tensor3:
    terms = []
    for j in range(1, q + 1):
        terms += [(1, j + 1, j, 1), (j + 1, 1, j, 1)]
    return Tensor3.from_terms((q + 1, q + 1, q), terms)


def _cw_small(q: int) -> Tensor3:
    terms = []
    for j in range(2, q + 2):
        terms += [(1, j, j, 1), (j, 1, j, 1), (j, j, 1, 1)]
    return Tensor3.from_terms((q + 1, q + 1, q + 1), terms)


def _mcisym(m: int) -> Tensor3:
    terms = [(1, 1, 1, 1)]
    for r in range(2, m + 1):
        terms += [(1, r, r, 1), (r, 1, r, 1), (r, r, 1, 1)]
    return Tensor3.from_terms((m, m, m), terms)


def _skew3(m: int) -> Tensor3:
    perms = {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1, (2, 1, 3): -1, (1, 3, 2): -1, (3, 2, 1): -1}
    return Tensor3.from_terms((3, 3, 3), [(i, j, k, s) for (i, j, k), s in perms.items()])


@dataclass(frozen=True)
class _Spec:
    build: Callable[[int], Tensor3]
    formula: Callable[[int], int]
    check: Callable[[int], str | None]
    parameter: str
    theorem: bool = False
    constraint: str = ""


def _at_least(n: int) -> Callable[[int], str | None]:
    return lambda s: None if s >= n else f"size must be >= {n}"


def _even_at_least(n: int) -> Callable[[int], str | None]:
    return lambda s: None if s >= n and s % 2 == 0 else f"size must be even and >= {n}"


def _odd_at_least(n: int) -> Callable[[int], str | None]:
    return lambda s: None if s >= n and s % 2 == 1 else f"size must be odd and >= {n}"


_SPECS: dict[str, _Spec] = {
    "rank_one": _Spec(_rank_one, lambda m: 3 * m * m - 3 * m, _at_least(1), "m", constraint="m >= 1"),
    "t0": _Spec(_t0, lambda m: 2 * m * m - m - 1, _at_least(1), "m", constraint="m >= 1"),
    "utriv": _Spec(_utriv, lambda m: m * m - 1, _at_least(1), "m", constraint="m >= 1"),
    "cw_big": _Spec(
        _cw_big, lambda q: ((q + 2) ** 2 + (q + 2)) // 2, _at_least(1), "q", theorem=True,
        constraint="q >= 1, m = q + 2",
    ),
    "max_even": _Spec(
        _max_even, lambda m: (m * m + 3 * m) // 2 - 2, _even_at_least(4), "m", theorem=True,
        constraint="m even, m >= 4",
    ),
    "max_odd_skew": _Spec(
        _max_odd_skew, lambda m: (m * m + m) // 2, _odd_at_least(5), "m", theorem=True,
        constraint="m odd, m >= 5",
    ),
    "max_minus1_odd": _Spec(
        _max_minus1_odd, lambda m: (m * m + m) // 2 - 1, _odd_at_least(3), "m", theorem=True,
        constraint="m odd, m >= 3",
    ),
    "strassen": _Spec(_strassen, lambda q: q * q + q, _at_least(1), "q", constraint="q >= 1"),
    "cw_small": _Spec(_cw_small, lambda q: comb(q, 2) + 1, _at_least(1), "q", constraint="q >= 1"),
    "mcIsym": _Spec(_mcisym, lambda m: comb(m - 1, 2), _at_least(2), "m", constraint="m >= 2"),
    "skew3": _Spec(
        _skew3, lambda m: 8, lambda s: None if s == 3 else "skew3 exists only for size 3", "m",
        constraint="size fixed at 3",
    ),
}


def list_names() -> list[dict[str, str]]:
    """Stable listing of constructor names with their size parameter and constraint."""
    return [{"name": n, "parameter": s.parameter, "constraint": s.constraint} for n, s in _SPECS.items()]


def _lookup(name: str, size: int | None) -> tuple[_Spec, int]:
    try:
        spec = _SPECS[name]
    except KeyError:
        raise KeyError(f"unknown zoo tensor {name!r}; known: {', '.join(_SPECS)}") from None
    if name == "skew3" and size is None:
        size = 3
    if size is None:
        raise InvalidSize(f"{name} needs a size")
    problem = spec.check(size)
    if problem:
        raise InvalidSize(f"{name}: {problem}")
    return spec, size


def _provenance(name: str, spec: _Spec, size: int) -> str:
    if not spec.theorem:
        return PAPER_EXAMPLE
    m = size + 2 if name == "cw_big" else size
    return THEOREM_EXACT if m >= THEOREM_MIN_M else PRESENTATION_EXACT


def expected_sym_dim(name: str, size: int | None = None) -> tuple[int, str]:
    """Closed-form symmetry dimension for a named tensor and its provenance label."""
    spec, size = _lookup(name, size)
    return spec.formula(size), _provenance(name, spec, size)


def construct(name: str, size: int | None = None) -> ZooEntry:
    spec, size = _lookup(name, size)
    value, prov = expected_sym_dim(name, size)
    return ZooEntry(name, size, spec.build(size), value, prov)
