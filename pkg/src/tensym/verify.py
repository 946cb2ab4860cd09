"""Verification sweeps over the named tensors and the bilinear-form cases.

Each check returns a plain dict row so results can be merged, sorted and
serialized deterministically.  Everything here runs in exact mode.
"""

from __future__ import annotations

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from typing import Any

from .bform import InfeasibleProfile, classify, random_with_profile
from .symmetry import symmetry_report
from .tensor import genericity
from .zoo import THEOREM_EXACT, construct

__all__ = [
    "M_RANGE",
    "LEMMA_KS",
    "check_lemma_case",
    "check_theorem_tensor",
    "lemma_cases",
    "run_pool",
    "theorem_jobs",
    "worker_count",
]

M_RANGE = (4, 20)
LEMMA_KS = (12, 13, 14)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("TENSYM_THREADS", "1")))
    except ValueError:
        return 1


def run_pool(fn: Callable[..., dict[str, Any]], jobs: Iterable[tuple], workers: int | None = None) -> list[dict[str, Any]]:
    """Run ``fn(*job)`` for every job; order of results follows ``jobs``."""
    jobs = list(jobs)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def theorem_jobs(m: int) -> list[tuple[str, int]]:
    """Named tensors checked at size ``m``, with the size argument each constructor takes."""
    if m % 2 == 0:
        return [("max_even", m), ("cw_big", m - 2)]
    return [("max_odd_skew", m), ("cw_big", m - 2), ("max_minus1_odd", m)]


def check_theorem_tensor(name: str, size: int, trials: int = 20, seed: int = 0) -> dict[str, Any]:
    entry = construct(name, size)
    T = entry.tensor
    m = T.dims[0]
    gen = genericity(T, trials=trials, seed=seed)
    computed = symmetry_report(T, "exact").sym_dim
    asserted = entry.provenance == THEOREM_EXACT
    ok = computed == entry.expected_sym_dim and gen.one_generic
    return {
        "name": name,
        "m": m,
        "size": size,
        "expected": entry.expected_sym_dim,
        "computed": computed,
        "provenance": entry.provenance,
        "one_generic": gen.one_generic,
        "match": ok,
        "asserted": asserted,
    }


# (label, e, l, f, q_restricted, subcase)
def lemma_cases(k: int) -> list[tuple[str, int, int, int, int, str]]:
    """Profiles for the seven exceptional cases at ``k``, skipping those of the wrong parity.

    B1 is checked with the skew part nondegenerate on ``L`` and with it zero
    there; B2 with ``Q`` nonzero and zero on ``E``.
    """
    cases: list[tuple[str, int, int, int, int, str]] = []
    even = k % 2 == 0
    if even:
        cases.append(("A1", 0, 0, k, 0, "default"))
    cases.append(("A2", k, 0, 0, k, "default"))
    if even:
        cases.append(("A3", 0, 1, k - 1, 0, "default"))
    else:
        cases.append(("A4", 1, 0, k - 1, 1, "default"))
    if even:
        cases.append(("B1", 0, 2, k - 2, 0, "default"))
        cases.append(("B1", 0, 2, k - 2, 0, "isotropic"))
        cases.append(("B3", 2, 0, k - 2, 2, "default"))
    else:
        cases.append(("B2", 1, 1, k - 2, 1, "default"))
        cases.append(("B2", 1, 1, k - 2, 0, "default"))
    return cases


def check_lemma_case(k: int, label: str, e: int, l: int, f: int, q: int, subcase: str, seed: int = 0) -> dict[str, Any]:
    row: dict[str, Any] = {
        "k": k, "case": label, "e": e, "l": l, "f": f, "q_restricted": q, "subcase": subcase,
    }
    try:
        B = random_with_profile(k, e, l, f, q, subcase=subcase, seed=seed)
    except InfeasibleProfile as exc:
        row.update(feasible=False, reason=str(exc), stab_dim=None, expected_dims=[], match=False)
        return row
    p = classify(B)
    row.update(
        feasible=True,
        computed_label=p.case_label,
        stab_dim=p.stab_dim,
        expected_dims=sorted(p.expected_dims),
        match=bool(p.match) and p.case_label == label,
    )
    return row
