"""``tensym`` command line.

Every subcommand prints one JSON document on stdout (or a plain table with
``--table``).  Exit codes: 0 all checks pass, 1 a checked equality failed,
2 bad input or usage.  Wall time goes to stderr so stdout is reproducible.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
import warnings
from collections.abc import Sequence
from typing import Any

from . import __version__
from .bform import (
    InfeasibleProfile,
    KTooSmall,
    classify,
    matrix_from_json_obj,
    matrix_to_json_obj,
    random_with_profile,
)
from .obstructions import (
    DegenerationFamily,
    NoLimit,
    apply_family,
    binding_family,
    commutator_obstruction,
    identity_family,
    limit,
    one_a_family,
)
from .symmetry import symmetry_report
from .tensor import NonInvertibleWitness, Tensor3, TensorParseError, genericity, parse_rational
from .verify import (
    LEMMA_KS,
    M_RANGE,
    check_lemma_case,
    check_theorem_tensor,
    lemma_cases,
    run_pool,
    theorem_jobs,
)
from .zoo import InvalidSize, construct, list_names

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 already; keep the message on stderr
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# helpers


def _read_json(path: str) -> tuple[Any, bytes]:
    try:
        raw = sys.stdin.buffer.read() if path == "-" else open(path, "rb").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(raw), raw
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from exc


def _read_tensor(path: str) -> tuple[Tensor3, bytes]:
    obj, raw = _read_json(path)
    try:
        return Tensor3.from_json_obj(obj), raw
    except TensorParseError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _digest(*blobs: bytes) -> str:
    h = hashlib.sha256()
    for b in blobs:
        h.update(hashlib.sha256(b).digest())
    return h.hexdigest()


def _parse_m_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise UsageError(f"--m-range must look like a..b, got {text!r}") from None
    if not (M_RANGE[0] <= lo <= hi <= M_RANGE[1]):
        raise UsageError(f"--m-range must lie within {M_RANGE[0]}..{M_RANGE[1]}")
    return lo, hi


def _parse_covector(text: str) -> list:
    try:
        return [parse_rational(x.strip()) for x in text.split(",")]
    except (TensorParseError, ValueError) as exc:
        raise UsageError(f"bad witness {text!r}: {exc}") from exc


def _table(rows: list[dict[str, Any]]) -> str:
    if not rows:
        return "(no rows)"
    cols = list(rows[0])
    for r in rows[1:]:
        cols += [c for c in r if c not in cols]
    cells = [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    line = lambda vals: "  ".join(v.ljust(w) for v, w in zip(vals, widths)).rstrip()  # noqa: E731
    return "\n".join([line(cols), line(["-" * w for w in widths])] + [line(r) for r in cells])


def _cell(v: Any) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return "" if v is None else str(v)


def _rows_for_table(results: Any) -> list[dict[str, Any]]:
    if isinstance(results, dict) and isinstance(results.get("rows"), list):
        return results["rows"]
    if isinstance(results, list):
        return results
    return [{"key": k, "value": v} for k, v in sorted(results.items())]


# ---------------------------------------------------------------------------
# subcommands; each returns (results, mode, exit_code, input_digest)


def cmd_analyze(args) -> tuple[Any, str, int, str]:
    T, raw = _read_tensor(args.path)
    gen = genericity(T, trials=args.trials, seed=args.seed)
    rep = symmetry_report(T, args.mode, seed=args.seed)
    results = gen.to_json_obj()
    results["dims"] = list(T.dims)
    results.update(rep.to_json_obj(include_basis=args.basis))
    return results, rep.mode, EXIT_OK, _digest(raw)


def cmd_zoo(args) -> tuple[Any, str, int, str]:
    if args.list or args.name is None:
        return list_names(), "exact", EXIT_OK, _digest(b"")
    try:
        entry = construct(args.name, args.size)
    except (InvalidSize, KeyError) as exc:
        raise UsageError(str(exc).strip("'\"")) from exc
    if args.table:
        return [{"name": entry.name, "size": entry.size, "expected_sym_dim": entry.expected_sym_dim,
                 "provenance": entry.provenance}], "exact", EXIT_OK, _digest(b"")
    # bare tensor JSON so the output can be fed straight back into analyze
    return entry.tensor.to_json_obj(), "exact", EXIT_OK, None


def cmd_verify_theorem(args) -> tuple[Any, str, int, str]:
    lo, hi = _parse_m_range(args.m_range)
    jobs = [(name, size, args.trials, args.seed) for m in range(lo, hi + 1) for name, size in theorem_jobs(m)]
    rows = run_pool(check_theorem_tensor, jobs)
    rows.sort(key=lambda r: (r["m"], r["name"]))
    failed = [r for r in rows if r["asserted"] and not r["match"]]
    results = {"m_range": [lo, hi], "rows": rows, "failures": len(failed)}
    return results, "exact", EXIT_MISMATCH if failed else EXIT_OK, _digest(args.m_range.encode())


def cmd_bform(args) -> tuple[Any, str, int, str]:
    if args.bform_cmd == "classify":
        obj, raw = _read_json(args.path)
        try:
            B = matrix_from_json_obj(obj)
            with warnings.catch_warnings(record=True):
                warnings.simplefilter("always", KTooSmall)
                p = classify(B)
        except (ValueError, TypeError) as exc:
            raise UsageError(f"{args.path}: {exc}") from exc
        return p.to_json_obj(), "exact", EXIT_OK, _digest(raw)
    if args.bform_cmd == "generate":
        try:
            B = random_with_profile(args.k, args.e, args.l, args.f, args.q, subcase=args.subcase, seed=args.seed)
        except InfeasibleProfile as exc:
            raise UsageError(str(exc)) from exc
        return matrix_to_json_obj(B), "exact", EXIT_OK, None
    ks = args.k_values or list(LEMMA_KS)
    jobs = [(k, *case, args.seed) for k in ks for case in lemma_cases(k)]
    rows = run_pool(check_lemma_case, jobs)
    failed = [r for r in rows if not r["match"]]
    results = {"k_values": ks, "rows": rows, "failures": len(failed)}
    return results, "exact", EXIT_MISMATCH if failed else EXIT_OK, _digest(json.dumps(ks).encode())


def cmd_borderrank(args) -> tuple[Any, str, int, str]:
    T, raw = _read_tensor(args.path)
    if not T.is_cubic():
        raise UsageError(f"border-rank test needs an m x m x m tensor, got {T.dims}")
    if args.witness:
        alpha = _parse_covector(args.witness)
        if len(alpha) != T.dims[0]:
            raise UsageError(f"witness has length {len(alpha)}, expected {T.dims[0]}")
    else:
        alpha = genericity(T, trials=args.trials, seed=args.seed).witness("A")
        if alpha is None:
            raise UsageError("no certified 1_A witness found; pass --witness")
    try:
        rep = commutator_obstruction(T, alpha)
    except NonInvertibleWitness as exc:
        raise UsageError(str(exc)) from exc
    return rep.to_json_obj(), "exact", EXIT_OK, _digest(raw, (args.witness or "").encode())


_BUILTIN_FAMILIES = {
    "binding": lambda dims: binding_family(dims[0]),
    "one-a": one_a_family,
    "identity": identity_family,
}


def cmd_degenerate(args) -> tuple[Any, str, int, str]:
    T, raw = _read_tensor(args.path)
    if args.family in _BUILTIN_FAMILIES:
        if args.family == "binding" and not T.is_cubic():
            raise UsageError("the binding family needs an m x m x m tensor")
        fam = _BUILTIN_FAMILIES[args.family](T.dims)
        fam_raw = args.family.encode()
    else:
        obj, fam_raw = _read_json(args.family)
        try:
            fam = DegenerationFamily.from_json_obj(obj)
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"{args.family}: {exc}") from exc
    try:
        LT = apply_family(T, fam)
        L = limit(LT)
    except NoLimit as exc:
        raise UsageError(f"no limit: {exc}") from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    results: dict[str, Any] = {"exponents": sorted(LT.exponents()), "limit": L.to_json_obj()}
    if args.sym:
        results["sym_dim_source"] = symmetry_report(T).sym_dim
        results["sym_dim_limit"] = symmetry_report(L).sym_dim
    return results, "exact", EXIT_OK, _digest(raw, fam_raw)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for random witnesses and primes")
    common.add_argument("--trials", type=int, default=20, help="witness trials per factor (default 20)")
    common.add_argument("--mode", choices=("exact", "modular"), default="exact",
                        help="rank mode for analyze; verification always runs exact")
    common.add_argument("--table", action="store_true", help="print a plain-text table instead of JSON")

    p = _Parser(prog="tensym", description="Symmetry algebras, border-rank tests and degenerations of order-3 tensors.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", parents=[common], help="genericity and symmetry dimension of a tensor JSON")
    a.add_argument("path", help="tensor JSON file, or - for stdin")
    a.add_argument("--basis", action="store_true", help="include the annihilator basis (exact mode)")
    a.set_defaults(func=cmd_analyze)

    z = sub.add_parser("zoo", parents=[common], help="emit a named tensor as JSON")
    z.add_argument("name", nargs="?")
    z.add_argument("size", nargs="?", type=int)
    z.add_argument("--list", action="store_true", help="list constructor names")
    z.set_defaults(func=cmd_zoo)

    v = sub.add_parser("verify-theorem", parents=[common], help="check the maximal-symmetry families")
    v.add_argument("--m-range", default="14..18", help="inclusive range a..b within 4..20 (default 14..18)")
    v.set_defaults(func=cmd_verify_theorem)

    b = sub.add_parser("bform", help="bilinear form stabilizers")
    bsub = b.add_subparsers(dest="bform_cmd", required=True, parser_class=_Parser)
    bc = bsub.add_parser("classify", parents=[common], help="profile of a form given as JSON")
    bc.add_argument("path")
    bg = bsub.add_parser("generate", parents=[common], help="random form with a given profile")
    for name in ("k", "e", "l", "f", "q"):
        bg.add_argument(f"--{name}", type=int, required=True)
    bg.add_argument("--subcase", choices=("default", "isotropic"), default="default")
    bv = bsub.add_parser("verify-lemma", parents=[common], help="sweep the exceptional cases")
    bv.add_argument("--k", dest="k_values", type=int, action="append", help="repeatable; default 12, 13, 14")
    b.set_defaults(func=cmd_bform)

    r = sub.add_parser("borderrank", parents=[common], help="commutator obstruction")
    r.add_argument("path")
    r.add_argument("--witness", help="comma-separated covector; default: first certified 1_A witness")
    r.set_defaults(func=cmd_borderrank)

    d = sub.add_parser("degenerate", parents=[common], help="limit of an eps-family applied to a tensor")
    d.add_argument("path")
    d.add_argument("family", help="family JSON file or one of: binding, one-a, identity")
    d.add_argument("--sym", action="store_true", help="also report symmetry dimensions of source and limit")
    d.set_defaults(func=cmd_degenerate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be >= 1")
    start = time.perf_counter()
    try:
        results, mode, code, digest = args.func(args)
    except UsageError as exc:
        print(f"tensym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - start

    if args.table:
        print(_table(_rows_for_table(results)))
    elif digest is None:
        print(json.dumps(results, sort_keys=True, separators=(",", ":")))
    else:
        report = {
            "command": argv,
            "inputs_digest": digest,
            "mode": mode,
            "seed": args.seed,
            "results": results,
        }
        print(json.dumps(report, sort_keys=True, indent=2))
    print(f"wall time: {elapsed:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
