"""Command-line front end: compute objects, run individual checks, or run
the whole desk-scale suite with machine-readable reports.

Exit codes: 0 when every executed check passed, 1 when any check failed,
2 on usage errors or guard violations.  Reports are deterministic for a
fixed configuration; DIAGVAR_THREADS caps suite parallelism (0 = auto).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import diagvariety, intlattice
from .errors import DiagvarError, NormalFormError
from .polymatrix import polymatrix_from_json
from .polyring import GF, format_poly

SUITE_CHECKS = ("pofx", "lemma2", "induction", "antidiag", "sop", "fedder", "lemma4", "lemma5")
DEFAULT_PRIMES = (2, 3, 5)
SPEC_LABELS = {"s": "kill_s", "s0": "kill_s0"}


def load_matrix(path: str, kind: str):
    """Load a matrix JSON file; kind is 'poly' or 'int'."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as e:
        raise DiagvarError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DiagvarError(f"{path}: invalid JSON: {e}") from e
    if kind == "poly":
        return polymatrix_from_json(obj)
    if kind == "int":
        return intlattice.intmatrix_from_json(obj)
    raise ValueError(f"unknown matrix kind {kind!r}")


def _record(check: str, n=None, p=None, passed=True, detail=None) -> dict:
    return {"check": check, "n": n, "p": p, "pass": bool(passed), "detail": detail or {}}


# -- one function per suite cell; each returns a single report record ---------


def cell_pofx(n: int, force: bool = False) -> dict:
    P = diagvariety.compute_P(diagvariety.generic_matrix(n), force=force)
    expected = n * (n - 1) // 2
    degree = P.homogeneous_degree()
    detail = {
        "poly": format_poly(P) if len(P.terms) <= 64 else None,
        "terms": len(P.terms),
        "degree": degree,
        "expected_degree": expected,
    }
    if force:
        detail["forced"] = True
    return _record("pofx", n=n, passed=degree == expected, detail=detail)


def cell_lemma2(n: int, mode: str, force: bool = False) -> dict:
    ok = diagvariety.verify_block_factorization(n, mode, force=force)
    detail = {"mode": mode}
    if force:
        detail["forced"] = True
    return _record("lemma2", n=n, passed=ok, detail=detail)


def cell_induction(n: int, force: bool = False) -> dict:
    ok = diagvariety.verify_peeling_identity(n, force=force)
    detail = {"forced": True} if force else {}
    return _record("induction", n=n, passed=ok, detail=detail)


def cell_antidiag(n: int, spec: str, force: bool = False) -> dict:
    coeff = diagvariety.antidiag_unit_coeff(n, SPEC_LABELS[spec], force=force)
    detail = {"spec": spec, "coeff": coeff}
    if force:
        detail["forced"] = True
    return _record("antidiag", n=n, passed=abs(coeff) == 1, detail=detail)


def cell_sop(n: int, force: bool = False) -> dict:
    detail = {}
    if force:
        detail["forced"] = True
    try:
        nf = diagvariety.sop_normal_form(n, force=force)
    except NormalFormError as e:
        detail["error"] = str(e)
        return _record("sop", n=n, passed=False, detail=detail)
    detail.update({"sign": nf.sign, "exponent": nf.exponent})
    return _record("sop", n=n, passed=nf.exponent == n * (n - 1) // 2, detail=detail)


def cell_fedder(n: int, p: int, force: bool = False) -> dict:
    verdict = diagvariety.check_fpure(n, p, force=force)
    detail = {
        "fpure": verdict.fpure,
        "witness": list(verdict.witness) if verdict.witness is not None else None,
        "var_count": verdict.var_count,
    }
    if force:
        detail["forced"] = True
    return _record("fedder", n=n, p=p, passed=verdict.fpure, detail=detail)


def cell_lemma4(n: int, force: bool = False) -> dict:
    A = intlattice.antidiagonal_ones(n)
    report = intlattice.power_diagonal_check(A, force=force)
    ok = report.a == report.b and (not report.a or report.d)
    detail = {"a": report.a, "b": report.b, "d": report.d, "det_diag": report.det_diag}
    if force:
        detail["forced"] = True
    return _record("lemma4", n=n, passed=ok, detail=detail)


def cell_lemma5(n: int, j_max: int | None = None) -> dict:
    report = intlattice.verify_inverse_bands(n, j_max)
    ok = report.b2 and report.odd and report.span and abs(report.p_of_a) == 1
    detail = {
        "b2": report.b2,
        "odd": report.odd,
        "span": report.span,
        "p_of_a": report.p_of_a,
    }
    return _record("lemma5", n=n, passed=ok, detail=detail)


def _run_cell(cell) -> dict:
    name, kwargs = cell
    return _CELL_FUNCS[name](**kwargs)


_CELL_FUNCS = {
    "pofx": cell_pofx,
    "lemma2": cell_lemma2,
    "induction": cell_induction,
    "antidiag": cell_antidiag,
    "sop": cell_sop,
    "fedder": cell_fedder,
    "lemma4": cell_lemma4,
    "lemma5": cell_lemma5,
}


def _suite_cells(max_n: int, primes, checks) -> list:
    cells = []
    if "pofx" in checks:
        for n in range(1, min(max_n, 5) + 1):
            cells.append(("pofx", {"n": n}))
    if "lemma2" in checks:
        for n in range(2, min(max_n, 5) + 1):
            for mode in diagvariety.TILDE_MODES:
                cells.append(("lemma2", {"n": n, "mode": mode}))
    if "induction" in checks:
        for n in range(3, min(max_n, 6) + 1):
            cells.append(("induction", {"n": n}))
    if "antidiag" in checks:
        for n in range(2, min(max_n, 6) + 1):
            for spec in ("s", "s0"):
                cells.append(("antidiag", {"n": n, "spec": spec}))
    if "sop" in checks:
        for n in range(2, min(max_n, 6) + 1):
            cells.append(("sop", {"n": n}))
    if "fedder" in checks:
        for n in range(2, min(max_n, 5) + 1):
            for p in primes:
                if (n, p) in diagvariety.FPURE_SKIPPED_CELLS or p not in diagvariety.FPURE_PRIMES:
                    continue
                cells.append(("fedder", {"n": n, "p": p}))
    if "lemma4" in checks:
        for n in range(2, min(max_n, 8) + 1):
            cells.append(("lemma4", {"n": n}))
    if "lemma5" in checks:
        for n in range(2, min(max_n, 12) + 1):
            cells.append(("lemma5", {"n": n}))
    return cells


def _thread_cap() -> int:
    raw = os.environ.get("DIAGVAR_THREADS")
    if raw is None:
        return 1
    try:
        v = int(raw)
    except ValueError:
        raise DiagvarError(f"DIAGVAR_THREADS must be an integer, got {raw!r}") from None
    if v < 0:
        raise DiagvarError("DIAGVAR_THREADS must be non-negative")
    if v == 0:
        return os.cpu_count() or 1
    return v


def _run_cells(cells) -> list:
    cap = _thread_cap()
    if cap > 1 and len(cells) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(cap, len(cells))) as pool:
            return list(pool.map(_run_cell, cells))
    return [_run_cell(c) for c in cells]


# -- command handlers ----------------------------------------------------------


def _handle_pofx(args) -> list:
    if args.matrix:
        M = load_matrix(args.matrix, "poly")
        if args.spec:
            spec = diagvariety.build_specialization(M.n, SPEC_LABELS.get(args.spec, args.spec), args.mode)
            M = spec.apply_to_matrix(M)
        P = diagvariety.compute_P(M, force=args.force)
        detail = {"poly": format_poly(P), "terms": len(P.terms)}
        return [_record("pofx", n=M.n, detail=detail)]
    n = _require_n(args)
    if args.spec:
        M = diagvariety.generic_matrix(n)
        spec = diagvariety.build_specialization(n, SPEC_LABELS.get(args.spec, args.spec), args.mode)
        P = diagvariety.compute_P(spec.apply_to_matrix(M), force=args.force)
        detail = {"poly": format_poly(P), "terms": len(P.terms), "spec": args.spec}
        return [_record("pofx", n=n, detail=detail)]
    return [cell_pofx(n, force=args.force)]


def _require_n(args) -> int:
    if args.n is None:
        raise DiagvarError("--n is required")
    return args.n


def _handle_lemma2(args) -> list:
    n = _require_n(args)
    modes = [args.mode] if args.mode else list(diagvariety.TILDE_MODES)
    return [cell_lemma2(n, mode, force=args.force) for mode in modes]


def _handle_induction(args) -> list:
    return [cell_induction(_require_n(args), force=args.force)]


def _handle_antidiag(args) -> list:
    n = _require_n(args)
    specs = [args.spec] if args.spec else ["s", "s0"]
    return [cell_antidiag(n, spec, force=args.force) for spec in specs]


def _handle_sop(args) -> list:
    return [cell_sop(_require_n(args), force=args.force)]


def _handle_fedder(args) -> list:
    n = _require_n(args)
    if args.p is None:
        raise DiagvarError("--p is required")
    GF(args.p)  # validates primality
    return [cell_fedder(n, args.p, force=args.force)]


def _handle_lemma4(args) -> list:
    if args.matrix:
        A = load_matrix(args.matrix, "int")
        report = intlattice.power_diagonal_check(A, force=args.force)
        ok = report.a == report.b and (not report.a or report.d)
        detail = {"a": report.a, "b": report.b, "d": report.d, "det_diag": report.det_diag}
        return [_record("lemma4", n=A.n, passed=ok, detail=detail)]
    return [cell_lemma4(_require_n(args), force=args.force)]


def _handle_lemma5(args) -> list:
    return [cell_lemma5(_require_n(args), args.j_max)]


def _record_key(r: dict):
    detail = r.get("detail") or {}
    return (
        r["check"],
        r.get("n") or 0,
        r.get("p") or 0,
        str(detail.get("mode") or detail.get("spec") or ""),
    )


def _handle_suite(args) -> list:
    primes = _parse_primes(args.primes)
    checks = _parse_checks(args.checks)
    cells = _suite_cells(args.max_n, sorted(set(primes)), checks)
    return sorted(_run_cells(cells), key=_record_key)


def _parse_primes(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        p = int(part)
        GF(p)  # validates primality
        out.append(p)
    if not out:
        raise DiagvarError("--primes must name at least one prime")
    return out


def _parse_checks(text: str | None) -> list:
    if not text:
        return list(SUITE_CHECKS)
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part not in SUITE_CHECKS:
            raise DiagvarError(f"unknown check {part!r}; valid: {', '.join(SUITE_CHECKS)}")
        out.append(part)
    return out


# -- rendering -----------------------------------------------------------------


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return "[" + ",".join(str(x) for x in v) + "]"
    return str(v)


def _render_text(records, command: str) -> str:
    if command == "pofx":
        return "\n".join(r["detail"].get("poly") or f"({r['detail'].get('terms')} terms)" for r in records) + "\n"
    lines = []
    for r in records:
        head = f"[{'PASS' if r['pass'] else 'FAIL'}] {r['check']}"
        if r.get("n") is not None:
            head += f" n={r['n']}"
        if r.get("p") is not None:
            head += f" p={r['p']}"
        detail = r.get("detail") or {}
        tail = " ".join(f"{k}={_fmt_value(v)}" for k, v in detail.items() if v is not None)
        lines.append(head + (" " + tail if tail else ""))
    total = len(records)
    passed = sum(1 for r in records if r["pass"])
    if command == "suite":
        lines.append(f"{passed}/{total} checks passed")
    return "\n".join(lines) + "\n"


def _render_json(records) -> str:
    return json.dumps(records, indent=2, sort_keys=True) + "\n"


# -- argument parsing ----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diagvar",
        description="Exact checks for the matrix-of-diagonals determinant P(X) = det(D(X)).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", default=None, help="write the report to a file instead of stdout")
        p.add_argument("--force", action="store_true", help="override size guards (marked in the report)")
        return p

    p = add("pofx", "compute P for the generic or a specialized matrix")
    p.add_argument("--n", type=int)
    p.add_argument("--spec", choices=("s", "s0", "sop", "tilde"))
    p.add_argument("--mode", choices=diagvariety.TILDE_MODES)
    p.add_argument("--matrix", help="JSON file with a polynomial matrix")
    p.set_defaults(handler=_handle_pofx)

    p = add("lemma2", "verify the corner-block factorization of P")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=diagvariety.TILDE_MODES)
    p.set_defaults(handler=_handle_lemma2)

    p = add("induction", "verify the anti-diagonal peeling identity")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_handle_induction)

    p = add("antidiag", "coefficient of the above-anti-diagonal monomial in specialized P")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--spec", choices=("s", "s0"))
    p.set_defaults(handler=_handle_antidiag)

    p = add("sop", "normal form of P under the system-of-parameters specialization")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_handle_sop)

    p = add("fedder", "F-purity of the killed hypersurface over F_p")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(handler=_handle_fedder)

    p = add("lemma4", "power-diagonal span equivalences for a unimodular matrix")
    p.add_argument("--n", type=int, help="size of the anti-triangular ones matrix")
    p.add_argument("--matrix", help="JSON file with an integer matrix")
    p.set_defaults(handler=_handle_lemma4)

    p = add("lemma5", "closed forms for the inverse of the anti-triangular ones matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j-max", type=int, default=None, dest="j_max")
    p.set_defaults(handler=_handle_lemma5)

    p = add("suite", "run every check up to the configured bounds")
    p.add_argument("--max-n", type=int, default=4, dest="max_n")
    p.add_argument("--primes", default=",".join(str(q) for q in DEFAULT_PRIMES))
    p.add_argument("--checks", default=None, help="comma list; default all checks")
    p.set_defaults(handler=_handle_suite)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        records = args.handler(args)
    except (DiagvarError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.format == "json":
        payload = _render_json(records)
    else:
        payload = _render_text(records, args.command)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return 0 if all(r["pass"] for r in records) else 1


if __name__ == "__main__":
    sys.exit(main())
