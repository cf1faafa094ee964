"""Command-line front end: one JSON document in, one JSON document out.

Exit codes: 0 on success, 1 for a malformed document, 2 when a document is
well formed but violates an invariant (including oracle validation).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional, Sequence

from . import documents as doc
from .closure import OracleError, closure_of_basis, enumerate_stabilizers, is_endo_fixed, qp_pairs
from .core import member, subgroup_basis
from .fix import fix_type_I_family, fix_type_II
from .intlin import smith_normal_form

COMMANDS = ("basis", "member", "fix-ii", "fix-family", "qp-pairs", "closure",
            "is-endo-fixed", "snf", "enumerate-stabilizers")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fatf", description="Subgroups, fixed subgroups and endo-closures "
                                "in free-abelian times free groups Z^m x F_n.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--ambient", nargs=2, type=int, metavar=("M", "N"),
                   help="rank m of the free-abelian factor and rank n of the free factor")
    p.add_argument("--input", default="-", metavar="FILE", help="request document (default: stdin)")
    p.add_argument("--oracle", metavar="FILE", help="free-group oracle document for non-abelian closures")
    p.add_argument("--bound-words", type=int, default=1, metavar="L")
    p.add_argument("--bound-matrices", type=int, default=1, metavar="B")
    p.add_argument("--explain", action="store_true", help="print a transcript of the case analysis to stderr")
    return p


def _load(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise doc.DocumentError(f"cannot read JSON from {path}: {exc}") from None


def _ambient(args) -> tuple[int, int]:
    if args.ambient is None:
        raise doc.ValidationError("ambient.required", "--ambient m n is required for this command")
    m, n = args.ambient
    if m < 0:
        raise doc.ValidationError("ambient.m>=0", f"m must be nonnegative, got {m}")
    if n < 2:
        raise doc.ValidationError("ambient.n>=2", f"the endomorphism classification needs n >= 2, got {n}")
    return m, n


def _explain_closure(res, log):
    if res.case is not None:
        c = res.case
        line = f"abelian case ({c.case_tag})"
        if c.case_tag in ("ii", "iii"):
            line += (f": alpha={c.alpha} alpha1={c.alpha1} alpha2={c.alpha2} "
                     f"r'={c.r_prime} c'={list(c.c_prime)}")
        log(line)
        log(f"witness type: {'II' if type(res.witnesses[0]).__name__ == 'TypeIIEndo' else 'I'}")
    else:
        k, q = res.oracle_size, res.q
        log(f"non-abelian: q={q} k={k} witnesses=(k+1)q={(k + 1) * q}")
        log(f"trust: {res.trust}")
    log(f"verdict: {res.verdict}")


def run(command: str, payload: Any, args, oracle_doc: Any = None, log=None) -> dict:
    log = log or (lambda s: None)
    if command == "snf":
        A = doc.parse_free_matrix(payload["matrix"] if isinstance(payload, dict) else payload)
        return doc.snf_doc(smith_normal_form(A))
    m, n = _ambient(args)
    if command == "basis":
        S = subgroup_basis(doc.parse_subgroup(payload, m, n), m, n)
        return doc.basis_doc(S)
    if command == "member":
        S = subgroup_basis(doc.parse_subgroup(doc._need(payload, "subgroup"), m, n), m, n)
        x = doc.parse_element(doc._need(payload, "element"), m, n)
        return {"member": member(S, x)}
    if command == "fix-ii":
        e = doc.parse_endo(payload, m, n)
        if e.__class__.__name__ != "TypeIIEndo":
            raise doc.ValidationError("type_ii", "fix-ii needs a type-II endomorphism")
        return doc.basis_doc(fix_type_II(e))
    if command == "fix-family":
        res = fix_type_I_family(doc.parse_family(payload, m, n))
        log(f"verdict: {res.verdict}")
        return doc.fix_result_doc(res)
    if command == "qp-pairs":
        S = subgroup_basis(doc.parse_subgroup(payload, m, n), m, n)
        pairs = qp_pairs(S)
        log(f"q={len(pairs)}")
        return {"q": len(pairs), "qp_pairs": doc.family_pairs_doc(pairs)}
    oracle = doc.parse_oracle(oracle_doc, n) if oracle_doc is not None else None
    gens = doc.parse_subgroup(payload, m, n)
    if command == "closure":
        S = subgroup_basis(gens, m, n)
        res = closure_of_basis(S, oracle)
        _explain_closure(res, log)
        return doc.closure_doc(res, m, n)
    if command == "is-endo-fixed":
        v = is_endo_fixed(gens, m, n, oracle)
        _explain_closure(v.closure, log)
        log(f"endo-fixed: {v.endo_fixed}")
        return doc.endo_fixed_doc(v, m, n)
    if command == "enumerate-stabilizers":
        S = subgroup_basis(gens, m, n)
        found = enumerate_stabilizers(S, args.bound_words, args.bound_matrices)
        log(f"{len(found)} stabilizing endomorphisms within bounds L={args.bound_words} B={args.bound_matrices}")
        return {"count": len(found), "endomorphisms": [doc.endo_doc(e) for e in found]}
    raise doc.DocumentError(f"unknown command {command!r}")


def dumps(result: Any) -> str:
    return json.dumps(result, sort_keys=True, indent=2) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    log = (lambda s: print(s, file=sys.stderr)) if args.explain else None
    try:
        payload = _load(args.input)
        oracle_doc = _load(args.oracle) if args.oracle else None
        result = run(args.command, payload, args, oracle_doc, log)
    except doc.DocumentError as exc:
        sys.stdout.write(dumps({"error": {"kind": "malformed", "message": str(exc)}}))
        return 1
    except OracleError as exc:
        sys.stdout.write(dumps({"error": {"kind": "validation", "invariant": "oracle",
                                          "oracle_index": exc.index, "message": str(exc)}}))
        return 2
    except doc.ValidationError as exc:
        sys.stdout.write(dumps({"error": {"kind": "validation", "invariant": exc.invariant,
                                          "message": str(exc)}}))
        return 2
    except (KeyError, TypeError) as exc:
        sys.stdout.write(dumps({"error": {"kind": "malformed", "message": f"bad document: {exc!r}"}}))
        return 1
    except ValueError as exc:
        sys.stdout.write(dumps({"error": {"kind": "validation", "invariant": "precondition",
                                          "message": str(exc)}}))
        return 2
    sys.stdout.write(dumps(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
