"""Command-line front end.

Exit status: 0 success, 1 a check failed (or verdict No), 2 bad input,
3 verdict Unknown.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import ckalg, classify, diagrams, reference_cases
from .ckalg import CKMatrix, InvalidMatrix, validate
from .fgab import FgAbGroup, MarkedGroup, Verdict, canonical_marked_display
from .intmat import IntMatrix

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3


class InputError(ValueError):
    pass


# -- input -------------------------------------------------------------------


def parse_matrix_text(text: str) -> tuple:
    """Parse either input format; returns ``(name, rows)``.

    Plain text: optional ``# name`` line, then one row per line with entries
    separated by single spaces. Structured: ``{"name": ..., "matrix": [[...]]}``.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError("invalid JSON: %s" % exc) from exc
        if not isinstance(doc, dict) or "matrix" not in doc:
            raise InputError("structured input needs a 'matrix' field")
        name = doc.get("name")
        if name is not None and not isinstance(name, str):
            raise InputError("'name' must be a string")
        rows = doc["matrix"]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise InputError("'matrix' must be an array of arrays")
        for r in rows:
            for x in r:
                if isinstance(x, bool) or x not in (0, 1):
                    raise InputError("matrix entries must be 0 or 1")
    else:
        name = None
        rows = []
        lines = [ln.rstrip("\r") for ln in text.splitlines()]
        lines = [ln for ln in lines if ln.strip()]
        if lines and lines[0].startswith("#"):
            name = lines[0][1:].strip() or None
            lines = lines[1:]
        for ln in lines:
            parts = ln.strip().split(" ")
            if any(p not in ("0", "1") for p in parts):
                raise InputError("bad row %r: entries must be 0 or 1 separated by single spaces" % ln)
            rows.append([int(p) for p in parts])
    if not rows:
        raise InputError("empty matrix")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InputError("matrix is not square")
    return name, rows


def read_matrix(path: str) -> tuple:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc)) from exc
    name, rows = parse_matrix_text(text)
    return name, validate(rows)


def digest(M: CKMatrix) -> str:
    text = "\n".join(" ".join(str(x) for x in row) for row in M.tolist())
    return hashlib.sha256(text.encode()).hexdigest()


def input_record(name, M: CKMatrix) -> dict:
    return {"name": name, "matrix": M.tolist(), "sha256": digest(M)}


# -- serialization -----------------------------------------------------------


def group_doc(G: FgAbGroup) -> dict:
    return {"free_rank": G.free_rank, "torsion": list(G.torsion), "marks": []}


def marked_doc(m: MarkedGroup) -> dict:
    d = canonical_marked_display(m)
    d["ambient_marks"] = [list(x.rep) for x in m.marks]
    return d


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def format_group(d: dict) -> str:
    parts = ["Z"] * d["free_rank"] + ["Z/%d" % t for t in d["torsion"]]
    group = " + ".join(parts) if parts else "0"
    if not d["marks"]:
        return group
    marks = []
    for m in d["marks"]:
        if not m:
            marks.append("0")
        elif len(m) == 1:
            marks.append(str(m[0]))
        else:
            marks.append("(%s)" % ", ".join(str(x) for x in m))
    return "(%s; %s)" % (group, ", ".join(marks))


# -- commands ----------------------------------------------------------------


def invariants_doc(M: CKMatrix) -> dict:
    inv = ckalg.invariants(M)
    return {
        "ext_w": marked_doc(inv.ext_w),
        "ext_s": marked_doc(inv.ext_s),
        "k0_toeplitz": marked_doc(inv.k0_toeplitz),
        "k1_toeplitz": group_doc(inv.k1_toeplitz),
        "k0_ck": marked_doc(inv.k0_ck),
        "k1_ck": group_doc(inv.k1_ck),
    }


def cmd_invariants(args) -> int:
    name, M = read_matrix(args.path)
    used = M.T if args.transpose else M
    groups = invariants_doc(used)
    if args.json:
        doc = {
            "command": {"name": "invariants", "transpose": args.transpose},
            "inputs": [input_record(name, M)],
            "results": groups,
            "summary": {"passed": True},
        }
        print(dumps(doc))
        return EXIT_OK
    label = name or args.path
    side = "M" if args.transpose else "M^t"
    print("%s: groups of T_{%s} and O_{%s}" % (label, side, side))
    for key in ("ext_w", "ext_s", "k0_toeplitz", "k1_toeplitz", "k0_ck", "k1_ck"):
        print("  %-12s %s" % (key, format_group(groups[key])))
    return EXIT_OK


def cmd_verify(args) -> int:
    name, M = read_matrix(args.path)
    report = diagrams.strong_duality_report(M)
    if args.json:
        doc = {
            "command": {"name": "verify"},
            "inputs": [input_record(name, M)],
            "results": report.to_dict(),
            "summary": {"passed": report.passed},
        }
        print(dumps(doc))
    else:
        counts = {}
        for c in report.checks:
            ok, total = counts.get(c.kind, (0, 0))
            counts[c.kind] = (ok + c.ok, total + 1)
        for kind in sorted(counts):
            ok, total = counts[kind]
            print("%-14s %d/%d" % (kind, ok, total))
        for c in report.failures():
            print("FAIL %s %s %s" % (c.kind, c.label, json.dumps(c.witness, sort_keys=True)))
        print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_FAIL


_VERDICT_EXIT = {Verdict.YES: EXIT_OK, Verdict.NO: EXIT_FAIL, Verdict.UNKNOWN: EXIT_UNKNOWN}


def cmd_iso(args) -> int:
    name_a, A = read_matrix(args.path_a)
    name_b, B = read_matrix(args.path_b)
    question = classify.Question(args.question)
    result = classify.decide(question, A, B)
    d = result.decision
    if args.json:
        doc = {
            "command": {"name": "iso", "question": question.value},
            "inputs": [input_record(name_a, A), input_record(name_b, B)],
            "results": {
                "verdict": d.verdict.value,
                "reason": d.reason,
                "criterion": result.criterion,
                "witness": d.witness.matrix.tolist() if d.witness is not None else None,
            },
            "summary": {"passed": d.verdict is Verdict.YES},
        }
        print(dumps(doc))
    else:
        print("%s: %s (%s)" % (question.value, d.verdict.value.upper(), d.reason))
    return _VERDICT_EXIT[d.verdict]


def cmd_examples(args, table=None) -> int:
    results = reference_cases.run_table(table)
    passed = all(r.ok for r in results)
    if args.json:
        doc = {
            "command": {"name": "examples"},
            "inputs": [],
            "results": [r.to_dict() for r in results],
            "summary": {"passed": passed, "failed": sum(not r.ok for r in results), "total": len(results)},
        }
        print(dumps(doc))
    else:
        for r in results:
            print("%s  %s  [computed: %s]" % ("ok  " if r.ok else "FAIL", r.label, r.observed))
        print("%d/%d match" % (sum(r.ok for r in results), len(results)))
    return EXIT_OK if passed else EXIT_FAIL


def all_valid(n: int) -> list:
    """Every valid n x n matrix, in lexicographic order of entries."""
    out = []
    for bits in itertools.product((0, 1), repeat=n * n):
        rows = [list(bits[i * n:(i + 1) * n]) for i in range(n)]
        try:
            out.append(validate(rows))
        except InvalidMatrix:
            pass
    return out


def sample_valid(n: int, count: int, seed: int) -> list:
    rng = random.Random(seed)
    out = []
    seen = set()
    attempts = 0
    while len(out) < count and attempts < 1000 * count:
        attempts += 1
        rows = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
        try:
            M = validate(rows)
        except InvalidMatrix:
            continue
        if M in seen:
            continue
        seen.add(M)
        out.append(M)
    return out


def _check_one(rows) -> dict:
    M = CKMatrix(IntMatrix(rows))
    report = diagrams.strong_duality_report(M)
    return {"matrix": rows, "passed": report.passed, "failed_checks": [c.label for c in report.failures()]}


def cmd_enumerate(args) -> int:
    n = args.size
    if n < 2:
        print("error: --size must be at least 2", file=sys.stderr)
        return EXIT_INPUT
    corpus = all_valid(n) if n <= 3 else sample_valid(n, args.limit, args.seed)
    rows = [M.tolist() for M in corpus]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_check_one, rows, chunksize=8))
    else:
        results = [_check_one(r) for r in rows]
    if n <= 3:
        pairs = list(itertools.combinations(range(len(corpus)), 2))
    else:
        rng = random.Random(args.seed + 1)
        all_pairs = list(itertools.combinations(range(len(corpus)), 2))
        pairs = sorted(rng.sample(all_pairs, min(args.limit, len(all_pairs))))
    inconsistent = [
        [corpus[i].tolist(), corpus[j].tolist()]
        for i, j in pairs
        if not classify.corollary_consistency(corpus[i], corpus[j])
    ]
    passed = all(r["passed"] for r in results) and not inconsistent
    summary = {
        "size": n,
        "matrices": len(corpus),
        "verified": sum(r["passed"] for r in results),
        "pairs_checked": len(pairs),
        "pairs_inconsistent": len(inconsistent),
        "passed": passed,
    }
    if args.json:
        doc = {
            "command": {"name": "enumerate", "size": n, "limit": args.limit, "seed": args.seed},
            "inputs": [],
            "results": {"matrices": results, "inconsistent_pairs": inconsistent},
            "summary": summary,
        }
        print(dumps(doc))
    else:
        for k in ("size", "matrices", "verified", "pairs_checked", "pairs_inconsistent"):
            print("%-20s %s" % (k, summary[k]))
        for r in results:
            if not r["passed"]:
                print("FAIL %s" % r["matrix"])
        print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_FAIL


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ckduality",
        description="K-theory invariants, duality checks and isomorphism tests for Cuntz-Krieger and Toeplitz algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="print the six invariant groups of a matrix")
    p.add_argument("path", help="matrix file, or - for stdin")
    p.add_argument("--transpose", action="store_true", help="report on T_M instead of T_{M^t}")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("verify", help="check every exact sequence, ladder square and marked identity")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("iso", help="decide isomorphism of the algebras of two matrices")
    p.add_argument("path_a")
    p.add_argument("path_b")
    q = p.add_mutually_exclusive_group()
    q.add_argument("--toeplitz", dest="question", action="store_const", const="toeplitz")
    q.add_argument("--ck", dest="question", action="store_const", const="ck")
    q.add_argument("--extw", dest="question", action="store_const", const="extw")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_iso, question="toeplitz")

    p = sub.add_parser("examples", aliases=["paper-examples"], help="recompute the published worked examples")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("enumerate", help="verify every (n <= 3) or a seeded sample of n x n matrices")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--limit", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, InvalidMatrix) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
