"""Command-line entry point.

Exit codes: 0 success, 1 validation failure or property counterexample,
2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from itertools import combinations

from . import io
from .chains import chain_report, verify_chain_theorems
from .errors import (DocumentSyntaxError, EmptyX, InvariantViolation, MissingFlags,
                     NotConstructive, PartitionInvalid, SpecPosetError)
from .oracle import run_exhaustive, run_trials
from .partition import over_set, under_set, validate_minfeasible
from .precompletion import Mode, s_sets, spec_A
from .ring_conditions import check_remark_conditions

OK, FAILED, USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _need_partition(doc):
    if doc.partition is None:
        raise InvariantViolation("partition", "this command needs a partition")
    return doc.partition


def _fmt(nodes) -> str:
    return "{" + ", ".join(sorted(nodes)) + "}"


def cmd_validate(args, doc) -> int:
    d = doc.diagram
    print(f"diagram: {len(d)} nodes, {len(d.covers)} covers, max {d.max_id}: ok")
    if doc.partition is None:
        print("no partition given")
        return OK
    rep = validate_minfeasible(d, doc.partition)
    for w in rep.warnings:
        print(f"warning: {w}")
    if not rep.ok:
        print("partition: INVALID")
        for v in rep.violations:
            print(f"  {v}")
        return FAILED
    p = doc.partition
    print(f"partition: minfeasible, m = {p.m}")
    for i in range(1, p.m + 1):
        print(f"  C_{i} = {_fmt(p.sub(i))}")
        print(f"    under: {_fmt(under_set(d, p, i))}")
        print(f"    over:  {_fmt(over_set(d, p, i))}")
    return OK


def _spec(args, doc):
    p = _need_partition(doc)
    return p, spec_A(doc.diagram, p, args.mode, doc.characteristic, force=args.force)


def cmd_spectrum(args, doc) -> int:
    p, spec = _spec(args, doc)
    out = io.spec_a_document(spec)
    sys.stdout.write(io.serialize(out))
    for X in (X for r in range(2, p.m + 1) for X in combinations(range(1, p.m + 1), r)):
        r = s_sets(doc.diagram, p, X, spec)
        _, a = r.s1_sizes(doc.diagram, spec)
        print(f"|S1_A({','.join(map(str, X))})| = {a}")
    return OK


def _parse_X(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--X expects comma-separated integers, got {text!r}")


def cmd_ssets(args, doc) -> int:
    p = _need_partition(doc)
    spec = spec_A(doc.diagram, p, args.mode, doc.characteristic, force=True)
    r = s_sets(doc.diagram, p, args.X, spec)
    label = ",".join(map(str, r.X))
    print(f"S_T({label}) = {_fmt(r.s_T)}")
    print(f"S_A({label}) = {_fmt(r.s_A)}")
    print(f"image of S_T({label}) = {_fmt(r.image_T)}")
    if len(r.X) >= 2:
        t, a = r.s1_sizes(doc.diagram, spec)
        print(f"S1bar_T({label}) = {_fmt(r.s1bar_T)}")
        print(f"S1_T({label}) = {_fmt(r.s1_T)}  size {t}")
        print(f"S1_A({label}) = {_fmt(r.s1_A)}  size {a}")
    return OK


def cmd_chains(args, doc) -> int:
    print(chain_report(doc.diagram).summary())
    if doc.partition is None:
        return OK
    spec = spec_A(doc.diagram, doc.partition, args.mode, doc.characteristic, force=True)
    tr = verify_chain_theorems(doc.diagram, doc.partition, spec)
    print(tr.summary())
    return OK if tr.passed else FAILED


def cmd_conditions(args, doc) -> int:
    if doc.characteristic is None:
        print("document has no characteristic", file=sys.stderr)
        return USAGE
    rep = check_remark_conditions(doc.diagram, _need_partition(doc), doc.characteristic)
    print(rep.summary())
    return OK


def cmd_render(args, doc) -> int:
    if args.of == "spec-a":
        _, spec = _spec(args, doc)
        sys.stdout.write(io.render_dot(spec, "spec_A"))
    else:
        sys.stdout.write(io.render_dot(doc.diagram, "spec_T"))
    return OK


def cmd_oracle(args) -> int:
    summary = run_trials(args.seed, args.trials, args.max_nodes, args.workers, args.persist)
    print(summary.summary())
    ok = summary.ok
    if args.exhaustive_upto:
        ex = run_exhaustive(args.exhaustive_upto, args.persist)
        print(f"exhaustive (up to {args.exhaustive_upto} nodes):")
        print(ex.summary())
        ok = ok and ex.ok
    return OK if ok else FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="specposet", description="Prime spectra of complete local rings as annotated posets.")
    ap.add_argument("--out", help="write the report to this file instead of standard output")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_file(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file")
        return sp

    with_file("validate", "check a document and its partition")
    sp = with_file("spectrum", "compute Spec(A)")
    sp.add_argument("--mode", choices=[m.value for m in Mode], default="exact")
    sp.add_argument("--force", action="store_true", help="build even if the construction is not known to apply")
    sp = with_file("ssets", "S-sets for a subset X of {1..m}")
    sp.add_argument("--X", type=_parse_X, required=True)
    sp.add_argument("--mode", choices=[m.value for m in Mode], default="exact")
    sp = with_file("chains", "maximal chains and coheights")
    sp.add_argument("--mode", choices=[m.value for m in Mode], default="exact")
    with_file("conditions", "which existence case applies")
    sp = with_file("render", "Graphviz output")
    sp.add_argument("--format", choices=["dot"], default="dot")
    sp.add_argument("--of", choices=["spec-t", "spec-a"], default="spec-t")
    sp.add_argument("--mode", choices=[m.value for m in Mode], default="exact")
    sp.add_argument("--force", action="store_true")
    sp = sub.add_parser("oracle", help="random and exhaustive property checks")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--max-nodes", type=int, default=10)
    sp.add_argument("--exhaustive-upto", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--persist", help="directory for counterexample documents")
    return ap


COMMANDS = {
    "validate": cmd_validate, "spectrum": cmd_spectrum, "ssets": cmd_ssets,
    "chains": cmd_chains, "conditions": cmd_conditions, "render": cmd_render,
}


def _dispatch(args) -> int:
    if args.command == "oracle":
        if args.trials < 0 or args.max_nodes < 2 or not 0 <= args.exhaustive_upto <= 7:
            print("oracle: need trials >= 0, max-nodes >= 2, exhaustive-upto <= 7", file=sys.stderr)
            return USAGE
        return cmd_oracle(args)
    try:
        doc = io.load(args.file)
    except OSError as exc:
        print(f"{args.file}: {exc.strerror or exc}", file=sys.stderr)
        return USAGE
    except (DocumentSyntaxError, InvariantViolation, SpecPosetError) as exc:
        print(f"{args.file}: {exc}")
        return FAILED
    try:
        return COMMANDS[args.command](args, doc)
    except PartitionInvalid as exc:
        print(f"partition invalid: {exc}")
        return FAILED
    except (NotConstructive, MissingFlags, InvariantViolation) as exc:
        print(str(exc))
        return FAILED
    except (EmptyX, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return USAGE


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    if not args.out:
        return _dispatch(args)
    try:
        fh = open(args.out, "w", encoding="utf-8")
    except OSError as exc:
        print(f"{args.out}: {exc.strerror or exc}", file=sys.stderr)
        return USAGE
    with fh, contextlib.redirect_stdout(fh):
        return _dispatch(args)


if __name__ == "__main__":
    sys.exit(main())
