"""Batch command-line interface.

Exit codes: 0 success / property holds; 1 property or simulation
fails; 2 usage or input error; 3 state limit exceeded.  Results go to
stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path as FsPath

from . import corpus as corpus_mod
from .abstraction import run_script
from .core import DEFAULT_MAX_STATES, build_lts
from .errors import CcsError, ParseError, TruncatedLtsError
from .logic import check_table, classify
from .parsing import parse_ccs, parse_mu, parse_script, print_family
from .simulation import weakly_simulated_by

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


def _read(path: str) -> str:
    try:
        return FsPath(path).read_text()
    except OSError as exc:
        raise CcsError(f"cannot read {path}: {exc.strerror}") from exc


def _load_family(path: str, root: str | None):
    src = parse_ccs(_read(path))
    fam = src.family if root is None else src.family.with_root(root)
    return fam, src.sets


def _lts(fam, max_states: int):
    lts = build_lts(fam, max_states)
    if lts.truncated:
        raise TruncatedLtsError(
            f"state limit {max_states} exceeded; partial system discarded"
        )
    return lts


def cmd_parse(args) -> int:
    fam, _ = _load_family(args.file, None)
    sys.stdout.write(print_family(fam))
    return EXIT_OK


def cmd_states(args) -> int:
    fam, _ = _load_family(args.file, args.root)
    lts = _lts(fam, args.max_states)
    print(f"states: {lts.num_states}")
    print(f"transitions: {len(lts.transitions)}")
    return EXIT_OK


def cmd_check(args) -> int:
    fam, sets = _load_family(args.file, args.root)
    props = parse_mu(_read(args.props), sets)
    if args.prop not in props:
        raise CcsError(f"prop {args.prop} not defined in {args.props}")
    lts = _lts(fam, args.max_states)
    holds, table = check_table(lts, props[args.prop])
    print("true" if holds else "false")
    if args.table:
        for i, sat in enumerate(table):
            print(f"state {i}: {'true' if sat else 'false'}")
    return EXIT_OK if holds else EXIT_FAIL


def cmd_classify(args) -> int:
    props = parse_mu(_read(args.props))
    if args.prop not in props:
        raise CcsError(f"prop {args.prop} not defined in {args.props}")
    print(classify(props[args.prop]))
    return EXIT_OK


def cmd_sim(args) -> int:
    fam, _ = _load_family(args.file, None)
    left = _lts(fam.with_root(args.left), args.max_states)
    right = _lts(fam.with_root(args.right), args.max_states)
    holds, witness = weakly_simulated_by(left, right)
    print("true" if holds else "false")
    if holds and args.witness:
        for i, j in sorted(witness.relation):
            print(f"{i} {j}")
    return EXIT_OK if holds else EXIT_FAIL


def cmd_abstract(args) -> int:
    fam, _ = _load_family(args.file, args.root)
    script = parse_script(_read(args.script))
    final, log = run_script(fam, script, certify=args.certify, max_states=args.max_states)
    for rec in log:
        line = f"step {rec.index}: {rec.step.rule} -> {rec.state_count} states"
        if args.certify:
            line += f" [{rec.certified}]"
        print(line)
    print(f"final states: {build_lts(final, args.max_states).num_states}")
    if args.output:
        FsPath(args.output).write_text(print_family(final))
    return EXIT_OK


def cmd_corpus(args) -> int:
    if args.corpus_cmd == "list":
        for cid in corpus_mod.list_ids():
            print(cid)
        return EXIT_OK
    diffs = corpus_mod.run(args.id, max_states=args.max_states)
    failed = False
    for d in diffs:
        mark = "ok" if d.ok else "MISMATCH"
        print(f"{mark} {d.key}: expected {d.expected}, got {d.actual}")
        failed = failed or not d.ok
    return EXIT_FAIL if failed else EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--max-states",
        type=int,
        default=DEFAULT_MAX_STATES,
        help="state-space cap for every construction",
    )
    p = argparse.ArgumentParser(
        prog="ccsabst",
        description="CCS / mu-calculus verification workbench",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    def add_parser(name: str, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    sp = add_parser("parse", help="validate a .ccs file, echo canonical form")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_parse)

    sp = add_parser("states", help="print state/transition counts")
    sp.add_argument("file")
    sp.add_argument("--root")
    sp.set_defaults(fn=cmd_states)

    sp = add_parser("check", help="model-check a formula")
    sp.add_argument("file")
    sp.add_argument("--prop", required=True)
    sp.add_argument("--props", required=True, help=".mu formula file")
    sp.add_argument("--root")
    sp.add_argument("--table", action="store_true", help="per-state results")
    sp.set_defaults(fn=cmd_check)

    sp = add_parser("classify", help="print a formula's fragment")
    sp.add_argument("--prop", required=True)
    sp.add_argument("--props", required=True)
    sp.set_defaults(fn=cmd_classify)

    sp = add_parser("sim", help="weak-simulation check between two roots")
    sp.add_argument("file")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--witness", action="store_true")
    sp.set_defaults(fn=cmd_sim)

    sp = add_parser("abstract", help="run an abstraction script")
    sp.add_argument("file")
    sp.add_argument("--script", required=True)
    sp.add_argument("--root")
    sp.add_argument("--certify", action="store_true")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_abstract)

    sp = add_parser("corpus", help="built-in example systems")
    csub = sp.add_subparsers(dest="corpus_cmd", required=True)
    cl = csub.add_parser("list", help="list entry ids")
    cl.set_defaults(fn=cmd_corpus)
    cr = csub.add_parser(
        "run", parents=[common], help="replay an entry against its manifest"
    )
    cr.add_argument("id")
    cr.set_defaults(fn=cmd_corpus)

    sp = add_parser("serve", help="start the HTTP service")
    sp.add_argument("--port", type=int, default=8357)
    sp.add_argument("--host", default="127.0.0.1")
    sp.set_defaults(fn=cmd_serve)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except TruncatedLtsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ParseError, CcsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
