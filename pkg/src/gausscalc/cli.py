"""Command-line interface.

Exit status: 0 on success, 1 when a verification fails (or a search finds
nothing), 2 on usage or parse errors.  Every subcommand accepts ``--json``;
the report shapes are described by ``data/cli_output.schema.json``.
File arguments that do not exist are also looked up under the package's
``data`` directory, so ``fixtures/L.gd`` and ``catalog/v22.f`` always work.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .algebra import BraidError, action, compile_braid, parse_word, render_magnus, xi_parameters
from .catalog import CatalogError, evaluate_catalog, load_catalog
from .codec import (
    ParseError,
    parse_certificate,
    parse_diagram,
    parse_formula_document,
    serialize_certificate,
    serialize_diagram,
    serialize_step,
)
from .fixtures import data_dir, verify_all
from .formulae import pair
from .gauss import DiagramError
from .moves import IllegalMove, MoveSet, SearchExhausted, SearchStats, neighbors, search_equivalent, unknot_welded_long
from .mortier import certify


class UsageError(Exception):
    pass


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    alt = data_dir() / path
    if alt.exists():
        return alt
    raise UsageError(f"no such file: {path}")


def _read(path: str) -> str:
    return _resolve(path).read_text()


def _diagram(path: str):
    return parse_diagram(_read(path))


def _one_line(d) -> str:
    """Compact rendering used in listings: ``+- | 1T 2H | 1H 2T``."""
    text = serialize_diagram(d).splitlines()
    signs = "".join(line.split()[2] for line in text if line.startswith("arrow "))
    words = [line.split(":", 1)[1].strip() or "-" for line in text if line.startswith("strand ")]
    return " | ".join([signs or "."] + words)


def _moveset(args) -> MoveSet:
    return MoveSet.of(args.set, sv=args.sv, sc=args.sc)


# ---------------------------------------------------------------------------
# subcommands: each returns (exit status, json report, text lines)


def cmd_eval(args):
    g = _diagram(args.diagram)
    if args.formula is None:
        values = evaluate_catalog(g)
    elif args.formula in load_catalog():
        values = evaluate_catalog(g, [args.formula])
    else:
        doc = parse_formula_document(_read(args.formula))
        values = {doc.name or Path(args.formula).stem: pair(doc.formula, g)}
    lines = [f"{k} = {v}" for k, v in values.items()] or [f"no catalog formula on {g.n} strands"]
    return 0, {"command": "eval", "file": args.diagram, "values": values}, lines


def cmd_certify(args):
    doc = parse_formula_document(_read(args.formula))
    cond = certify(doc.formula).as_dict()
    header = " ".join(f"{k:>3}" for k in cond)
    row = " ".join(f"{('yes' if v else 'no'):>3}" for v in cond.values())
    lines = [f"# {doc.name or args.formula}", header, row]
    return 0, {"command": "certify", "name": doc.name, "conditions": cond}, lines


def cmd_moves(args):
    d = _diagram(args.diagram)
    ms = _moveset(args)
    out = neighbors(d, ms, args.max_arrows)
    rows = [{"step": serialize_step(m), "diagram": _one_line(r)} for m, r in out]
    lines = [f"{r['step']}  ->  {r['diagram']}" for r in rows] or ["no legal move"]
    return 0, {"command": "moves", "moveset": ms.describe(), "neighbors": rows}, lines


def cmd_search(args):
    d1, d2 = _diagram(args.d1), _diagram(args.d2)
    ms = _moveset(args)
    stats = SearchStats()
    try:
        c = search_equivalent(d1, d2, ms, args.depth, args.max_arrows, args.max_states, stats)
    except SearchExhausted as exc:
        report = {"command": "search", "status": "exhausted", "certificate": None, "visited": stats.visited}
        return 1, report, [f"search exhausted: {exc}"]
    if c is None:
        report = {"command": "search", "status": "not_found", "certificate": None, "visited": stats.visited}
        return 1, report, ["not found within bounds"]
    text = serialize_certificate(c)
    report = {"command": "search", "status": "found", "certificate": text, "visited": stats.visited}
    return 0, report, text.rstrip("\n").splitlines()


def cmd_unknot(args):
    d = _diagram(args.diagram)
    if d.n != 1:
        raise UsageError(f"unknot needs a 1-strand diagram, got {d.n} strands")
    c = unknot_welded_long(d, allow_sc=not args.sv_only)
    text = serialize_certificate(c)
    return 0, {"command": "unknot", "steps": len(c), "certificate": text}, text.rstrip("\n").splitlines()


def cmd_braid(args):
    w = parse_word(_read(args.word))
    if args.action == "compile":
        text = serialize_diagram(compile_braid(w))
        return 0, {"command": "braid compile", "diagram": text}, text.rstrip("\n").splitlines()
    a = action(w)
    images = [render_magnus(img) for img in a.images()]
    xi = list(xi_parameters(a)) if w.n == 2 else None
    lines = [f"x{i} -> {s}" for i, s in enumerate(images, 1)]
    if xi is not None:
        lines.append(f"xi = ({xi[0]}, {xi[1]})")
    return 0, {"command": "braid sv-invariant", "images": images, "xi": xi}, lines


def cmd_replay(args):
    c = parse_certificate(_read(args.certificate))
    try:
        ok = c.verify()
        err = None if ok else "replay does not end at the stated target"
    except IllegalMove as exc:
        ok, err = False, str(exc)
    report = {"command": "replay", "valid": ok, "steps": len(c), "error": err}
    return (0 if ok else 1), report, [f"certificate valid ({len(c)} steps)" if ok else f"certificate invalid: {err}"]


def cmd_fixtures(args):
    results = verify_all()
    rows, lines = [], []
    for r in results:
        rows.append(
            {
                "index": r.row.index,
                "check": r.row.check,
                "args": list(r.row.args),
                "passed": r.passed,
                "detail": r.detail,
                "provenance": r.row.provenance,
            }
        )
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.row.index:3d} {r.row.label()}: {r.detail}")
        if not r.passed:
            lines.append(f"         provenance: {r.row.provenance}")
    ok = all(r.passed for r in results)
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} rows pass")
    return (0 if ok else 1), {"command": "fixtures verify", "passed": ok, "rows": rows}, lines


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a machine-readable report")

    p = argparse.ArgumentParser(prog="gausscalc", description="Gauss diagram calculus for string links.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate invariants on a diagram")
    s.add_argument("diagram")
    s.add_argument("--formula", help="catalog name or formula file (default: every catalog entry of matching arity)")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("certify", parents=[common], help="check the invariance conditions of a formula")
    s.add_argument("formula")
    s.set_defaults(func=cmd_certify)

    moveset = argparse.ArgumentParser(add_help=False)
    moveset.add_argument("--set", choices=("virtual", "welded"), required=True)
    moveset.add_argument("--sv", action="store_true", help="allow self-virtualization")
    moveset.add_argument("--sc", action="store_true", help="allow self-crossing change")
    moveset.add_argument("--max-arrows", type=int, required=True)

    s = sub.add_parser("moves", parents=[common, moveset], help="list the diagrams one move away")
    s.add_argument("diagram")
    s.set_defaults(func=cmd_moves)

    s = sub.add_parser("search", parents=[common, moveset], help="bounded search for a certificate")
    s.add_argument("d1")
    s.add_argument("d2")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--max-states", type=int, default=500_000)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("unknot", parents=[common], help="unknot a welded long knot")
    s.add_argument("diagram")
    s.add_argument("--sv-only", action="store_true", help="delete every arrow by self-virtualization")
    s.set_defaults(func=cmd_unknot)

    s = sub.add_parser("braid", parents=[common], help="compile a braid word or compute its action")
    s.add_argument("action", choices=("compile", "sv-invariant"))
    s.add_argument("word")
    s.set_defaults(func=cmd_braid)

    s = sub.add_parser("replay", parents=[common], help="validate a certificate")
    s.add_argument("certificate")
    s.set_defaults(func=cmd_replay)

    s = sub.add_parser("fixtures", parents=[common], help="reproduce the example table")
    s.add_argument("action", choices=("verify",))
    s.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, report, lines = args.func(args)
    except (UsageError, ParseError, DiagramError, BraidError, CatalogError, OSError, ValueError) as exc:
        if args.json:
            print(json.dumps({"command": args.command, "error": str(exc)}, sort_keys=True))
        else:
            print(f"gausscalc: error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        print("\n".join(lines))
    return status


if __name__ == "__main__":
    sys.exit(main())
