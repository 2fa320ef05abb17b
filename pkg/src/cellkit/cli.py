"""Command-line interface.

Payload goes to stdout, logs and timings to stderr. Exit codes: 0 success,
1 user error, 2 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from cellkit import cells as cl
from cellkit import kostant as ko
from cellkit import oshadow as osh
from cellkit.coxeter import MAX_RANK, CoxeterContext, parse_word
from cellkit.errors import CellkitError, InconsistencyError, UserError
from cellkit.hecke import KLTable, cached_kl_table

log = logging.getLogger("cellkit")

CACHE_ENV = "CELLKIT_CACHE_DIR"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UserError(message)


def _rank(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 2 <= n <= MAX_RANK:
        raise argparse.ArgumentTypeError(f"rank out of supported range: {n} (supported 2..{MAX_RANK})")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cellkit", description="Kazhdan-Lusztig combinatorics of symmetric groups.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, rank=True):
        if rank:
            sp.add_argument("--rank", type=_rank, required=True, help="n, for the group S_n")
        sp.add_argument("--cache", metavar="DIR", help=f"KL table cache directory (default ${CACHE_ENV})")
        sp.add_argument("--no-cache", action="store_true", help="ignore any cache directory")
        sp.add_argument("--format", choices=("tsv", "json"), default="tsv")

    sp = sub.add_parser("kl", help="KL polynomials h_{x,y}")
    common(sp)
    sp.add_argument("--x", metavar="WORD", help="restrict to this x")
    sp.add_argument("--y", metavar="WORD", help="restrict to this y")

    sp = sub.add_parser("cells", help="left/right cells, a-values and Duflo flags per element")
    common(sp)
    sp.add_argument("--side", choices=("left", "right", "both"), default="both",
                    help="which cell order to include in json output")
    _afn_flags(sp)

    sp = sub.add_parser("afn", help="Lusztig's a-function")
    common(sp)
    _afn_flags(sp)

    sp = sub.add_parser("duflo", help="Duflo involutions, one per right cell")
    common(sp)
    _afn_flags(sp)

    sp = sub.add_parser("theta", help="graded character of theta_x L(x^-1)")
    common(sp)
    sp.add_argument("--x", metavar="WORD", required=True)

    sp = sub.add_parser("quasisimple", help="Duflo element of the quasi-simple quotient for L(x)")
    common(sp)
    sp.add_argument("--x", metavar="WORD", required=True)
    _afn_flags(sp)

    sp = sub.add_parser("propagate", help="propagate Kostant's-problem answers over ranks 2..N")
    common(sp, rank=False)
    sp.add_argument("--max-rank", type=_rank, required=True)
    sp.add_argument("--rank", type=_rank, action="append", help="report only these ranks")
    sp.add_argument("--seeds", metavar="FILE", action="append", default=[], help="JSON seed file")
    sp.add_argument("--no-literature-seeds", action="store_true",
                    help="use builtin seeds and --seeds files only")
    sp.add_argument("--allow-product-rule", action="store_true",
                    help="also use disconnected parabolic subsets (results are flagged)")

    sp = sub.add_parser("report", help="render a database written by 'propagate --format json'")
    sp.add_argument("--db", metavar="FILE", required=True)
    sp.add_argument("--rank", type=_rank, action="append")
    sp.add_argument("--format", choices=("tsv", "json"), default="tsv")
    return p


def _afn_flags(sp):
    sp.add_argument("--mode", choices=("exact", "fast"),
                    help="a-function mode (default: exact below rank 5, fast otherwise)")
    sp.add_argument("--i-know-this-is-slow", dest="slow", action="store_true",
                    help="permit the exact a-function at rank >= 6")


def validate(args) -> None:
    """Reject bad words and flag combinations before any computation."""
    rank = getattr(args, "rank", None)
    if isinstance(rank, int):
        ctx = CoxeterContext.of(rank)
        for flag in ("x", "y"):
            text = getattr(args, flag, None)
            if text is not None:
                parse_word(ctx, text)
    if getattr(args, "mode", None) == "exact" and rank >= 6 and not args.slow:
        raise UserError("exact a-function at rank >= 6 requires --i-know-this-is-slow")
    if args.command == "propagate" and args.rank and max(args.rank) > args.max_rank:
        raise UserError("--rank exceeds --max-rank")


def _cache_dir(args) -> Optional[str]:
    if getattr(args, "no_cache", False):
        return None
    return args.cache or os.environ.get(CACHE_ENV) or None


def _table(args) -> KLTable:
    table, info = cached_kl_table(args.rank, _cache_dir(args))
    log.info("kl table rank=%d %s in %.3fs", args.rank, info["source"], info["seconds"])
    return table


def _afn(args, table: KLTable) -> cl.AFunctionTable:
    mode = args.mode or ("exact" if args.rank < 5 else "fast")
    if mode == "exact" and args.rank >= 6 and not args.slow:
        raise UserError("exact a-function at rank >= 6 requires --i-know-this-is-slow")
    t0 = time.perf_counter()
    afn = cl.a_function(table, mode, allow_slow=args.slow)
    log.info("a-function rank=%d mode=%s in %.3fs", args.rank, mode, time.perf_counter() - t0)
    return afn


def _emit(out, args, rows: list[Sequence], header: Sequence[str], extra: Sequence[str] = ()):
    if args.format == "json":
        json.dump([dict(zip(header, r)) for r in rows], out, indent=1, sort_keys=False)
        out.write("\n")
        return
    for r in rows:
        out.write("\t".join(str(c) for c in r) + "\n")
    for line in extra:
        out.write(line + "\n")


def cmd_kl(args, out):
    table = _table(args)
    ctx = table.ctx
    fx = parse_word(ctx, args.x) if args.x is not None else None
    fy = parse_word(ctx, args.y) if args.y is not None else None
    rows = [
        (x.word_str, y.word_str, p.serialize())
        for x, y, p in table.entries()
        if (fx is None or x == fx) and (fy is None or y == fy)
    ]
    _emit(out, args, rows, ("x", "y", "h"))


def cmd_cells(args, out):
    table = _table(args)
    ctx = table.ctx
    right = cl.right_preorder(table)
    left = cl.left_cells(table, right)
    afn = _afn(args, table)
    duflo = set(cl.duflo_set(table, afn, right))
    rows = [
        (x.word_str, left.cell_id[x], right.cell_id[x], afn[x], int(x in duflo))
        for x in ctx.elements
    ]
    if args.format == "json":
        doc = {"rows": [dict(zip(("word", "left_cell", "right_cell", "a", "is_duflo"), r)) for r in rows]}
        for part in (left, right):
            if args.side in (part.side, "both"):
                doc[f"{part.side}_order"] = sorted(part.order)
        json.dump(doc, out, indent=1)
        out.write("\n")
    else:
        _emit(out, args, rows, ())


def cmd_afn(args, out):
    table = _table(args)
    afn = _afn(args, table)
    _emit(out, args, [(x.word_str, afn[x]) for x in table.ctx.elements], ("word", "a"))


def cmd_duflo(args, out):
    table = _table(args)
    afn = _afn(args, table)
    right = cl.right_preorder(table)
    rows = [(d.word_str, right.cell_id[d], afn[d]) for d in cl.duflo_set(table, afn, right)]
    _emit(out, args, rows, ("word", "right_cell", "a"))


def cmd_theta(args, out):
    table = _table(args)
    x = parse_word(table.ctx, args.x)
    ch = osh.theta_simple_character(table, x)
    _emit(out, args, [(z.word_str, p.serialize()) for z, p in ch.items()], ("z", "mult"))


def cmd_quasisimple(args, out):
    table = _table(args)
    x = parse_word(table.ctx, args.x)
    right = cl.right_preorder(table)
    afn = _afn(args, table)
    ch = osh.theta_simple_character(table, x)
    rows = [(z.word_str, p.serialize()) for z, p in ch.items()]
    try:
        d, report = osh.quasi_simple(table, x, right, afn, ch)
    except InconsistencyError as exc:
        report = getattr(exc, "report", None)
        if report is not None:
            _emit(out, args, rows, ("z", "mult"), [f"DUFLO={report.duflo.word_str}"] + report.lines())
        raise
    if args.format == "json":
        doc = {
            "character": [{"z": z, "mult": m} for z, m in rows],
            "duflo": d.word_str,
            "checks": [{"name": n, "passed": ok, "detail": det} for n, ok, det in report.checks],
        }
        json.dump(doc, out, indent=1)
        out.write("\n")
    else:
        _emit(out, args, rows, (), [f"DUFLO={d.word_str}"] + report.lines())


def cmd_propagate(args, out):
    t0 = time.perf_counter()
    db = ko.KostantDB.build(args.max_rank, "kl", _cache_dir(args))
    log.info("cell data for ranks 2..%d in %.3fs", args.max_rank, time.perf_counter() - t0)
    seeds = [s for n in range(2, args.max_rank + 1) for s in ko.builtin_seeds(n)]
    if not args.no_literature_seeds:
        seeds += ko.literature_seeds()
    for path in args.seeds:
        seeds += ko.load_seeds(path)
    result = ko.propagate(db, seeds, allow_product_rule=args.allow_product_rule)
    ranks = sorted(set(args.rank)) if args.rank else None
    _write_db(out, args, result, ranks)


def _write_db(out, args, db, ranks):
    if args.format == "json":
        json.dump(ko.report_json(db, ranks), out, indent=1)
        out.write("\n")
    else:
        out.write(ko.report_tsv(db, ranks))


def cmd_report(args, out):
    try:
        data = json.loads(Path(args.db).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UserError(f"cannot read {args.db}: {exc}") from None
    db = ko.db_from_json(data)
    ranks = sorted(set(args.rank)) if args.rank else None
    if ranks and any(r not in db.ranks for r in ranks):
        raise UserError("requested rank not present in the database")
    _write_db(out, args, db, ranks)


COMMANDS = {
    "kl": cmd_kl,
    "cells": cmd_cells,
    "afn": cmd_afn,
    "duflo": cmd_duflo,
    "theta": cmd_theta,
    "quasisimple": cmd_quasisimple,
    "propagate": cmd_propagate,
    "report": cmd_report,
}


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UserError as exc:
        err.write(f"cellkit: error: {exc}\n")
        return 1
    handler = logging.StreamHandler(err)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.DEBUG if args.verbose else logging.INFO)
    try:
        validate(args)
        COMMANDS[args.command](args, out)
    except UserError as exc:
        err.write(f"cellkit: error: {exc}\n")
        return 1
    except InconsistencyError as exc:
        err.write(f"cellkit: internal inconsistency: {exc}\n")
        return 2
    except CellkitError as exc:
        err.write(f"cellkit: error: {exc}\n")
        return 1
    except OSError as exc:
        err.write(f"cellkit: error: {exc}\n")
        return 1
    finally:
        log.removeHandler(handler)
    return 0


if __name__ == "__main__":
    sys.exit(main())
