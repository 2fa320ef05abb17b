"""Propagation of known answers to Kostant's problem for simple modules L(x).

Answers are stored per left cell (keyed by the unique involution in the
cell) for each rank n in 2..N, and closed under three rules:

``ind``
    For an interval I of simple reflections of S_n and x in W_I (a copy of
    S_{|I|+1}), the answer for x at rank |I|+1 equals the answer for
    ``x * w0_I * w0`` at rank n. Applied in both directions.
``sym``
    The answer is invariant under the diagram automorphism s_i -> s_{n-i}.
``product`` (opt-in)
    For disconnected I, the answer at rank n is positive iff it is positive
    for every connected factor. Results using it are flagged.

Membership of an element in a left cell is the ``cell`` rule; it is applied
when seeds are ingested.
"""

from __future__ import annotations

import itertools
import json
import logging
import random
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

from cellkit.cells import CellPartition, left_cells
from cellkit.coxeter import (
    MAX_RANK,
    CoxeterContext,
    Element,
    diagram_automorphism,
    embed,
    involutions,
    parse_word,
    rsk,
    theorem1_map,
)
from cellkit.errors import ConflictError, RankError, SeedFormatError, UserError, WordError
from cellkit.hecke import cached_kl_table

log = logging.getLogger(__name__)

__all__ = [
    "Status",
    "Derivation",
    "Seed",
    "RankData",
    "KostantDB",
    "builtin_seeds",
    "literature_seeds",
    "load_seeds",
    "propagate",
    "report_rows",
    "report_tsv",
    "report_json",
]


class Status(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Derivation:
    """Why a left cell carries a status. Leaves are seeds."""

    rule: str
    rank: int
    word: str
    status: Status
    note: str = ""
    premises: tuple["Derivation", ...] = ()
    flagged: bool = False

    def seeds(self) -> list["Derivation"]:
        if self.rule == "seed":
            return [self]
        return [leaf for p in self.premises for leaf in p.seeds()]

    def uses_product_rule(self) -> bool:
        return self.flagged or any(p.uses_product_rule() for p in self.premises)

    def summary(self) -> str:
        head = f"{self.rule}[{self.note}]" if self.note else self.rule
        if self.premises:
            head += " <- " + "; ".join(f"S{p.rank}:{p.word or 'e'}" for p in self.premises)
        if self.uses_product_rule():
            head += " (product-rule)"
        return head

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        lines = [f"{pad}S{self.rank}:{self.word or 'e'} {self.status.value} by {self.rule}"
                 + (f" [{self.note}]" if self.note else "")]
        for p in self.premises:
            lines.append(p.render(indent + 1))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        out = {"rule": self.rule, "rank": self.rank, "word": self.word, "status": self.status.value}
        if self.note:
            out["note"] = self.note
        if self.flagged:
            out["flagged"] = True
        if self.premises:
            out["premises"] = [p.to_dict() for p in self.premises]
        return out


@dataclass(frozen=True)
class Seed:
    rank: int
    element: Element
    status: Status
    source: str


def _left_reps(ctx: CoxeterContext, left: CellPartition) -> dict[Element, Element]:
    rep_of_cell: dict[int, Element] = {}
    for d in involutions(ctx):
        cid = left.cell_id[d]
        if cid in rep_of_cell:
            raise UserError(f"left cell {cid} of S_{ctx.n} holds two involutions")
        rep_of_cell[cid] = d
    return {x: rep_of_cell[left.cell_id[x]] for x in ctx.elements}


@dataclass
class RankData:
    """Group data for one rank: each element's left-cell involution."""

    ctx: CoxeterContext
    rep: dict[Element, Element]

    @classmethod
    def build(cls, n: int, method: str = "kl", cache_dir=None) -> "RankData":
        ctx = CoxeterContext.of(n)
        if method == "kl":
            table, _ = cached_kl_table(n, cache_dir)
            return cls(ctx, _left_reps(ctx, left_cells(table)))
        if method == "rsk":
            # left cells of S_n are the fibres of the recording tableau
            by_q = {rsk(d)[1]: d for d in involutions(ctx)}
            return cls(ctx, {x: by_q[rsk(x)[1]] for x in ctx.elements})
        raise UserError(f"unknown cell method {method!r}")

    @property
    def keys(self) -> list[Element]:
        return involutions(self.ctx)


def builtin_seeds(rank: int) -> list[Seed]:
    """Positive answers that hold in every rank: L(e) and L(w0)."""
    ctx = CoxeterContext.of(rank)
    return [
        Seed(rank, ctx.e, Status.POSITIVE,
             "builtin: L(e) is a quotient of the dominant Verma module (Jantzen, Einhuellende 6.9)"),
        Seed(rank, ctx.w0, Status.POSITIVE,
             "builtin: L(w0) is a simple Verma module (Conze-Berline 6.9; Joseph 6.4)"),
    ]


def _parse_status(value) -> Status:
    if value not in ("positive", "negative"):
        raise SeedFormatError(f"status must be 'positive' or 'negative', got {value!r}")
    return Status(value)


def parse_seeds(data) -> list[Seed]:
    if not isinstance(data, list):
        raise SeedFormatError("seed file must hold a top-level list")
    out: list[Seed] = []
    seen: dict[tuple[int, Element], Seed] = {}
    for k, entry in enumerate(data):
        if not isinstance(entry, dict) or set(entry) != {"rank", "word", "status", "source"}:
            raise SeedFormatError(f"entry {k}: expected exactly the fields rank, word, status, source")
        rank, word, source = entry["rank"], entry["word"], entry["source"]
        if not isinstance(rank, int) or isinstance(rank, bool):
            raise SeedFormatError(f"entry {k}: rank must be an integer")
        if not 2 <= rank <= MAX_RANK:
            raise RankError(f"entry {k}: rank out of supported range: {rank}")
        if not isinstance(word, str) or not isinstance(source, str):
            raise SeedFormatError(f"entry {k}: word and source must be strings")
        try:
            x = parse_word(CoxeterContext.of(rank), word)
        except WordError as exc:
            raise WordError(f"entry {k}: {exc}") from None
        seed = Seed(rank, x, _parse_status(entry["status"]), source)
        prev = seen.get((rank, x))
        if prev is not None:
            if prev.status != seed.status:
                raise SeedFormatError(f"entry {k}: contradicts an earlier entry for S{rank}:{word}")
            continue
        seen[(rank, x)] = seed
        out.append(seed)
    return out


def load_seeds(path: Union[str, Path]) -> list[Seed]:
    """Read a UTF-8 JSON seed file (list of {rank, word, status, source})."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SeedFormatError(f"{path}: {exc}") from None
    return parse_seeds(data)


def literature_seeds() -> list[Seed]:
    """Answers quoted from the literature that the sl6 reproduction starts from."""
    text = resources.files("cellkit.data").joinpath("literature_seeds.json").read_text(encoding="utf-8")
    return parse_seeds(json.loads(text))


Key = tuple[int, Element]


class KostantDB:
    """Known statuses per (rank, left-cell involution)."""

    def __init__(self, ranks: dict[int, RankData]):
        self.ranks = dict(sorted(ranks.items()))
        self.known: dict[Key, Derivation] = {}

    @classmethod
    def build(cls, max_rank: int, method: str = "kl", cache_dir=None) -> "KostantDB":
        if not 2 <= max_rank <= MAX_RANK:
            raise RankError(f"rank out of supported range: {max_rank} (supported 2..{MAX_RANK})")
        return cls({n: RankData.build(n, method, cache_dir) for n in range(2, max_rank + 1)})

    def copy(self) -> "KostantDB":
        out = KostantDB(self.ranks)
        out.known = dict(self.known)
        return out

    def key(self, rank: int, x: Element) -> Key:
        try:
            return rank, self.ranks[rank].rep[x]
        except KeyError:
            raise UserError(f"rank {rank} is not part of this database") from None

    def status(self, rank: int, x: Element) -> Status:
        d = self.known.get(self.key(rank, x))
        return d.status if d else Status.UNKNOWN

    def derivation(self, rank: int, x: Element) -> Optional[Derivation]:
        return self.known.get(self.key(rank, x))

    def _record(self, key: Key, deriv: Derivation) -> bool:
        old = self.known.get(key)
        if old is None:
            self.known[key] = deriv
            return True
        if old.status != deriv.status:
            raise ConflictError(
                f"conflict at S{key[0]}:{key[1].word_str or 'e'}\n"
                f"--- derivation 1\n{old.render()}\n--- derivation 2\n{deriv.render()}",
                old, deriv,
            )
        return False

    def ingest(self, seed: Seed) -> bool:
        if seed.rank not in self.ranks:
            return False
        key = self.key(seed.rank, seed.element)
        leaf = Derivation("seed", seed.rank, seed.element.word_str, seed.status, seed.source)
        if key[1] != seed.element:
            leaf = Derivation("cell", seed.rank, key[1].word_str, seed.status,
                              "same left cell", (leaf,))
        return self._record(key, leaf)

    def totals(self, rank: int) -> dict[str, int]:
        counts = {s.value: 0 for s in Status}
        for d in self.ranks[rank].keys:
            counts[self.status(rank, d).value] += 1
        return counts


# ---------------------------------------------------------------------------
# rules


@dataclass(frozen=True)
class _Link:
    """Two cells with equal status."""

    a: Key
    b: Key
    rule: str
    note: str


@dataclass(frozen=True)
class _Product:
    """target positive iff every factor positive."""

    target: Key
    factors: tuple[Key, ...]
    note: str


def _intervals(n: int) -> Iterable[tuple[int, int]]:
    for a in range(1, n):
        for b in range(a, n):
            if b - a + 1 < n - 1:
                yield a, b


def _components(subset: tuple[int, ...]) -> list[tuple[int, int]]:
    comps, start = [], None
    for k, s in enumerate(subset):
        if start is None:
            start = s
        if k + 1 == len(subset) or subset[k + 1] != s + 1:
            comps.append((start, s))
            start = None
    return comps


def _links(db: KostantDB, rules=("ind", "sym")) -> list[_Link]:
    links: dict[tuple[Key, Key], _Link] = {}
    for n, data in db.ranks.items():
        ctx = data.ctx
        for a, b in _intervals(n) if "ind" in rules else ():
            m = b - a + 2
            if m not in db.ranks:
                continue
            small = db.ranks[m]
            subset = range(a, b + 1)
            for x in small.ctx.elements:
                y = theorem1_map(ctx, embed(ctx, x, a - 1), subset)
                ka, kb = db.key(m, x), db.key(n, y)
                note = f"I={a}..{b}, x={x.word_str or 'e'}"
                links.setdefault((ka, kb), _Link(ka, kb, "ind", note))
        for d in data.keys if "sym" in rules else ():
            kd, ks = db.key(n, d), db.key(n, diagram_automorphism(ctx, d))
            if kd != ks and (ks, kd) not in links:
                links.setdefault((kd, ks), _Link(kd, ks, "sym", "s_i -> s_{n-i}"))
    return list(links.values())


def _products(db: KostantDB) -> list[_Product]:
    out: dict[tuple, _Product] = {}
    for n, data in db.ranks.items():
        ctx = data.ctx
        gens = list(ctx.gens)
        for r in range(2, len(gens)):
            for subset in itertools.combinations(gens, r):
                comps = _components(subset)
                if len(comps) < 2 or any(b - a + 2 not in db.ranks for a, b in comps):
                    continue
                factor_groups = [db.ranks[b - a + 2].ctx.elements for a, b in comps]
                for parts in itertools.product(*factor_groups):
                    x = ctx.e
                    for (a, _), part in zip(comps, parts):
                        x = x * embed(ctx, part, a - 1)
                    y = theorem1_map(ctx, x, subset)
                    factors = tuple(db.key(b - a + 2, part) for (a, b), part in zip(comps, parts))
                    target = db.key(n, y)
                    note = "I=" + ",".join(map(str, subset)) + " x=" + (x.word_str or "e")
                    out.setdefault((target, factors), _Product(target, factors, note))
    return list(out.values())


def _derive(rule: str, key: Key, status: Status, note: str, premises, flagged=False) -> Derivation:
    return Derivation(rule, key[0], key[1].word_str, status, note, tuple(premises), flagged)


def _apply_link(db: KostantDB, link: _Link) -> bool:
    da, db_ = db.known.get(link.a), db.known.get(link.b)
    if da is not None and db_ is None:
        return db._record(link.b, _derive(link.rule, link.b, da.status, link.note, [da]))
    if db_ is not None and da is None:
        return db._record(link.a, _derive(link.rule, link.a, db_.status, link.note, [db_]))
    if da is not None and db_ is not None and da.status != db_.status:
        db._record(link.b, _derive(link.rule, link.b, da.status, link.note, [da]))
    return False


def _apply_product(db: KostantDB, prod: _Product) -> bool:
    known = db.known
    t = known.get(prod.target)
    fs = [known.get(f) for f in prod.factors]
    pos, neg = Status.POSITIVE, Status.NEGATIVE
    changed = False
    if all(f is not None and f.status is pos for f in fs):
        changed |= db._record(prod.target, _derive("product", prod.target, pos, prod.note, fs, True))
    else:
        for f in fs:
            if f is not None and f.status is neg:
                changed |= db._record(prod.target, _derive("product", prod.target, neg, prod.note, [f], True))
                break
    t = known.get(prod.target)
    if t is None:
        return changed
    if t.status is pos:
        for key in prod.factors:
            changed |= db._record(key, _derive("product", key, pos, prod.note, [t], True))
    else:
        open_ = [k for k, f in zip(prod.factors, fs) if f is None]
        others_pos = all(f.status is pos for f in fs if f is not None)
        if len(open_) == 1 and others_pos:
            premises = [t] + [f for f in fs if f is not None]
            changed |= db._record(open_[0], _derive("product", open_[0], neg, prod.note, premises, True))
    return changed


def propagate(
    db: KostantDB,
    seeds: Iterable[Seed] = (),
    allow_product_rule: bool = False,
    rng: Optional[random.Random] = None,
    rules: Iterable[str] = ("ind", "sym"),
) -> KostantDB:
    """Least fixpoint of the rules starting from ``db`` plus ``seeds``.

    Returns a new database; ``db`` is not modified. ``rng`` shuffles the rule
    order on every pass (the fixpoint does not depend on it). ``rules``
    restricts which of ``ind``/``sym`` are used.
    """
    enabled = set(rules)
    if not enabled <= {"ind", "sym"}:
        raise UserError(f"unknown rules {sorted(enabled - {'ind', 'sym'})}")
    out = db.copy()
    for seed in seeds:
        out.ingest(seed)
    rules = _links(out, enabled)
    if allow_product_rule:
        rules += _products(out)
    passes = 0
    changed = True
    while changed:
        changed = False
        passes += 1
        order = list(rules)
        if rng is not None:
            rng.shuffle(order)
        for rule in order:
            if isinstance(rule, _Link):
                changed |= _apply_link(out, rule)
            else:
                changed |= _apply_product(out, rule)
    log.debug("fixpoint after %d passes over %d rules", passes, len(rules))
    return out


# ---------------------------------------------------------------------------
# reports


def report_rows(db: KostantDB, rank: int) -> list[tuple[str, str, str]]:
    rows = []
    for d in db.ranks[rank].keys:
        deriv = db.derivation(rank, d)
        if deriv is None:
            rows.append((d.word_str, Status.UNKNOWN.value, "-"))
        else:
            rows.append((d.word_str, deriv.status.value, deriv.summary()))
    return rows


def report_tsv(db: KostantDB, ranks: Optional[Iterable[int]] = None) -> str:
    lines = []
    for n in ranks or db.ranks:
        lines.append(f"# rank={n}")
        lines.extend("\t".join(r) for r in report_rows(db, n))
        t = db.totals(n)
        lines.append(f"positive={t['positive']} negative={t['negative']} unknown={t['unknown']}")
    return "\n".join(lines) + "\n"


def report_json(db: KostantDB, ranks: Optional[Iterable[int]] = None) -> dict:
    out = {}
    for n in ranks or db.ranks:
        entries = []
        for d in db.ranks[n].keys:
            deriv = db.derivation(n, d)
            entries.append({
                "word": d.word_str,
                "status": deriv.status.value if deriv else Status.UNKNOWN.value,
                "provenance": deriv.to_dict() if deriv else None,
            })
        out[str(n)] = {"entries": entries, "totals": db.totals(n)}
    return {"format": "cellkit-kostant v1", "ranks": out}


def db_from_json(data: dict, method: str = "rsk") -> KostantDB:
    """Rebuild a database from :func:`report_json` output."""

    def tree(d: dict) -> Derivation:
        return Derivation(d["rule"], d["rank"], d["word"], Status(d["status"]), d.get("note", ""),
                          tuple(tree(p) for p in d.get("premises", ())), d.get("flagged", False))

    if not isinstance(data, dict) or data.get("format") != "cellkit-kostant v1":
        raise SeedFormatError("not a cellkit-kostant v1 document")
    ranks = sorted(int(n) for n in data["ranks"])
    db = KostantDB({n: RankData.build(n, method) for n in ranks})
    for n in ranks:
        ctx = db.ranks[n].ctx
        for entry in data["ranks"][str(n)]["entries"]:
            if entry["provenance"] is not None:
                db.known[db.key(n, parse_word(ctx, entry["word"]))] = tree(entry["provenance"])
    return db
