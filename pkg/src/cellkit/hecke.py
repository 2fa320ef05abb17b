"""Hecke algebra of S_n over Z[v, v^-1], Soergel normalisation.

Quadratic relation ``H_s H_s = H_e + (v^-1 - v) H_s``; the Kazhdan-Lusztig
basis element of ``s`` is ``H_s + v H_e`` and off-diagonal KL polynomials
``h_{x,y}`` lie in ``v Z[v]``.

Internally elements are handled as ``{element index: LaurentPoly}`` dicts over
a :class:`~cellkit.coxeter.CoxeterContext`; :class:`HeckeElt` is the public
wrapper keyed by :class:`~cellkit.coxeter.Element`.
"""

from __future__ import annotations

import logging
import os
import tempfile
import time
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterator, Mapping, Optional, Union

from cellkit.coxeter import CoxeterContext, Element, bruhat_leq, format_word
from cellkit.errors import (
    BasisMismatchError,
    KLCacheInvariantError,
    KLCacheParseError,
    KLCacheRankError,
    RankError,
    RankMismatchError,
)
from cellkit.laurent import ONE, V, V_INV, ZERO, LaurentPoly

log = logging.getLogger(__name__)

__all__ = [
    "STANDARD",
    "KL",
    "DUAL_KL",
    "HeckeElt",
    "KLTable",
    "mul_standard",
    "bar",
    "kl_table",
    "kl_column_via",
    "mu",
    "to_dual_basis",
    "dual_in_standard",
    "to_kl_basis",
    "kl_to_standard",
    "structure_constants",
    "save_table",
    "load_table",
    "cached_kl_table",
]

STANDARD = "standard"
KL = "kl"
DUAL_KL = "dual_kl"
BASES = (STANDARD, KL, DUAL_KL)

Scalar = Union[int, LaurentPoly]

_V_DIFF = V - V_INV  # v - v^-1
_V_DIFF_BAR = V_INV - V  # v^-1 - v


class HeckeElt:
    """A finitely supported combination of basis elements of one declared basis."""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: str, coeffs: Optional[Mapping[Element, Scalar]] = None):
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.basis = basis
        clean: dict[Element, LaurentPoly] = {}
        ranks = set()
        for x, c in (coeffs or {}).items():
            c = LaurentPoly.coerce(c)
            if c:
                clean[x] = c
                ranks.add(x.rank)
        if len(ranks) > 1:
            raise RankMismatchError(f"mixed ranks {sorted(ranks)} in one Hecke element")
        self.coeffs = clean

    @classmethod
    def basis_element(cls, x: Element, basis: str = STANDARD) -> "HeckeElt":
        return cls(basis, {x: ONE})

    @property
    def rank(self) -> Optional[int]:
        for x in self.coeffs:
            return x.rank
        return None

    def coeff(self, x: Element) -> LaurentPoly:
        return self.coeffs.get(x, ZERO)

    def support(self) -> list[Element]:
        return sorted(self.coeffs, key=lambda x: (x.length, x.word))

    def items(self) -> Iterator[tuple[Element, LaurentPoly]]:
        for x in self.support():
            yield x, self.coeffs[x]

    def is_zero(self) -> bool:
        return not self.coeffs

    def _same(self, other: "HeckeElt") -> None:
        if not isinstance(other, HeckeElt):
            raise TypeError(f"expected HeckeElt, got {type(other).__name__}")
        if other.basis != self.basis:
            raise BasisMismatchError(
                f"cannot combine {self.basis} and {other.basis} coordinates without conversion"
            )
        if self.rank and other.rank and self.rank != other.rank:
            raise RankMismatchError(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        self._same(other)
        out = dict(self.coeffs)
        for x, c in other.coeffs.items():
            out[x] = out.get(x, ZERO) + c
        return HeckeElt(self.basis, out)

    def __neg__(self) -> "HeckeElt":
        return HeckeElt(self.basis, {x: -c for x, c in self.coeffs.items()})

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        return self + (-other)

    def scale(self, c: Scalar) -> "HeckeElt":
        c = LaurentPoly.coerce(c)
        return HeckeElt(self.basis, {x: c * p for x, p in self.coeffs.items()})

    def __rmul__(self, c: Scalar) -> "HeckeElt":
        if isinstance(c, (int, LaurentPoly)):
            return self.scale(c)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElt):
            return NotImplemented
        return self.basis == other.basis and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.basis, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        sym = {STANDARD: "H", KL: "KL", DUAL_KL: "dKL"}[self.basis]
        if not self.coeffs:
            return f"HeckeElt({self.basis}, 0)"
        body = " + ".join(f"({c})*{sym}[{x}]" for x, c in self.items())
        return f"HeckeElt({self.basis}, {body})"


# ---------------------------------------------------------------------------
# index-level helpers


def _ctx_of(*elts: HeckeElt) -> CoxeterContext:
    ranks = {a.rank for a in elts if a.rank is not None}
    if len(ranks) > 1:
        raise RankMismatchError(f"rank mismatch: {sorted(ranks)}")
    if not ranks:
        raise ValueError("cannot infer the rank of a zero element")
    return CoxeterContext.of(ranks.pop())


def _to_idx(ctx: CoxeterContext, a: HeckeElt) -> dict[int, LaurentPoly]:
    return {ctx.idx(x): c for x, c in a.coeffs.items()}


def _from_idx(ctx: CoxeterContext, basis: str, d: Mapping[int, LaurentPoly]) -> HeckeElt:
    out = HeckeElt(basis)
    out.coeffs = {ctx.elements[i]: c for i, c in d.items() if c}
    return out


def _addto(acc: dict[int, LaurentPoly], i: int, p: LaurentPoly) -> None:
    q = acc.get(i)
    acc[i] = p if q is None else q + p


def _prune(d: dict[int, LaurentPoly]) -> dict[int, LaurentPoly]:
    return {i: p for i, p in d.items() if p}


def _rmul_gen(ctx: CoxeterContext, d: Mapping[int, LaurentPoly], s: int) -> dict[int, LaurentPoly]:
    """Right multiplication by H_s in the standard basis."""
    rm, ln = ctx.rmul[s], ctx.lengths
    out: dict[int, LaurentPoly] = {}
    for x, p in d.items():
        xs = rm[x]
        _addto(out, xs, p)
        if ln[xs] < ln[x]:
            _addto(out, x, _V_DIFF_BAR * p)
    return _prune(out)


def _mul_idx(ctx: CoxeterContext, a: Mapping[int, LaurentPoly], b: Mapping[int, LaurentPoly]) -> dict[int, LaurentPoly]:
    """a * b in the standard basis: sum of b_y * (a H_y), with a H_y memoised along canonical words."""
    memo: dict[int, dict[int, LaurentPoly]] = {0: dict(a)}
    words, rmul = ctx.words, ctx.rmul

    def times(y: int) -> dict[int, LaurentPoly]:
        if y in memo:
            return memo[y]
        # descend to the nearest memoised prefix, then climb back up
        word = words[y]
        k = len(word)
        stack = []
        cur = y
        while cur not in memo:
            s = word[k - 1]
            stack.append(s)
            cur = rmul[s][cur]
            k -= 1
        res = memo[cur]
        for s in reversed(stack):
            res = _rmul_gen(ctx, res, s)
            cur = rmul[s][cur]
            memo[cur] = res
        return res

    out: dict[int, LaurentPoly] = {}
    for y in sorted(b):
        cy = b[y]
        for x, p in times(y).items():
            _addto(out, x, cy * p)
    return _prune(out)


def mul_standard(a: HeckeElt, b: HeckeElt) -> HeckeElt:
    """Product of two elements given in the standard basis."""
    for t in (a, b):
        if t.basis != STANDARD:
            raise BasisMismatchError(f"mul_standard needs standard coordinates, got {t.basis}")
    if a.is_zero() or b.is_zero():
        if a.rank and b.rank and a.rank != b.rank:
            raise RankMismatchError(f"rank mismatch: {a.rank} vs {b.rank}")
        return HeckeElt(STANDARD)
    ctx = _ctx_of(a, b)
    return _from_idx(ctx, STANDARD, _mul_idx(ctx, _to_idx(ctx, a), _to_idx(ctx, b)))


@lru_cache(maxsize=None)
def _bar_basis(n: int) -> tuple[dict[int, LaurentPoly], ...]:
    """bar(H_x) for every x, built as bar(H_{x s}) * (H_s + (v - v^-1)) along canonical words."""
    ctx = CoxeterContext.of(n)
    out: list[dict[int, LaurentPoly]] = [{0: ONE}]
    for y in range(1, len(ctx)):
        s = ctx.words[y][-1]
        prev = out[ctx.rmul[s][y]]
        acc = _rmul_gen(ctx, prev, s)
        for x, p in prev.items():
            _addto(acc, x, _V_DIFF * p)
        out.append(_prune(acc))
    return tuple(out)


def bar(a: HeckeElt) -> HeckeElt:
    """The bar involution on an element in standard coordinates."""
    if a.basis != STANDARD:
        raise BasisMismatchError(f"bar is computed in standard coordinates, got {a.basis}")
    if a.is_zero():
        return a
    ctx = _ctx_of(a)
    images = _bar_basis(ctx.n)
    out: dict[int, LaurentPoly] = {}
    for x, c in _to_idx(ctx, a).items():
        cb = c.bar()
        for z, p in images[x].items():
            _addto(out, z, cb * p)
    return _from_idx(ctx, STANDARD, _prune(out))


# ---------------------------------------------------------------------------
# KL table


class KLTable:
    """All KL polynomials ``h_{x,y}`` of S_n, stored column by column.

    ``column(y)`` is the standard-basis expansion of the KL basis element of y.
    """

    def __init__(self, ctx: CoxeterContext, columns: list[dict[int, LaurentPoly]]):
        self.ctx = ctx
        self._cols = columns
        self._rows: Optional[list[dict[int, LaurentPoly]]] = None
        self._mu_below: Optional[list[tuple[tuple[int, int], ...]]] = None

    @property
    def rank(self) -> int:
        return self.ctx.n

    def __len__(self) -> int:
        return len(self._cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KLTable):
            return NotImplemented
        return self.rank == other.rank and self._cols == other._cols

    def h(self, x: Element, y: Element) -> LaurentPoly:
        return self._cols[self.ctx.idx(y)].get(self.ctx.idx(x), ZERO)

    def h_idx(self, x: int, y: int) -> LaurentPoly:
        return self._cols[y].get(x, ZERO)

    def column_idx(self, y: int) -> dict[int, LaurentPoly]:
        return self._cols[y]

    def row_idx(self, x: int) -> dict[int, LaurentPoly]:
        if self._rows is None:
            rows: list[dict[int, LaurentPoly]] = [{} for _ in self._cols]
            for y, col in enumerate(self._cols):
                for x2, p in col.items():
                    rows[x2][y] = p
            self._rows = rows
        return self._rows[x]

    def column(self, y: Element) -> dict[Element, LaurentPoly]:
        els = self.ctx.elements
        return {els[x]: p for x, p in self._cols[self.ctx.idx(y)].items()}

    def kl_element(self, y: Element) -> HeckeElt:
        """The KL basis element of y in standard coordinates."""
        return _from_idx(self.ctx, STANDARD, self._cols[self.ctx.idx(y)])

    def mu_below(self, y: int) -> tuple[tuple[int, int], ...]:
        """``(z, mu(z, y))`` for all z < y with nonzero mu, by index."""
        if self._mu_below is None:
            self._mu_below = [
                tuple(sorted((z, p.coeff(1)) for z, p in col.items() if z != y and p.coeff(1)))
                for y, col in enumerate(self._cols)
            ]
        return self._mu_below[y]

    def entries(self) -> Iterator[tuple[Element, Element, LaurentPoly]]:
        """Nonzero entries in lexicographic order of (word of x, word of y)."""
        ctx = self.ctx
        by_word = sorted(range(len(ctx)), key=lambda i: ctx.words[i])
        rank_of = {i: r for r, i in enumerate(by_word)}
        for x in by_word:
            row = self.row_idx(x)
            for y in sorted(row, key=rank_of.__getitem__):
                yield ctx.elements[x], ctx.elements[y], row[y]

    def validate(self) -> None:
        """Raise KLCacheInvariantError unless the stored data has the shape of a KL table."""
        ctx = self.ctx
        if len(self._cols) != len(ctx):
            raise KLCacheInvariantError(f"expected {len(ctx)} columns, found {len(self._cols)}")
        for y, col in enumerate(self._cols):
            if col.get(y) != ONE:
                raise KLCacheInvariantError(f"h[y][y] != 1 for y = {ctx.elements[y]}")
            for x, p in col.items():
                if x == y:
                    continue
                if not p:
                    raise KLCacheInvariantError("stored zero entry")
                if p.mindeg < 1:
                    raise KLCacheInvariantError(
                        f"h[x][y] not in vZ[v] for x = {ctx.elements[x]}, y = {ctx.elements[y]}"
                    )
                if not bruhat_leq(ctx.elements[x], ctx.elements[y]):
                    raise KLCacheInvariantError(
                        f"nonzero h[x][y] with x not <= y: x = {ctx.elements[x]}, y = {ctx.elements[y]}"
                    )


def _kl_column(ctx: CoxeterContext, cols: list, table_mu: Callable[[int], tuple], w: int, s: int) -> dict[int, LaurentPoly]:
    """KL_s * KL_{sw} - sum mu(z, sw) KL_z over z < sw with sz < z."""
    lm, ln = ctx.lmul[s], ctx.lengths
    sw = lm[w]
    if ln[sw] >= ln[w]:
        raise ValueError(f"s{s} is not a left descent of {ctx.elements[w]}")
    out: dict[int, LaurentPoly] = {}
    for x, p in cols[sw].items():
        sx = lm[x]
        _addto(out, sx, p)
        _addto(out, x, p.shift(1) if ln[sx] > ln[x] else p.shift(-1))
    for z, m in table_mu(sw):
        if ln[lm[z]] < ln[z]:
            for x, p in cols[z].items():
                _addto(out, x, p * -m)
    return _prune(out)


def kl_table(ctx: CoxeterContext, descent: Optional[Callable[[CoxeterContext, int], int]] = None) -> KLTable:
    """Compute every KL basis element by induction on length.

    ``descent(ctx, w)`` picks the left descent used for w; the default is the
    first letter of its canonical word.
    """
    if ctx.n > 7:
        raise RankError(f"rank out of supported range: {ctx.n}")
    t0 = time.perf_counter()
    cols: list[dict[int, LaurentPoly]] = [{0: ONE}]
    mus: list[tuple[tuple[int, int], ...]] = [()]
    for w in range(1, len(ctx)):
        s = descent(ctx, w) if descent else ctx.words[w][0]
        col = _kl_column(ctx, cols, mus.__getitem__, w, s)
        cols.append(col)
        mus.append(tuple(sorted((z, p.coeff(1)) for z, p in col.items() if z != w and p.coeff(1))))
    table = KLTable(ctx, cols)
    table._mu_below = mus
    log.debug("computed KL table rank=%d in %.2fs", ctx.n, time.perf_counter() - t0)
    return table


def kl_column_via(table: KLTable, w: Element, s: int) -> HeckeElt:
    """Recompute the KL element of w from shorter columns using the left descent s."""
    ctx = table.ctx
    col = _kl_column(ctx, table._cols, table.mu_below, ctx.idx(w), s)
    return _from_idx(ctx, STANDARD, col)


def mu(table: KLTable, z: Element, y: Element) -> int:
    """Coefficient of v in h_{z,y} (0 when the entry is absent)."""
    return table.h(z, y).coeff(1)


# ---------------------------------------------------------------------------
# basis changes


def _check_rank(table: KLTable, a: HeckeElt) -> None:
    if a.rank is not None and a.rank != table.rank:
        raise RankMismatchError(f"element of S_{a.rank} used with a rank-{table.rank} table")


def to_dual_basis(table: KLTable, a: HeckeElt) -> HeckeElt:
    """Standard coordinates -> dual KL coordinates, using H_y = sum_x h_{y,x} dKL_x."""
    if a.basis != STANDARD:
        raise BasisMismatchError(f"expected standard coordinates, got {a.basis}")
    _check_rank(table, a)
    ctx = table.ctx
    out: dict[int, LaurentPoly] = {}
    for y, c in _to_idx(ctx, a).items():
        for x, p in table.row_idx(y).items():
            _addto(out, x, c * p)
    return _from_idx(ctx, DUAL_KL, _prune(out))


def _dual_in_standard_idx(table: KLTable, x: int) -> dict[int, LaurentPoly]:
    # row x of the inverse of the unitriangular matrix (h_{y,z}); columns solved in length order
    coeffs: dict[int, LaurentPoly] = {x: ONE}
    above = sorted(table.row_idx(x))  # z >= x in Bruhat order; inverse is supported there too
    for z in above:
        if z == x:
            continue
        acc = ZERO
        for y, p in table.column_idx(z).items():
            if y != z:
                cy = coeffs.get(y)
                if cy is not None:
                    acc = acc + cy * p
        if acc:
            coeffs[z] = -acc
    return coeffs


def dual_in_standard(table: KLTable, x: Element) -> HeckeElt:
    """The dual KL basis element of x in standard coordinates."""
    ctx = table.ctx
    return _from_idx(ctx, STANDARD, _dual_in_standard_idx(table, ctx.idx(x)))


def _to_kl_idx(table: KLTable, d: Mapping[int, LaurentPoly]) -> dict[int, LaurentPoly]:
    rest = dict(d)
    out: dict[int, LaurentPoly] = {}
    while rest:
        z = max(rest)  # maximal length, hence Bruhat-maximal in the support
        c = rest[z]
        out[z] = c
        for x, p in table.column_idx(z).items():
            q = rest.get(x, ZERO) - c * p
            if q:
                rest[x] = q
            else:
                rest.pop(x, None)
    return out


def to_kl_basis(table: KLTable, a: HeckeElt) -> HeckeElt:
    """Standard coordinates -> KL coordinates by unitriangular back-substitution."""
    if a.basis != STANDARD:
        raise BasisMismatchError(f"expected standard coordinates, got {a.basis}")
    _check_rank(table, a)
    return _from_idx(table.ctx, KL, _to_kl_idx(table, _to_idx(table.ctx, a)))


def kl_to_standard(table: KLTable, a: HeckeElt) -> HeckeElt:
    if a.basis != KL:
        raise BasisMismatchError(f"expected KL coordinates, got {a.basis}")
    _check_rank(table, a)
    ctx = table.ctx
    out: dict[int, LaurentPoly] = {}
    for y, c in _to_idx(ctx, a).items():
        for x, p in table.column_idx(y).items():
            _addto(out, x, c * p)
    return _from_idx(ctx, STANDARD, _prune(out))


def structure_constants(table: KLTable, x: Element, y: Element) -> dict[Element, LaurentPoly]:
    """The coefficients k_{x,y,z} of KL_x * KL_y in the KL basis (nonzero ones only)."""
    ctx = table.ctx
    prod = _mul_idx(ctx, table.column_idx(ctx.idx(x)), table.column_idx(ctx.idx(y)))
    return {ctx.elements[z]: c for z, c in sorted(_to_kl_idx(table, prod).items())}


# ---------------------------------------------------------------------------
# persistence

HEADER = "KLCACHE v1 typeA rank={n} convention=soergel"


def dumps_table(table: KLTable) -> str:
    lines = [HEADER.format(n=table.rank)]
    for x, y, p in table.entries():
        lines.append(f"{x.word_str}|{y.word_str}|{p.serialize()}")
    return "\n".join(lines) + "\n"


def save_table(table: KLTable, path: Union[str, os.PathLike]) -> None:
    """Write the cache file atomically (temporary file, then rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = dumps_table(table)
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def loads_table(text: str, rank: Optional[int] = None) -> KLTable:
    if not text.endswith("\n"):
        raise KLCacheParseError("truncated file: missing final newline")
    lines = text[:-1].split("\n")
    head = lines[0]
    prefix, _, rest = head.partition("rank=")
    n_s, _, tail = rest.partition(" ")
    if prefix != "KLCACHE v1 typeA " or tail != "convention=soergel" or not n_s.isdigit():
        raise KLCacheParseError(f"bad header line {head!r}")
    n = int(n_s)
    if head != HEADER.format(n=n):
        raise KLCacheParseError(f"bad header line {head!r}")
    if rank is not None and n != rank:
        raise KLCacheRankError(f"cache holds rank {n}, expected {rank}")
    try:
        ctx = CoxeterContext.of(n)
    except RankError as exc:
        raise KLCacheParseError(str(exc)) from None
    word_index = {format_word(w): i for i, w in enumerate(ctx.words)}
    cols: list[dict[int, LaurentPoly]] = [{} for _ in range(len(ctx))]
    prev_key = None
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split("|")
        if len(parts) != 3:
            raise KLCacheParseError(f"line {lineno}: expected 3 fields")
        wx, wy, poly = parts
        try:
            x, y = word_index[wx], word_index[wy]
        except KeyError:
            raise KLCacheParseError(f"line {lineno}: not a canonical word") from None
        key = (ctx.words[x], ctx.words[y])
        if prev_key is not None and key <= prev_key:
            raise KLCacheParseError(f"line {lineno}: entries out of order")
        prev_key = key
        try:
            p = LaurentPoly.parse(poly)
        except ValueError as exc:
            raise KLCacheParseError(f"line {lineno}: {exc}") from None
        if not p:
            raise KLCacheInvariantError(f"line {lineno}: zero entry stored")
        cols[y][x] = p
    table = KLTable(ctx, cols)
    table.validate()
    return table


def load_table(path: Union[str, os.PathLike], rank: Optional[int] = None) -> KLTable:
    """Load and validate a cache file; nothing is returned unless the whole file is valid."""
    try:
        text = Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError:
        raise KLCacheParseError(f"{path}: not an ASCII text file") from None
    if not text:
        raise KLCacheParseError(f"{path}: empty file")
    return loads_table(text, rank)


def cache_path(cache_dir: Union[str, os.PathLike], n: int) -> Path:
    return Path(cache_dir) / f"kl_typeA_rank{n}.txt"


def cached_kl_table(n: int, cache_dir: Union[str, os.PathLike, None] = None) -> tuple[KLTable, dict]:
    """Load the rank-n table from ``cache_dir`` if present, else compute (and store) it.

    Returns the table and a small info dict (``source``, ``seconds``).
    """
    t0 = time.perf_counter()
    if cache_dir is not None:
        path = cache_path(cache_dir, n)
        if path.exists():
            table = load_table(path, rank=n)
            return table, {"source": "cache", "path": str(path), "seconds": time.perf_counter() - t0}
    table = kl_table(CoxeterContext.of(n))
    info = {"source": "computed", "seconds": time.perf_counter() - t0}
    if cache_dir is not None:
        save_table(table, cache_path(cache_dir, n))
        info["path"] = str(cache_path(cache_dir, n))
    return table, info
