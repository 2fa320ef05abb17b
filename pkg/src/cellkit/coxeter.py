"""The symmetric group S_n as the Coxeter system of type A_{n-1}.

Elements are one-line permutations of ``1..n``. Words are sequences of
generator indices ``i`` (for the simple transposition ``s_i = (i, i+1)``) and
multiply left to right: the word ``(1, 2)`` is ``s_1 s_2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from cellkit.errors import InconsistencyError, RankError, RankMismatchError, WordError

__all__ = [
    "MAX_RANK",
    "Element",
    "CoxeterContext",
    "from_word",
    "parse_word",
    "format_word",
    "bruhat_leq",
    "parabolic",
    "theorem1_map",
    "involutions",
    "diagram_automorphism",
    "rsk",
    "rsk_shape",
    "embed",
    "restrict",
]

MAX_RANK = 7


def _inversions(perm: Sequence[int]) -> int:
    n = len(perm)
    return sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])


def _lex_least_word(perm: Sequence[int]) -> tuple[int, ...]:
    # repeatedly strip the smallest left descent: s_i x < x iff i+1 precedes i
    p = list(perm)
    pos = [0] * (len(p) + 1)
    for k, val in enumerate(p):
        pos[val] = k
    word = []
    while True:
        for i in range(1, len(p)):
            if pos[i + 1] < pos[i]:
                a, b = pos[i], pos[i + 1]
                p[a], p[b] = i + 1, i
                pos[i], pos[i + 1] = b, a
                word.append(i)
                break
        else:
            return tuple(word)


@dataclass(frozen=True)
class Element:
    """A permutation in one-line notation, ``perm[k-1]`` being the image of ``k``."""

    perm: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.perm)

    @cached_property
    def length(self) -> int:
        return _inversions(self.perm)

    @cached_property
    def word(self) -> tuple[int, ...]:
        """The lexicographically least reduced word."""
        return _lex_least_word(self.perm)

    @property
    def word_str(self) -> str:
        return format_word(self.word)

    @classmethod
    def identity(cls, n: int) -> "Element":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def generator(cls, n: int, i: int) -> "Element":
        if not 1 <= i < n:
            raise WordError(f"generator index {i} out of range 1..{n - 1}")
        p = list(range(1, n + 1))
        p[i - 1], p[i] = p[i], p[i - 1]
        return cls(tuple(p))

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.rank != self.rank:
            raise RankMismatchError(f"rank mismatch: S_{self.rank} vs S_{other.rank}")

    def __mul__(self, other: "Element") -> "Element":
        self._check(other)
        p = self.perm
        return Element(tuple(p[j - 1] for j in other.perm))

    def inverse(self) -> "Element":
        out = [0] * self.rank
        for k, val in enumerate(self.perm, 1):
            out[val - 1] = k
        return Element(tuple(out))

    def is_identity(self) -> bool:
        return all(v == k for k, v in enumerate(self.perm, 1))

    def is_involution(self) -> bool:
        return (self * self).is_identity()

    def right_descents(self) -> set[int]:
        p = self.perm
        return {i for i in range(1, self.rank) if p[i - 1] > p[i]}

    def left_descents(self) -> set[int]:
        return self.inverse().right_descents()

    def __str__(self) -> str:
        if not self.word:
            return "e"
        return "".join(f"s{i}" for i in self.word)


def format_word(word: Iterable[int]) -> str:
    return ",".join(str(i) for i in word)


class CoxeterContext:
    """All of S_n, enumerated once, with multiplication tables by generators.

    Elements are indexed ``0..n!-1`` in order of (length, canonical word), which
    is a linear extension of the Bruhat order. Use :meth:`of` to get the shared
    instance for a rank.
    """

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 1 or n > MAX_RANK:
            raise RankError(f"rank out of supported range: {n} (supported 1..{MAX_RANK})")
        self.n = n
        elems = [Element(p) for p in itertools.permutations(range(1, n + 1))]
        elems.sort(key=lambda x: (x.length, x.word))
        self.elements: list[Element] = elems
        self.index: dict[Element, int] = {x: i for i, x in enumerate(elems)}
        self.lengths: list[int] = [x.length for x in elems]
        self.words: list[tuple[int, ...]] = [x.word for x in elems]
        self.gens = tuple(range(1, n))
        # lmul[s][i] = index of s*x_i, rmul[s][i] = index of x_i*s
        self.lmul: dict[int, list[int]] = {}
        self.rmul: dict[int, list[int]] = {}
        for s in self.gens:
            g = Element.generator(n, s)
            self.lmul[s] = [self.index[g * x] for x in elems]
            self.rmul[s] = [self.index[x * g] for x in elems]
        self.inv: list[int] = [self.index[x.inverse()] for x in elems]
        self.e = elems[0]
        self.w0 = elems[-1]

    @staticmethod
    @lru_cache(maxsize=None)
    def of(n: int) -> "CoxeterContext":
        return CoxeterContext(n)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"CoxeterContext(n={self.n})"

    def idx(self, x: Element) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise RankMismatchError(f"{x!r} is not an element of S_{self.n}") from None

    def generator(self, i: int) -> Element:
        return Element.generator(self.n, i)

    @property
    def max_length(self) -> int:
        return self.n * (self.n - 1) // 2


def from_word(ctx: CoxeterContext, word: Iterable[int]) -> Element:
    """The product ``s_{i1} ... s_{ik}``; the word need not be reduced."""
    i = 0
    rmul = ctx.rmul
    for s in word:
        if not isinstance(s, int) or not 1 <= s < ctx.n:
            raise WordError(f"generator index {s!r} out of range 1..{ctx.n - 1}")
        i = rmul[s][i]
    return ctx.elements[i]


def parse_word(ctx: CoxeterContext, text: str) -> Element:
    """Parse comma-separated generator indices; ``""`` (or ``"e"``) is the identity."""
    text = text.strip()
    if text in ("", "e"):
        return ctx.e
    try:
        word = [int(t) for t in text.split(",")]
    except ValueError:
        raise WordError(f"malformed word {text!r}") from None
    return from_word(ctx, word)


def bruhat_leq(a: Element, b: Element) -> bool:
    """Bruhat order via the rank-matrix criterion for permutations."""
    a._check(b)
    if a.length > b.length:
        return False
    if a.length == b.length:
        return a == b
    n = a.rank
    pa, pb = a.perm, b.perm
    # x <= y iff #{j <= i : x(j) >= k} <= #{j <= i : y(j) >= k} for all i, k
    for k in range(2, n + 1):
        ca = cb = 0
        for i in range(n - 1):
            ca += pa[i] >= k
            cb += pb[i] >= k
            if ca > cb:
                return False
    return True


def parabolic(ctx: CoxeterContext, subset: Iterable[int]) -> tuple[list[Element], Element]:
    """Elements of W_I (in context order) and the longest element of W_I."""
    subset = sorted(set(subset))
    for s in subset:
        if not 1 <= s < ctx.n:
            raise WordError(f"generator index {s} out of range 1..{ctx.n - 1}")
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for s in subset:
                j = ctx.rmul[s][i]
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    members = [ctx.elements[i] for i in sorted(seen)]
    top = 0
    grew = True
    while grew:
        grew = False
        for s in subset:
            j = ctx.rmul[s][top]
            if ctx.lengths[j] > ctx.lengths[top]:
                top = j
                grew = True
                break
    return members, ctx.elements[top]


def theorem1_map(ctx: CoxeterContext, x: Element, subset: Iterable[int]) -> Element:
    """``x * w0_I * w0`` for ``x`` in the parabolic subgroup W_I."""
    subset = set(subset)
    if x.rank != ctx.n:
        raise RankMismatchError(f"{x} is not in S_{ctx.n}")
    if not set(x.word) <= subset:
        raise WordError(f"{x} is not in the parabolic subgroup generated by {sorted(subset)}")
    _, w0_i = parabolic(ctx, subset)
    y = x * w0_i * ctx.w0
    if y.length != ctx.w0.length - w0_i.length + x.length:
        raise InconsistencyError(f"length identity fails for x={x}, I={sorted(subset)}")
    return y


def involutions(ctx: CoxeterContext) -> list[Element]:
    """All x with x*x = e, identity included, sorted by (length, canonical word)."""
    return [x for x in ctx.elements if x.is_involution()]


def diagram_automorphism(ctx: CoxeterContext, x: Element) -> Element:
    """Image of x under s_i -> s_{n-i}."""
    return from_word(ctx, [ctx.n - i for i in x.word])


def rsk(x: Element) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """Row-insertion RSK of the one-line word of x: ``(P, Q)`` as tuples of rows."""
    P: list[list[int]] = []
    Q: list[list[int]] = []
    for step, val in enumerate(x.perm, 1):
        row = 0
        while True:
            if row == len(P):
                P.append([val])
                Q.append([step])
                break
            r = P[row]
            # first entry greater than val gets bumped
            for k, cur in enumerate(r):
                if cur > val:
                    r[k], val = val, cur
                    row += 1
                    break
            else:
                r.append(val)
                Q[row].append(step)
                break
    return tuple(map(tuple, P)), tuple(map(tuple, Q))


def rsk_shape(x: Element) -> tuple[int, ...]:
    P, _ = rsk(x)
    return tuple(len(r) for r in P)


def embed(ctx: CoxeterContext, x: Element, offset: int) -> Element:
    """Send x in S_m to S_n by relabelling s_i -> s_{i+offset}."""
    if offset < 0 or x.rank + offset > ctx.n:
        raise WordError(f"cannot embed S_{x.rank} at offset {offset} into S_{ctx.n}")
    return from_word(ctx, [i + offset for i in x.word])


def restrict(small: CoxeterContext, x: Element, offset: int) -> Element:
    """Inverse of :func:`embed`: read x (supported on s_{offset+1}..) as an element of ``small``."""
    word = [i - offset for i in x.word]
    if any(not 1 <= i < small.n for i in word):
        raise WordError(f"{x} is not supported on the generators {offset + 1}..{offset + small.n - 1}")
    return from_word(small, word)
