import itertools

import pytest

from cellkit.coxeter import (
    CoxeterContext,
    Element,
    bruhat_leq,
    diagram_automorphism,
    embed,
    from_word,
    involutions,
    parabolic,
    parse_word,
    restrict,
    rsk,
    rsk_shape,
    theorem1_map,
)
from cellkit.errors import RankError, RankMismatchError, WordError


def W(n, text):
    return parse_word(CoxeterContext.of(n), text)


def subword_products(word):
    """Every product of a subword of ``word`` (oracle for the lower Bruhat interval)."""
    return {tuple(word[i] for i in range(len(word)) if mask >> i & 1) for mask in range(1 << len(word))}


def all_reduced_words(ctx, x):
    if x.length == 0:
        return [()]
    out = []
    for s in sorted(x.left_descents()):
        rest = ctx.generator(s) * x
        out += [(s,) + w for w in all_reduced_words(ctx, rest)]
    return out


def test_from_word_examples():
    x = W(3, "1,2,1")
    assert x.perm == (3, 2, 1) and x.length == 3
    assert W(6, "") == CoxeterContext.of(6).e
    assert from_word(CoxeterContext.of(3), (1, 1)).is_identity()


def test_from_word_index_out_of_range():
    with pytest.raises(WordError):
        from_word(CoxeterContext.of(3), (1, 3))
    with pytest.raises(WordError):
        parse_word(CoxeterContext.of(5), "9")
    with pytest.raises(WordError):
        parse_word(CoxeterContext.of(5), "1,,2")


def test_rank_limits():
    with pytest.raises(RankError, match="rank out of supported range"):
        CoxeterContext(8)
    with pytest.raises(RankError):
        CoxeterContext(0)


def test_mul_inv_examples(ctx3):
    s1, s2 = ctx3.generator(1), ctx3.generator(2)
    assert (s1 * s1).is_identity()
    assert (s1 * s2).inverse() == s2 * s1
    w0 = CoxeterContext.of(6).w0
    assert (w0 * w0).is_identity()


def test_rank_mismatch():
    with pytest.raises(RankMismatchError):
        CoxeterContext.of(3).w0 * CoxeterContext.of(4).w0


@pytest.mark.parametrize("n", range(1, 8))
def test_context_census(n):
    ctx = CoxeterContext.of(n)
    assert len(ctx) == len(set(ctx.elements)) == len(list(itertools.permutations(range(n))))
    assert [x.length for x in ctx].count(0) == 1
    assert [x.length for x in ctx].count(n * (n - 1) // 2) == 1
    assert ctx.w0.length == n * (n - 1) // 2


@pytest.mark.parametrize("n", range(1, 6))
def test_words_and_lengths(n):
    ctx = CoxeterContext.of(n)
    for x in ctx:
        assert len(x.word) == x.length
        assert from_word(ctx, x.word) == x
        for s in ctx.gens:
            assert abs((x * ctx.generator(s)).length - x.length) == 1


@pytest.mark.parametrize("n", range(2, 5))
def test_canonical_word_is_lex_least(n):
    ctx = CoxeterContext.of(n)
    for x in ctx:
        words = all_reduced_words(ctx, x)
        assert all(from_word(ctx, w) == x for w in words)
        assert x.word == min(words)


def test_bruhat_examples(ctx3):
    s1, s2 = ctx3.generator(1), ctx3.generator(2)
    assert all(bruhat_leq(ctx3.e, x) for x in ctx3)
    assert bruhat_leq(s1, s1 * s2)
    assert not bruhat_leq(s1, s2)


@pytest.mark.parametrize("n", range(2, 5))
def test_bruhat_matches_subword_oracle(n):
    ctx = CoxeterContext.of(n)
    for y in ctx:
        below = {from_word(ctx, w) for w in subword_products(y.word)}
        for x in ctx:
            assert bruhat_leq(x, y) == (x in below)


@pytest.mark.parametrize("n", range(2, 5))
def test_bruhat_partial_order(n):
    ctx = CoxeterContext.of(n)
    els = list(ctx)
    for x in els:
        assert bruhat_leq(ctx.e, x) and bruhat_leq(x, ctx.w0)
        for y in els:
            if bruhat_leq(x, y) and bruhat_leq(y, x):
                assert x == y
            if bruhat_leq(x, y) and x != y:
                assert x.length < y.length


def test_parabolic_examples():
    ctx = CoxeterContext.of(3)
    members, top = parabolic(ctx, {1})
    assert members == [ctx.e, ctx.generator(1)] and top == ctx.generator(1)
    members, top = parabolic(CoxeterContext.of(6), {1, 2, 3, 4})
    assert len(members) == 120 and top.length == 10
    members, top = parabolic(ctx, set())
    assert members == [ctx.e] and top == ctx.e


def test_theorem1_map_examples():
    ctx = CoxeterContext.of(4)
    assert theorem1_map(ctx, ctx.e, ctx.gens) == ctx.e
    assert theorem1_map(ctx, ctx.e, ()) == ctx.w0
    c6 = CoxeterContext.of(6)
    y = theorem1_map(c6, W(6, "1,4"), {1, 2, 3, 4})
    # independent route: multiply the permutations by hand
    w0_i = Element((5, 4, 3, 2, 1, 6))
    x = Element((2, 1, 3, 5, 4, 6))
    assert y == Element(tuple(x.perm[w0_i.perm[c6.w0.perm[k] - 1] - 1] for k in range(6)))
    assert y.length == 15 - 10 + 2


def test_theorem1_map_rejects_outside_parabolic():
    with pytest.raises(WordError):
        theorem1_map(CoxeterContext.of(4), W(4, "3"), {1, 2})


@pytest.mark.parametrize("n", range(1, 5))
def test_theorem1_length_identity_exhaustive(n):
    ctx = CoxeterContext.of(n)
    for r in range(len(ctx.gens) + 1):
        for subset in itertools.combinations(ctx.gens, r):
            members, top = parabolic(ctx, subset)
            for x in members:
                y = theorem1_map(ctx, x, subset)
                assert y.length == ctx.w0.length - top.length + x.length


def telephone(n):
    a, b = 1, 1
    for k in range(2, n + 1):
        a, b = b, b + (k - 1) * a
    return b


def test_involution_examples(ctx3):
    assert involutions(ctx3) == [ctx3.e, ctx3.generator(1), ctx3.generator(2), ctx3.w0]
    assert len(involutions(CoxeterContext.of(6))) == 76


@pytest.mark.parametrize("n", range(1, 8))
def test_involution_counts(n):
    assert len(involutions(CoxeterContext.of(n))) == telephone(n)
    assert [telephone(k) for k in range(1, 7)] == [1, 2, 4, 10, 26, 76]


def test_diagram_automorphism_examples():
    c6 = CoxeterContext.of(6)
    img = diagram_automorphism(c6, W(6, "1,2,1,5"))
    assert img == W(6, "5,4,5,1") == W(6, "1,4,5,4")
    assert diagram_automorphism(c6, c6.e) == c6.e
    c3 = CoxeterContext.of(3)
    assert diagram_automorphism(c3, c3.w0) == c3.w0


@pytest.mark.parametrize("n", range(1, 5))
def test_diagram_automorphism_is_involutive_automorphism(n):
    ctx = CoxeterContext.of(n)
    f = {x: diagram_automorphism(ctx, x) for x in ctx}
    for x in ctx:
        assert f[f[x]] == x
        assert f[x].length == x.length
        for y in ctx:
            assert f[x * y] == f[x] * f[y]
    # conjugation by w0, computed independently
    assert all(f[x] == ctx.w0 * x * ctx.w0 for x in ctx)


def test_rsk_examples():
    c3 = CoxeterContext.of(3)
    assert rsk_shape(c3.e) == (3,)
    assert rsk_shape(c3.w0) == (1, 1, 1)
    assert rsk_shape(c3.generator(1)) == (2, 1)
    assert rsk(Element((2, 1, 3))) == (((1, 3), (2,)), ((1, 3), (2,)))


def test_rsk_is_bijection_and_inverse_swaps():
    ctx = CoxeterContext.of(5)
    pairs = {rsk(x) for x in ctx}
    assert len(pairs) == 120
    for x in ctx:
        P, Q = rsk(x)
        assert rsk(x.inverse()) == (Q, P)


def test_embed_restrict():
    c6, c5 = CoxeterContext.of(6), CoxeterContext.of(5)
    x = W(5, "1,4")
    assert embed(c6, x, 1) == W(6, "2,5")
    assert restrict(c5, W(6, "2,5"), 1) == x
    with pytest.raises(WordError):
        restrict(c5, W(6, "1"), 1)
