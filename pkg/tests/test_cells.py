import itertools

import pytest

from cellkit.cells import (
    _brute_a,
    _exact_a,
    a_function,
    a_value_from_shape,
    duflo_set,
    kl_right_mul_gen,
    left_cells,
    preorder_from_edges,
    right_preorder,
    validate_fast_mode,
)
from cellkit.coxeter import involutions, rsk
from cellkit.errors import UserError
from cellkit.hecke import structure_constants
from cellkit.laurent import ONE


def words(cells):
    return [sorted(x.word_str for x in c) for c in cells]


def test_right_cells_small(tables):
    R2 = right_preorder(tables(2))
    assert words(R2.cells()) == [[""], ["1"]]
    R3 = right_preorder(tables(3))
    assert sorted(words(R3.cells())) == sorted([[""], ["1", "1,2"], ["2", "2,1"], ["1,2,1"]])
    ctx = R3.ctx
    assert all(R3.leq(ctx.e, y) for y in ctx)


def test_left_cells_small(tables):
    L3 = left_cells(tables(3))
    assert sorted(words(L3.cells())) == sorted([[""], ["1", "2,1"], ["1,2", "2"], ["1,2,1"]])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_generator_mul_matches_generic_product(n, tables):
    T = tables(n)
    ctx = T.ctx
    for x in ctx:
        for s in ctx.gens:
            fast = kl_right_mul_gen(T, {ctx.idx(x): ONE}, s)
            generic = structure_constants(T, x, ctx.generator(s))
            assert {ctx.elements[i]: p for i, p in fast.items()} == generic


@pytest.mark.parametrize("n", [2, 3])
def test_generator_edges_match_all_kl_edges(n, tables):
    T = tables(n)
    ctx = T.ctx
    full = [set() for _ in ctx.elements]
    for x, z in itertools.product(ctx, repeat=2):
        full[ctx.idx(x)].update(ctx.idx(y) for y in structure_constants(T, x, z))
    brute = preorder_from_edges(ctx, full)
    fast = right_preorder(T)
    assert brute.cell_id == fast.cell_id
    assert brute.order == fast.order


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cell_order_is_partial_order(n, tables):
    R = right_preorder(tables(n))
    ids = range(R.num_cells)
    for i in ids:
        assert (i, i) in R.order
        for j in ids:
            if i != j and (i, j) in R.order:
                assert (j, i) not in R.order
                for k in ids:
                    if (j, k) in R.order:
                        assert (i, k) in R.order


@pytest.mark.parametrize("n, count", [(2, 2), (3, 4), (4, 10), (5, 26), (6, 76)])
def test_left_cell_census(n, count, tables):
    T = tables(n)
    L = left_cells(T)
    assert L.num_cells == count == len(involutions(T.ctx))
    for cell in L.cells():
        assert sum(x.is_involution() for x in cell) == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_left_cells_are_recording_tableau_fibres(n, tables):
    L = left_cells(tables(n))
    ctx = L.ctx
    for x, y in itertools.combinations(ctx.elements, 2):
        if L.same_cell(x, y):
            assert rsk(x)[1] == rsk(y)[1]
    assert L.num_cells == len({rsk(x)[1] for x in ctx})


def test_a_function_s3(tables):
    afn = a_function(tables(3), "exact")
    assert [afn[x] for x in tables(3).ctx] == [0, 1, 1, 1, 1, 3]


@pytest.mark.parametrize("n", [2, 3])
def test_exact_a_matches_definition(n, tables):
    T = tables(n)
    assert _exact_a(T) == _brute_a(T)


@pytest.mark.slow
def test_exact_a_matches_definition_s4(tables):
    T = tables(4)
    assert _exact_a(T) == _brute_a(T)


def test_fast_mode_examples():
    assert a_value_from_shape((3,)) == 0
    assert a_value_from_shape((2, 1)) == 1
    assert a_value_from_shape((1, 1, 1)) == 3
    assert a_value_from_shape((3, 2, 1)) == 4


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_fast_matches_exact(n, tables):
    T = tables(n)
    assert a_function(T, "exact").a == a_function(T, "fast").a
    assert validate_fast_mode(4)


def test_exact_mode_gated_at_rank6(tables):
    with pytest.raises(UserError):
        a_function(tables(6), "exact")


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_a_constant_on_right_cells_and_bounded(n, tables):
    T = tables(n)
    afn = a_function(T, "exact")
    R = right_preorder(T)
    for cell in R.cells():
        assert len({afn[x] for x in cell}) == 1
    assert afn[T.ctx.e] == 0
    for x in T.ctx:
        assert afn[x] <= T.h(T.ctx.e, x).mindeg


def test_duflo_examples(tables):
    for n, expected in [(2, {"", "1"}), (3, {"", "1", "2", "1,2,1"})]:
        T = tables(n)
        assert {d.word_str for d in duflo_set(T, a_function(T))} == expected


@pytest.mark.parametrize("n, mode", [(2, "exact"), (3, "exact"), (4, "exact"), (5, "exact"), (6, "fast")])
def test_duflo_one_per_right_cell_and_involutions(n, mode, tables):
    T = tables(n)
    afn = a_function(T, mode)
    R = right_preorder(T)
    duflo = duflo_set(T, afn, R)
    assert set(duflo) == set(involutions(T.ctx))
    assert sorted(R.cell_id[d] for d in duflo) == list(range(R.num_cells))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_duflo_degree_statement(n, tables):
    T = tables(n)
    afn = a_function(T)
    R = right_preorder(T)
    duflo = set(duflo_set(T, afn, R))
    for cell in R.cells():
        (d,) = [x for x in cell if x in duflo]
        a = afn[d]
        for x in cell:
            h = T.h(T.ctx.e, x)
            assert h.mindeg >= a
            assert (h.mindeg == a) == (x == d)
        assert T.h(T.ctx.e, d).coeff(a) == 1


def test_duflo_missing_afn_entry(tables):
    T = tables(3)
    afn = a_function(T)
    del afn.a[T.ctx.w0]
    with pytest.raises(UserError):
        duflo_set(T, afn)
