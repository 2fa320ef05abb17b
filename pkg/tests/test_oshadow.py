import pytest

from cellkit.cells import a_function, right_preorder
from cellkit.coxeter import parse_word
from cellkit.errors import InconsistencyError
from cellkit.laurent import ONE, V, V_INV
from cellkit.oshadow import GradedCharacter, quasi_simple, theta_simple_character, verma_character


def test_verma_examples(tables):
    T2 = tables(2)
    e, s = T2.ctx.e, T2.ctx.generator(1)
    assert verma_character(T2, e).mult == {e: ONE, s: V}
    T3 = tables(3)
    assert verma_character(T3, T3.ctx.w0).mult == {T3.ctx.w0: ONE}
    assert verma_character(T3, T3.ctx.e).mult == {x: V**x.length for x in T3.ctx}


def test_theta_examples(tables):
    T2 = tables(2)
    e, s = T2.ctx.e, T2.ctx.generator(1)
    assert theta_simple_character(T2, s).mult == {e: ONE, s: V + V_INV}
    for n in (2, 3, 4):
        T = tables(n)
        assert theta_simple_character(T, T.ctx.e).mult == {T.ctx.e: ONE}


def test_theta_support_s3(tables):
    T = tables(3)
    R = right_preorder(T)
    x = parse_word(T.ctx, "1")
    ch = theta_simple_character(T, x)
    assert all(R.leq(z, x.inverse()) for z in ch.mult)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_theta_invariants(n, tables):
    T = tables(n)
    R = right_preorder(T)
    afn = a_function(T)
    for x in T.ctx:
        ch = theta_simple_character(T, x)
        a = afn[x.inverse()]
        assert ch.is_symmetric()
        assert ch.is_nonnegative()
        assert ch.max_degree() <= a and ch.min_degree() >= -a
        assert all(R.leq(z, x.inverse()) for z in ch.mult)
        # the top degree a(x^-1) is reached
        assert ch.max_degree() == a


@pytest.mark.parametrize("n", [2, 3, 4])
def test_verma_characters_nonnegative(n, tables):
    T = tables(n)
    for y in T.ctx:
        assert verma_character(T, y).is_nonnegative()


def test_quasi_simple_examples(tables):
    T2 = tables(2)
    s = T2.ctx.generator(1)
    d, report = quasi_simple(T2, s)
    assert d == s and report.a_value == 1 and report.ok
    for n in (2, 3):
        T = tables(n)
        assert quasi_simple(T, T.ctx.e)[0] == T.ctx.e
    T3 = tables(3)
    d, _ = quasi_simple(T3, parse_word(T3.ctx, "1,2"))
    assert d == parse_word(T3.ctx, "2")


@pytest.mark.parametrize("n", [3, 4])
def test_quasi_simple_all(n, tables):
    T = tables(n)
    R = right_preorder(T)
    afn = a_function(T)
    for x in T.ctx:
        d, report = quasi_simple(T, x, R, afn)
        assert d.is_involution() and R.same_cell(d, x.inverse())
        assert [name for name, ok, _ in report.checks if not ok] == []


def test_quasi_simple_detects_bad_character(tables):
    T = tables(2)
    s = T.ctx.generator(1)
    bogus = GradedCharacter({T.ctx.e: ONE, s: V**2 + V_INV})
    with pytest.raises(InconsistencyError) as info:
        quasi_simple(T, s, character=bogus)
    failed = {name for name, ok, _ in info.value.report.checks if not ok}
    assert failed == {"max_degree", "self_dual"}
