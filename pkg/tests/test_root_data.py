from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yforge.exact_core import QMat, commutator
from yforge.root_data import (
    SignedPerm,
    datum,
    defining_root_vectors,
    extended_stabilizer_equal,
    is_nonsingular,
    longest_word,
    normal_ordering,
    reduced_words,
    shifted_action,
    weight_is_nonsingular,
)

TYPES = [("gl", 2), ("gl", 3), ("sp", 1), ("sp", 2), ("so", 2), ("so", 3)]


def test_gl2_data():
    d = datum("gl", 2, -1, 2)
    assert d.rho == (F(1, 2), F(-1, 2))
    assert d.kappa == (0, 0)
    assert d.positive_roots == ((1, -1),)


def test_sp2_data():
    d = datum("sp", 1, -1, 2)
    assert d.rho == (F(-1),)
    assert d.kappa == (F(-1),)
    assert d.positive_roots == ((2,),)


def test_so2_has_rank_zero():
    d = datum("so", 1, -1, 2)
    assert d.positive_roots == ()
    assert d.rank == 0


def test_shifted_action_examples():
    d = datum("gl", 2)
    a, b = F(3, 5), F(-2, 7)
    assert shifted_action(d, SignedPerm.identity(2), (a, b)) == (a, b)
    assert shifted_action(d, SignedPerm((2, 1)), (a, b)) == (b - 1, a + 1)
    sp = datum("sp", 1)
    c = F(4, 3)
    assert shifted_action(sp, SignedPerm((-1,)), (c,)) == (-c + 2,)


def test_nonsingularity_examples():
    d = datum("gl", 2)
    assert weight_is_nonsingular(d, (0, 0))
    assert not weight_is_nonsingular(d, (0, 2))
    assert is_nonsingular(datum("so", 1, -1, 2), (F(-7),))


def test_normal_orderings():
    assert normal_ordering(datum("gl", 2), (1,)) == [(1, -1)]
    assert normal_ordering(datum("gl", 3), (1, 2, 1)) == [(1, -1, 0), (1, 0, -1), (0, 1, -1)]
    assert normal_ordering(datum("sp", 1), (1,)) == [(2,)]
    with pytest.raises(ValueError):
        normal_ordering(datum("gl", 3), (1, 1))


def test_longest_words():
    assert longest_word(datum("gl", 2)) == (1,)
    assert longest_word(datum("gl", 3)) == (1, 2, 1)
    assert len(longest_word(datum("sp", 2))) == 4
    assert set(reduced_words(datum("gl", 3))) == {(1, 2, 1), (2, 1, 2)}


def test_extended_stabilizer():
    assert extended_stabilizer_equal(datum("gl", 2), (0, 0))
    so2 = datum("so", 1, -1, 2)
    assert not extended_stabilizer_equal(so2, (F(0),))
    assert extended_stabilizer_equal(so2, (F(1, 3),))


def test_root_vector_examples():
    d = datum("gl", 2)
    e, f, h = defining_root_vectors(d, (1, -1))
    assert e == QMat.unit(2, 2, 0, 1) and f == QMat.unit(2, 2, 1, 0)
    assert h == QMat.diag([1, -1])
    sp = datum("sp", 1)
    e, f, h = sp.root_vectors((2,))
    assert e == {(-1, 1): F(1, 2)} and f == {(1, -1): F(1, 2)} and h == {(-1, -1): F(1)}
    gl3 = datum("gl", 3)
    e13, _, _ = defining_root_vectors(gl3, (1, 0, -1))
    e12, _, _ = defining_root_vectors(gl3, (1, -1, 0))
    e23, _, _ = defining_root_vectors(gl3, (0, 1, -1))
    assert e13 == commutator(e12, e23)


@pytest.mark.parametrize("tag,m", TYPES)
def test_sl2_triples(tag, m):
    d = datum(tag, m)
    for alpha in d.positive_roots:
        e, f, h = defining_root_vectors(d, alpha)
        assert commutator(e, f) == h
        assert commutator(h, e) == e.scale(2)
        assert commutator(h, f) == f.scale(-2)


@pytest.mark.parametrize("tag,m", TYPES)
def test_weyl_group_orders(tag, m):
    d = datum(tag, m)
    expected = {("gl", 2): 2, ("gl", 3): 6, ("sp", 1): 2, ("sp", 2): 8, ("so", 2): 4, ("so", 3): 24}
    assert len(d.weyl_group()) == expected[(tag, m)]


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=2, max_size=2))
@settings(max_examples=30, deadline=None)
def test_shifted_action_is_a_group_action(lam):
    d = datum("sp", 2)
    for g in d.weyl_group():
        for h in d.weyl_group():
            assert shifted_action(d, g * h, lam) == shifted_action(d, g, shifted_action(d, h, lam))
