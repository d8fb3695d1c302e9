from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yforge.exact_core import QMat, commutator
from yforge.fock import (
    apply_terms,
    component_basis,
    epsilon_adjoint_check,
    h0_relation_holds,
    highest_monomial,
    inner_gram,
    multiply_generator,
    valid_degree,
    zeta_matrix,
    zeta_terms,
    zeta_weight,
)
from yforge.root_data import datum

SETTINGS = [
    ("gl", 2, -1, 2),
    ("gl", 2, 1, 1),
    ("gl", 3, -1, 1),
    ("sp", 1, -1, 2),
    ("sp", 2, -1, 2),
    ("sp", 1, 1, 2),
    ("so", 1, -1, 3),
    ("so", 2, -1, 2),
    ("so", 2, 1, 2),
]


def test_component_examples():
    assert component_basis(-1, 1, 2, (1,)).basis == ((1, 0), (0, 1))
    assert component_basis(-1, 2, 2, (1, 1)).dimension == 4
    assert component_basis(1, 1, 2, (2,)).dimension == 3
    assert component_basis(-1, 1, 2, (3,)).dimension == 0


def test_generator_examples():
    assert multiply_generator(-1, 1, ("d", 2, 1), {(1, 1): F(1)}) == {(1, 0): F(-1)}
    assert multiply_generator(-1, 1, ("x", 1, 1), {(1, 0): F(1)}) == {}
    assert multiply_generator(1, 1, ("d", 1, 1), {(2,): F(1)}) == {(1,): F(2)}


def test_zeta_diagonal_actions():
    gl = datum("gl", 2, -1, 2)
    nu = (2, 1)
    for a in (1, 2):
        _, m = zeta_matrix(gl, {(a, a): F(1)}, nu)
        assert m == QMat.scalar(m.nrows, nu[a - 1])
    for theta in (1, -1):
        sp = datum("sp", 2, theta, 2)
        nu = (1, 0)
        for a in (1, 2):
            _, m = zeta_matrix(sp, {(a, a): F(1)}, nu)
            assert m == QMat.scalar(m.nrows, F(theta * 2, 2) + nu[a - 1])


def test_zeta_gl_raising_example():
    d = datum("gl", 2, -1, 1)
    tgt, m = zeta_matrix(d, {(1, 2): F(1)}, (0, 1))
    assert tgt == (1, 0) and m == QMat([[1]])


def test_inner_gram_examples():
    assert inner_gram(-1, 2, 2, (1, 1)) == QMat.identity(4)
    g = inner_gram(1, 1, 2, (2,))
    assert g[0, 0] == 2
    assert inner_gram(-1, 1, 1, (2,)).shape == (0, 0)


def test_highest_monomial_examples():
    assert highest_monomial(-1, False, 2, (1, 1)) == (1, 0, 1, 0)
    assert highest_monomial(-1, True, 3, (2,)) == (1, 0, 1)
    assert highest_monomial(1, False, 2, (3,)) == (3, 0)


@pytest.mark.parametrize("tag,m,theta,n", SETTINGS)
def test_epsilon_adjointness(tag, m, theta, n):
    d = datum(tag, m, theta, n)
    for nu in _degrees(d):
        for pair in d.canonical_pairs():
            assert epsilon_adjoint_check(d, {pair: F(1)}, nu)


@pytest.mark.parametrize("tag,m,theta,n", SETTINGS)
def test_bracket_fidelity(tag, m, theta, n):
    d = datum(tag, m, theta, n)
    gens = [{p: F(1)} for p in d.canonical_pairs()]
    for nu in _degrees(d)[:3]:
        basis = component_basis(theta, m, n, nu).basis
        for X, Y in product(gens, repeat=2):
            br = d.decompose(commutator(d.lie_matrix(X), d.lie_matrix(Y)))
            tx, ty, tb = zeta_terms(d, X), zeta_terms(d, Y), zeta_terms(d, br)
            for mono in basis:
                v = {mono: F(1)}
                xy = apply_terms(theta, tx, apply_terms(theta, ty, v))
                yx = apply_terms(theta, ty, apply_terms(theta, tx, v))
                lhs = {k: xy.get(k, 0) - yx.get(k, 0) for k in set(xy) | set(yx)}
                lhs = {k: c for k, c in lhs.items() if c}
                assert lhs == apply_terms(theta, tb, v)


@pytest.mark.parametrize("tag,m,theta,n", SETTINGS)
def test_weight_bookkeeping(tag, m, theta, n):
    d = datum(tag, m, theta, n)
    for nu in _degrees(d):
        w = zeta_weight(d, nu)
        for j in range(m):
            unit = [0] * m
            unit[j] = 1
            _, mat = zeta_matrix(d, d.cartan_element(unit), nu)
            assert mat == QMat.scalar(mat.nrows, d.to_coords(w)[j])


@pytest.mark.parametrize("tag,m,theta,n", SETTINGS)
def test_distinct_degrees_have_distinct_weights(tag, m, theta, n):
    d = datum(tag, m, theta, n)
    degrees = _degrees(d)
    assert len({zeta_weight(d, nu) for nu in degrees}) == len(degrees)


@given(
    st.sampled_from([-1, 1]),
    st.integers(1, 2),
    st.integers(1, 3),
    st.data(),
)
@settings(max_examples=40, deadline=None)
def test_h0_relations_on_random_components(theta, m, n, data):
    top = n if theta == -1 else 2
    nu = tuple(data.draw(st.integers(0, top)) for _ in range(m))
    k = data.draw(st.integers(0, m * n - 1))
    l = data.draw(st.integers(0, m * n - 1))
    assert h0_relation_holds(theta, m, n, nu, k, l)


def _degrees(d):
    top = d.n if d.theta == -1 else 2
    out = [nu for nu in product(range(top + 1), repeat=d.m) if valid_degree(d.theta, d.n, nu)]
    return out
