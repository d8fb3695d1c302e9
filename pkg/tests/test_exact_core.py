from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yforge.exact_core import (
    Echelon,
    Poly,
    QMat,
    RatFn,
    RFMat,
    algebra_basis,
    burnside_dimension,
    column_space_basis,
    commutant_basis,
    intertwiner_space,
    left_inverse,
    mat_kernel,
    minimal_polynomial,
    quotient_maps,
    rat,
    rat_str,
    rational_roots,
    resolvent,
    rf_coeff_at_infinity,
)

small = st.fractions(min_value=-6, max_value=6, max_denominator=5)


def qmats(n, m=None):
    m = n if m is None else m
    return st.lists(st.lists(small, min_size=m, max_size=m), min_size=n, max_size=n).map(QMat)


def test_rat_coercion_and_strings():
    assert rat("3/4") == F(3, 4)
    assert rat(2) == F(2)
    assert rat_str(F(-3, 2)) == "-3/2"
    assert rat_str(F(2)) == "2/1"
    with pytest.raises(TypeError):
        rat(True)


def test_kernel_examples():
    assert len(mat_kernel(QMat.zeros(2, 2))) == 2
    assert mat_kernel(QMat.identity(3)) == []
    (k,) = mat_kernel(QMat([[1, 1], [2, 2]]))
    assert k.col(0) == (F(1), F(-1))


def test_burnside_examples():
    assert burnside_dimension([], 2) == 1
    units = [QMat.unit(2, 2, i, j) for i in range(2) for j in range(2)]
    assert burnside_dimension(units) == 4
    assert burnside_dimension([QMat.diag([1, 2])]) == 2


def test_commutant_examples():
    assert len(commutant_basis([QMat.identity(2)])) == 4
    units = [QMat.unit(2, 2, i, j) for i in range(2) for j in range(2)]
    assert commutant_basis(units) == [QMat.identity(2)]
    assert len(commutant_basis([QMat.diag([1, 2])])) == 2


def test_coeff_at_infinity_examples():
    t = F(3, 7)
    m = RFMat([QMat([[1]])], Poly.linear(t))
    assert rf_coeff_at_infinity(m, 1) == QMat([[1]])
    assert rf_coeff_at_infinity(m, 2) == QMat([[t]])
    assert rf_coeff_at_infinity(RFMat.constant(QMat([[1]])), 1) == QMat([[0]])


def test_rational_roots_examples():
    assert sorted(rational_roots(Poly.from_roots([1, -1]))) == [-1, 1]
    assert rational_roots(Poly.from_roots([F(1, 2), F(1, 2)])) == [F(1, 2), F(1, 2)]
    assert rational_roots(Poly((1, 0, 1))) == []


def test_ratfn_is_reduced():
    r = RatFn(Poly.from_roots([1, 2]), Poly.from_roots([2, 3]))
    assert r.num == Poly.linear(1) and r.den == Poly.linear(3)
    assert r.neg_x()(F(1)) == F(1, 2)


def test_resolvent_inverts():
    c = QMat([[1, 2], [0, 3]])
    R = resolvent(c)
    x0 = F(5, 3)
    assert R.evaluate(x0) @ (QMat.scalar(2, x0) + c) == QMat.identity(2)


def test_quotient_maps_split_kernel():
    kernel = [(1, -1, 0)]
    pi, iota = quotient_maps(kernel, 3)
    assert pi @ iota == QMat.identity(2)
    assert pi.apply(kernel[0]) == (0, 0)


def test_column_space_and_left_inverse():
    b = column_space_basis([(1, 1, 0), (2, 2, 0), (0, 0, 1)], 3)
    assert b.shape == (3, 2)
    assert left_inverse(b) @ b == QMat.identity(2)


def test_intertwiner_space_of_swap():
    a = QMat([[0, 1], [1, 0]])
    sols = intertwiner_space([(a, a)], 2, 2)
    assert len(sols) == 2


@given(qmats(3))
@settings(max_examples=30, deadline=None)
def test_kernel_vectors_are_annihilated(m):
    ks = mat_kernel(m)
    assert len(ks) == 3 - m.rank()
    for k in ks:
        assert (m @ k).is_zero()


@given(qmats(3))
@settings(max_examples=25, deadline=None)
def test_minimal_polynomial_annihilates(m):
    p = minimal_polynomial(m)
    acc = QMat.zeros(3, 3)
    power = QMat.identity(3)
    for c in p.coeffs:
        acc = acc + power.scale(c)
        power = power @ m
    assert acc.is_zero()
    assert p.is_monic


@given(qmats(2), qmats(2))
@settings(max_examples=25, deadline=None)
def test_commutant_elements_commute(a, b):
    for c in commutant_basis([a, b]):
        assert a @ c == c @ a and b @ c == c @ b
    assert len(algebra_basis([a, b], 2)) <= 4


@given(st.lists(small, min_size=1, max_size=6))
@settings(max_examples=40, deadline=None)
def test_rational_roots_recover_split_polynomials(roots):
    assert sorted(rational_roots(Poly.from_roots(roots))) == sorted(roots)


def test_echelon_first_nonzero_pivots():
    e = Echelon(3)
    assert e.add((0, 2, 4))
    assert not e.add((0, 1, 2))
    assert e.contains((0, 3, 6))
    assert e.null_space() == [(1, 0, 0), (0, 1, F(-1, 2))]
