"""The Fock space P(C^m (x) C^n): polynomial (theta=1) or Grassmann (theta=-1).

A monomial is an exponent tuple of length m*n; generator x_{ai} sits at
index (a-1)*n + (i-1), which is also the fixed global order used for every
Grassmann sign.  Vectors are sparse dicts monomial -> Fraction.

Operators are linear combinations of words in the generators x_k and
derivations d_k, stored as lists ``(coeff, word)`` where ``word`` is a tuple
of ``("x" | "d", k)`` applied right to left.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb, factorial
from typing import Sequence

from .exact_core import ONE, ZERO, QMat, rat
from .root_data import RootDatum

Monomial = tuple
Vector = dict
Word = tuple
Terms = list


# ---------------------------------------------------------------------------
# Dual group data


@dataclass(frozen=True)
class GdForm:
    """The dual algebra gl_n, so_n or sp_n with its bilinear form data."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("gl", "so", "sp"):
            raise ValueError(f"unknown dual kind {self.kind!r}")
        if self.kind == "sp" and self.n % 2:
            raise ValueError("sp_n requires n even")

    @property
    def twisted(self) -> bool:
        return self.kind != "gl"

    @property
    def sign(self) -> int:
        """The upper/lower sign choice: +1 for so_n, -1 for sp_n."""
        return 1 if self.kind == "so" else -1

    def theta_i(self, i: int) -> int:
        if self.kind == "sp":
            return 1 if i % 2 else -1
        return 1

    def bar(self, i: int) -> int:
        n = self.n
        if i % 2 == 0:
            return i - 1
        if i < n:
            return i + 1
        return n

    @property
    def prec_order(self) -> tuple[int, ...]:
        n = self.n
        odd = list(range(1, n + 1, 2))
        even = list(range(2, n + 1, 2))
        if n % 2 == 0:
            return tuple(odd + even[::-1])
        return tuple(odd[:-1] + [n] + even[::-1])

    def prec_pos(self, i: int) -> int:
        return self.prec_order.index(i)

    def precedes(self, i: int, j: int) -> bool:
        return self.prec_pos(i) < self.prec_pos(j)

    @property
    def l(self) -> int:
        return self.n // 2


def dual_form(tag: str, theta: int, n: int) -> GdForm:
    """The dual Lie algebra paired with gl_m, sp_2m or so_2m on P(U)."""
    if tag == "gl":
        return GdForm("gl", n)
    if (tag == "sp" and theta == 1) or (tag == "so" and theta == -1):
        return GdForm("so", n)
    return GdForm("sp", n)


# ---------------------------------------------------------------------------
# Generators acting on monomials


def _apply_gen(theta: int, op: str, k: int, mono: Monomial):
    """Return (coeff, monomial) or None when the result vanishes."""
    e = mono[k]
    if theta == -1:
        sign = -1 if sum(mono[:k]) % 2 else 1
        if op == "x":
            if e:
                return None
            return sign, mono[:k] + (1,) + mono[k + 1:]
        if not e:
            return None
        return sign, mono[:k] + (0,) + mono[k + 1:]
    if op == "x":
        return 1, mono[:k] + (e + 1,) + mono[k + 1:]
    if not e:
        return None
    return e, mono[:k] + (e - 1,) + mono[k + 1:]


def apply_word(theta: int, word: Word, mono: Monomial):
    coeff = 1
    for op, k in reversed(word):
        r = _apply_gen(theta, op, k, mono)
        if r is None:
            return None
        c, mono = r
        coeff *= c
    return coeff, mono


def apply_terms(theta: int, terms: Terms, vec: Vector) -> Vector:
    out: dict = {}
    for mono, v in vec.items():
        if not v:
            continue
        for c, word in terms:
            r = apply_word(theta, word, mono)
            if r is None:
                continue
            s, m2 = r
            out[m2] = out.get(m2, ZERO) + c * s * v
    return {k: v for k, v in out.items() if v}


def add_vectors(*vecs: Vector, coeffs: Sequence | None = None) -> Vector:
    out: dict = {}
    coeffs = coeffs or [ONE] * len(vecs)
    for c, vec in zip(coeffs, vecs):
        for k, v in vec.items():
            out[k] = out.get(k, ZERO) + c * v
    return {k: v for k, v in out.items() if v}


def scale_vector(c, vec: Vector) -> Vector:
    c = rat(c)
    return {k: c * v for k, v in vec.items()} if c else {}


# ---------------------------------------------------------------------------
# Components


def _block_basis(theta: int, n: int, deg: int) -> list[tuple]:
    """Exponent tuples of one block in descending lexicographic order."""
    if deg < 0:
        return []
    if theta == -1:
        if deg > n:
            return []
        out = []
        for idx in combinations(range(n), deg):
            out.append(tuple(1 if i in idx else 0 for i in range(n)))
        return sorted(out, reverse=True)
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for e in range(left, -1, -1):
            rec(prefix + [e], left - e, slots - 1)

    rec([], deg, n)
    return out


@dataclass(frozen=True)
class FockComponent:
    theta: int
    m: int
    n: int
    nu: tuple
    basis: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def index(self) -> dict:
        return _index_of(self.basis)

    def vector(self, coords: Sequence) -> Vector:
        return {b: rat(c) for b, c in zip(self.basis, coords) if c}

    def coords(self, vec: Vector) -> tuple:
        idx = self.index
        out = [ZERO] * len(self.basis)
        for mono, v in vec.items():
            if mono not in idx:
                raise ValueError(f"monomial {mono} is not in component {self.nu}")
            out[idx[mono]] = v
        return tuple(out)

    def unit(self, mono: Monomial) -> Vector:
        return {mono: ONE}


@lru_cache(maxsize=None)
def _index_of(basis: tuple) -> dict:
    return {b: i for i, b in enumerate(basis)}


@lru_cache(maxsize=4096)
def component_basis(theta: int, m: int, n: int, nu: tuple) -> FockComponent:
    nu = tuple(int(v) for v in nu)
    if len(nu) != m:
        raise ValueError("multidegree must have m entries")
    blocks = [_block_basis(theta, n, d) for d in nu]
    basis = tuple(sum(parts, ()) for parts in product(*blocks)) if all(blocks) else ()
    return FockComponent(theta, m, n, nu, basis)


def component_dimension(theta: int, n: int, nu: Sequence[int]) -> int:
    out = 1
    for d in nu:
        if d < 0:
            return 0
        out *= comb(n, d) if theta == -1 else comb(n + d - 1, d)
    return out


def valid_degree(theta: int, n: int, nu: Sequence) -> bool:
    for d in nu:
        d = rat(d)
        if d.denominator != 1 or d < 0 or (theta == -1 and d > n):
            return False
    return True


def block_degrees(m: int, n: int, mono: Monomial) -> tuple:
    return tuple(sum(mono[a * n:(a + 1) * n]) for a in range(m))


def gen_index(n: int, a: int, i: int) -> int:
    """Global index of x_{ai}, with a and i 1-based."""
    return (a - 1) * n + (i - 1)


def multiply_generator(theta: int, n: int, gen: tuple, v: Vector) -> Vector:
    """Left multiplication by x_{ai} (gen=("x", a, i)) or derivation d_{ai}."""
    op, a, i = gen
    return apply_terms(theta, [(ONE, ((op, gen_index(n, a, i)),))], v)


def operator_matrix(theta: int, m: int, n: int, terms: Terms, nu: tuple) -> tuple[tuple, QMat]:
    """Matrix of a degree-homogeneous operator from component nu.

    Returns (target multidegree, matrix).  The target is computed from the
    net degree shift of the words in ``terms``.
    """
    src = component_basis(theta, m, n, tuple(nu))
    tgt_nu = tuple(a + s for a, s in zip(src.nu, terms_shift(m, n, terms)))
    if not valid_degree(theta, n, tgt_nu):
        return tgt_nu, QMat.zeros(0, src.dimension)
    tgt = component_basis(theta, m, n, tgt_nu)
    idx = tgt.index
    cols = []
    for mono in src.basis:
        out = apply_terms(theta, terms, {mono: ONE})
        col = [ZERO] * tgt.dimension
        for mm, c in out.items():
            col[idx[mm]] = c
        cols.append(col)
    return tgt_nu, QMat.from_columns(cols, tgt.dimension)


def terms_shift(m: int, n: int, terms: Terms) -> tuple:
    shifts = set()
    for c, word in terms:
        if not c:
            continue
        s = [0] * m
        for op, k in word:
            s[k // n] += 1 if op == "x" else -1
        shifts.add(tuple(s))
    if len(shifts) > 1:
        raise ValueError("operator is not homogeneous in the multidegree")
    return shifts.pop() if shifts else (0,) * m


def basis_matrix(theta: int, terms: Terms, basis: Sequence[Monomial]) -> QMat:
    """Matrix of ``terms`` on the span of an invariant list of monomials."""
    idx = {b: i for i, b in enumerate(basis)}
    cols = []
    for mono in basis:
        out = apply_terms(theta, terms, {mono: ONE})
        col = [ZERO] * len(basis)
        for mm, c in out.items():
            if mm not in idx:
                raise ValueError("operator leaves the given span")
            col[idx[mm]] = c
        cols.append(col)
    return QMat.from_columns(cols, len(basis))


def basis_up_to(theta: int, m: int, n: int, max_total: int) -> list[Monomial]:
    """All monomials of total degree <= max_total (graded, then descending lex)."""
    out = []
    for total in range(max_total + 1):
        for nu in _compositions(total, m):
            if theta == -1 and any(d > n for d in nu):
                continue
            out.extend(component_basis(theta, m, n, nu).basis)
    return out


def full_basis(theta: int, m: int, n: int) -> list[Monomial]:
    if theta != -1:
        raise ValueError("the polynomial Fock space is infinite dimensional")
    return basis_up_to(-1, m, n, m * n)


def _compositions(total: int, parts: int) -> list[tuple]:
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


# ---------------------------------------------------------------------------
# The Howe map zeta


def gl_unit_terms(n: int, a: int, b: int) -> Terms:
    """zeta(E_ab) = sum_i x_{ai} d_{bi} for gl_m."""
    return [(ONE, (("x", gen_index(n, a, i)), ("d", gen_index(n, b, i)))) for i in range(1, n + 1)]


def _p_gen(theta: int, form: GdForm, n: int, a: int, i: int) -> tuple:
    """(coeff, generator) for p_{ai}."""
    if a < 0:
        return ONE, ("x", gen_index(n, -a, i))
    return Fraction(-theta * form.theta_i(i)), ("d", gen_index(n, a, form.bar(i)))


def _q_gen(theta: int, form: GdForm, n: int, a: int, i: int) -> tuple:
    """(coeff, generator) for q_{ai}."""
    if a < 0:
        return ONE, ("d", gen_index(n, -a, i))
    return Fraction(form.theta_i(i)), ("x", gen_index(n, a, form.bar(i)))


def pq_terms(theta: int, form: GdForm, n: int, a: int, b: int, order: str = "qp") -> Terms:
    """sum_i q_{ai} p_{bi} (order "qp") or a single index family p_{ai} q_{bj}."""
    out = []
    for i in range(1, n + 1):
        cq, gq = _q_gen(theta, form, n, a, i)
        cp, gp = _p_gen(theta, form, n, b, i)
        out.append((cq * cp, (gq, gp)))
    return out


def p_gen(theta: int, form: GdForm, n: int, a: int, i: int) -> tuple:
    return _p_gen(theta, form, n, a, i)


def q_gen(theta: int, form: GdForm, n: int, a: int, i: int) -> tuple:
    return _q_gen(theta, form, n, a, i)


def zeta_pair_terms(d: RootDatum, a: int, b: int) -> Terms:
    """zeta of a single basis element E_ab (gl) or F_ab (sp/so)."""
    n, theta = d.n, d.theta
    if d.tag == "gl":
        return gl_unit_terms(n, a, b)
    form = dual_form(d.tag, theta, n)
    out: Terms = []
    if a == b:
        out.append((Fraction(theta * n, 2), ()))
    for c, word in pq_terms(theta, form, n, a, b):
        out.append((-theta * c, word))
    return out


def zeta_terms(d: RootDatum, X: dict) -> Terms:
    out: Terms = []
    for (a, b), c in X.items():
        if c:
            out.extend((c * cc, w) for cc, w in zeta_pair_terms(d, a, b))
    return _collect(out)


def _collect(terms: Terms) -> Terms:
    acc: dict = {}
    for c, w in terms:
        acc[w] = acc.get(w, ZERO) + c
    return [(c, w) for w, c in acc.items() if c]


def zeta_matrix(d: RootDatum, X: dict, nu: Sequence) -> tuple[tuple, QMat]:
    """Matrix of zeta(X) restricted to the degree-nu component."""
    return operator_matrix(d.theta, d.m, d.n, zeta_terms(d, X), tuple(nu))


def zeta_weight(d: RootDatum, nu: Sequence) -> tuple:
    """Labels of the zeta-weight kappa + nu of the degree-nu component."""
    return tuple(k + v for k, v in zip(d.kappa, nu))


def inner_gram(theta: int, m: int, n: int, nu: Sequence) -> QMat:
    comp = component_basis(theta, m, n, tuple(nu))
    if theta == -1:
        return QMat.identity(comp.dimension)
    return QMat.diag([form_norm(theta, mono) for mono in comp.basis])


def form_norm(theta: int, mono: Monomial) -> int:
    if theta == -1:
        return 1
    out = 1
    for e in mono:
        out *= factorial(e)
    return out


def highest_monomial(theta: int, twisted: bool, n: int, nu: Sequence, form: GdForm | None = None) -> Monomial:
    """Monomial for phi_{nu_1} x ... x phi_{nu_m} (gl) or the psi analogue."""
    parts = []
    for k in nu:
        k = int(k)
        block = [0] * n
        if theta == 1:
            block[0] = k
        else:
            if k > n:
                raise ValueError("block degree exceeds n")
            if twisted:
                order = (form or GdForm("so", n)).prec_order
                chosen = order[:k]
            else:
                chosen = range(1, k + 1)
            for i in chosen:
                block[i - 1] = 1
        parts.extend(block)
    return tuple(parts)


def chevalley_involution(d: RootDatum, X: dict) -> dict:
    """epsilon on Lie elements: E_ab -> E_ba (gl), F_ab -> F_ba or sgn(ab) F_ba."""
    out: dict = {}
    for (a, b), c in X.items():
        s = 1
        if d.tag != "gl" and d.theta == 1:
            s = (1 if a > 0 else -1) * (1 if b > 0 else -1)
        if d.tag == "gl":
            key, sg = (b, a), 1
        else:
            key, sg = d.canonical(b, a)
        if sg:
            out[key] = out.get(key, ZERO) + c * s * sg
    return {k: v for k, v in out.items() if v}


def epsilon_adjoint_check(d: RootDatum, X: dict, nu: Sequence) -> bool:
    """<zeta(X) u, v> = <u, zeta(eps X) v> on the component of degree nu."""
    theta, m, n = d.theta, d.m, d.n
    nu = tuple(nu)
    tgt, zx = zeta_matrix(d, X, nu)
    if not valid_degree(theta, n, tgt):
        return True
    back, ze = zeta_matrix(d, chevalley_involution(d, X), tgt)
    if back != nu:
        raise ValueError("adjoint does not return to the source degree")
    g_src = inner_gram(theta, m, n, nu)
    g_tgt = inner_gram(theta, m, n, tgt)
    return zx.T @ g_tgt == g_src @ ze


def h0_relation_holds(theta: int, m: int, n: int, nu: Sequence, k: int, l: int) -> bool:
    """d_k x_l - theta x_l d_k = delta_kl on a component."""
    comp = component_basis(theta, m, n, tuple(nu))
    for mono in comp.basis:
        lhs = apply_terms(
            theta,
            [(ONE, (("d", k), ("x", l))), (Fraction(-theta), (("x", l), ("d", k)))],
            {mono: ONE},
        )
        rhs = {mono: ONE} if k == l else {}
        if lhs != rhs:
            return False
    return True
