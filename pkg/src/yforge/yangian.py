"""Yangian and twisted Yangian actions on tensor products of evaluation modules.

Every module stores its generator series as an n x n table of RFMat over one
shared monic denominator.  Relation checks multiply through by D(x) D(y) and
compare the resulting two-variable matrix polynomials coefficientwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .exact_core import (
    ONE,
    ZERO,
    Echelon,
    Poly,
    QMat,
    RatFn,
    RFMat,
    rat,
    resolvent,
)
from .fock import (
    GdForm,
    basis_matrix,
    component_basis,
    dual_form,
    full_basis,
    gen_index,
    gl_unit_terms,
    operator_matrix,
    p_gen,
    q_gen,
    zeta_terms,
)
from .root_data import datum

Table = list  # n x n list of RFMat


class RelationFailure(AssertionError):
    def __init__(self, relation: str, indices: tuple):
        super().__init__(f"{relation} fails at indices {indices}")
        self.relation = relation
        self.indices = indices


@dataclass(frozen=True)
class EvalFactor:
    """Phi^k_t (k >= 0) or its pullback Phi^{-k}_t through T(x) -> T^t(-x)."""

    k: int
    t: Fraction
    theta: int = -1

    def __post_init__(self):
        object.__setattr__(self, "t", rat(self.t))
        if self.theta not in (1, -1):
            raise ValueError("theta must be +1 or -1")


@dataclass
class TensorModule:
    form: GdForm
    factors: tuple
    dimension: int
    T: Table
    S: Table | None = None
    label: str = ""

    @property
    def n(self) -> int:
        return self.form.n

    def series(self, twisted: bool) -> Table:
        if twisted:
            if self.S is None:
                self.S = twisted_action(self.form, self)
            return self.S
        return self.T


# ---------------------------------------------------------------------------
# Evaluation modules


def _single_block_unit(theta: int, n: int, k: int, i: int, j: int) -> QMat:
    terms = [(ONE, (("x", i - 1), ("d", j - 1)))]
    return operator_matrix(theta, 1, n, terms, (k,))[1]


def _trivial_table(n: int, dim: int) -> Table:
    ident = QMat.identity(dim)
    zero = QMat.zeros(dim, dim)
    return [[RFMat.constant(ident if i == j else zero) for j in range(n)] for i in range(n)]


def eval_action(form: GdForm, factor: EvalFactor) -> tuple[int, Table]:
    """T_ij(x) = delta_ij + E_ij / (x + theta t) on Lambda^k or Sym^k of C^n."""
    n, k, theta = form.n, factor.k, factor.theta
    if k < 0:
        raise ValueError("use dual_eval_action for negative k")
    if theta == -1 and k > n:
        raise ValueError("exterior power degree exceeds n")
    dim = component_basis(theta, 1, n, (k,)).dimension
    if k == 0:
        return dim, _trivial_table(n, dim)
    den = Poly((theta * factor.t, 1))
    ident = QMat.identity(dim)
    table = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            e = _single_block_unit(theta, n, k, i, j)
            if i == j:
                num = [e + ident.scale(theta * factor.t), ident]
            else:
                num = [e]
            row.append(RFMat(num, den, (dim, dim)))
        table.append(row)
    return dim, table


def transpose_table(form: GdForm, table: Table) -> Table:
    """Entries theta_i theta_j X_{bar j, bar i}(x)."""
    n = form.n
    out = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            s = form.theta_i(i) * form.theta_i(j)
            e = table[form.bar(j) - 1][form.bar(i) - 1]
            row.append(e if s == 1 else -e)
        out.append(row)
    return out


def neg_x_table(table: Table) -> Table:
    return [[e.neg_x() for e in row] for row in table]


def dual_eval_action(form: GdForm, factor: EvalFactor) -> tuple[int, Table]:
    """Action on Phi^{-k}_t: T_ij(x) acts as theta_i theta_j T_{bar j, bar i}(-x) on Phi^k_t."""
    if not form.twisted:
        raise ValueError("the pullback through T(x) -> T^t(-x) needs an so/sp form")
    dim, table = eval_action(form, EvalFactor(abs(factor.k), factor.t, factor.theta))
    return dim, pullback_transauto(form, table)


def pullback_transauto(form: GdForm, table: Table) -> Table:
    return neg_x_table(transpose_table(form, table))


def factor_action(form: GdForm, factor: EvalFactor) -> tuple[int, Table]:
    if factor.k < 0:
        return dual_eval_action(form, factor)
    return eval_action(form, factor)


def coproduct_table(left: Table, right: Table) -> Table:
    """T_ij = sum_k left_ik (x) right_kj (left factor outermost in Kronecker order)."""
    n = len(left)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for k in range(n):
                term = left[i][k].kron(right[k][j])
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def tensor_action(form: GdForm, factors: Sequence[EvalFactor]) -> TensorModule:
    factors = tuple(factors)
    if not factors:
        raise ValueError("at least one factor is required")
    dim, table = factor_action(form, factors[0])
    for f in factors[1:]:
        d2, t2 = factor_action(form, f)
        table = coproduct_table(table, t2)
        dim *= d2
    return TensorModule(form, factors, dim, table)


def module_from_table(form: GdForm, table: Table, factors: tuple = (), twisted: bool = False) -> TensorModule:
    dim = table[0][0].nrows
    if twisted:
        return TensorModule(form, factors, dim, [], table)
    return TensorModule(form, factors, dim, table)


def twisted_action(form: GdForm, module: TensorModule) -> Table:
    """S_ij(x) = sum_k theta_i theta_k T_{bar k, bar i}(-x) T_kj(x)."""
    if not form.twisted:
        raise ValueError("twisted action needs an so/sp form")
    T = module.T
    n = form.n
    Tneg = neg_x_table(T)
    out = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            acc = None
            for k in range(1, n + 1):
                s = form.theta_i(i) * form.theta_i(k)
                term = Tneg[form.bar(k) - 1][form.bar(i) - 1] @ T[k - 1][j - 1]
                if s == -1:
                    term = -term
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def comodule_action(form: GdForm, S: Table, T: Table) -> Table:
    """S_ij -> sum_{g,h} S_gh (x) theta_i theta_g T_{bar g, bar i}(-x) T_hj(x)."""
    n = form.n
    Tneg = neg_x_table(T)
    out = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            acc = None
            for g in range(1, n + 1):
                s = form.theta_i(i) * form.theta_i(g)
                for h in range(1, n + 1):
                    right = Tneg[form.bar(g) - 1][form.bar(i) - 1] @ T[h - 1][j - 1]
                    term = S[g - 1][h - 1].kron(right if s == 1 else -right)
                    acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def antitranspose_table(table: Table) -> Table:
    """T_ij -> (T_ji)^t: the anti-automorphism T_ij <-> T_ji realized on transposed matrices."""
    n = len(table)
    return [[table[j][i].transpose() for j in range(n)] for i in range(n)]


def _as_table(obj, twisted: bool = False) -> Table:
    if isinstance(obj, TensorModule):
        return obj.series(twisted)
    return obj


def scale_table(table: Table, f: RatFn) -> Table:
    return [[e.scale(f) for e in row] for row in table]


# ---------------------------------------------------------------------------
# Two-variable polynomial identities


class BiPoly:
    """Matrix-valued polynomial in x, y as a dict (p, q) -> QMat."""

    def __init__(self, shape: tuple[int, int]):
        self.shape = shape
        self.terms: dict = {}

    def add(self, key, mat: QMat, c=ONE):
        if c == 0 or mat.is_zero():
            return
        if c != 1:
            mat = mat.scale(c)
        cur = self.terms.get(key)
        self.terms[key] = mat if cur is None else cur + mat

    def add_product(self, scal: dict, first: tuple, second: tuple, c=ONE):
        """Add scal(x, y) * A(v1) B(v2) with first = (A coeffs, v1), second = (B coeffs, v2)."""
        (a_coeffs, va), (b_coeffs, vb) = first, second
        for i, a in enumerate(a_coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(b_coeffs):
                if b.is_zero():
                    continue
                prod = a @ b
                if prod.is_zero():
                    continue
                px = (i if va == "x" else 0) + (j if vb == "x" else 0)
                py = (i if va == "y" else 0) + (j if vb == "y" else 0)
                for (sx, sy), s in scal.items():
                    self.add((px + sx, py + sy), prod, c * s)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.terms.values())


def _nums(table: Table, den: Poly) -> list:
    """Numerator coefficient lists of every entry over the common denominator."""
    return [[list(e.with_den(den).num) if e.den != den else list(e.num) for e in row] for row in table]


def _common_den(table: Table) -> Poly:
    from .exact_core import poly_gcd

    den = Poly.const(1)
    for row in table:
        for e in row:
            den = den * (e.den // poly_gcd(den, e.den))
    return den


def check_rtt(table, raise_on_fail: bool = False):
    """(x-y)[T_ij(x), T_kl(y)] = T_kj(x) T_il(y) - T_kj(y) T_il(x) for all i, j, k, l."""
    table = _as_table(table)
    n = len(table)
    dim = table[0][0].nrows
    den = _common_den(table)
    N = _nums(table, den)
    x_minus_y = {(1, 0): ONE, (0, 1): -ONE}
    one = {(0, 0): ONE}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    acc = BiPoly((dim, dim))
                    acc.add_product(x_minus_y, (N[i][j], "x"), (N[k][l], "y"))
                    acc.add_product(x_minus_y, (N[k][l], "y"), (N[i][j], "x"), -ONE)
                    acc.add_product(one, (N[k][j], "x"), (N[i][l], "y"), -ONE)
                    acc.add_product(one, (N[k][j], "y"), (N[i][l], "x"))
                    if not acc.is_zero():
                        if raise_on_fail:
                            raise RelationFailure("RTT", (i + 1, j + 1, k + 1, l + 1))
                        return False, (i + 1, j + 1, k + 1, l + 1)
    return True, None


def check_reflection(form: GdForm, table, raise_on_fail: bool = False):
    """The four-line reflection relation for S(x), entrywise."""
    table = _as_table(table, True)
    n = form.n
    dim = table[0][0].nrows
    den = _common_den(table)
    N = _nums(table, den)
    sg = form.sign
    th = form.theta_i
    bar = form.bar
    x2y2 = {(2, 0): ONE, (0, 2): -ONE}
    xpy = {(1, 0): ONE, (0, 1): ONE}
    xmy = {(1, 0): ONE, (0, 1): -ONE}
    one = {(0, 0): ONE}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                for l in range(1, n + 1):
                    S = lambda a, b: N[a - 1][b - 1]
                    acc = BiPoly((dim, dim))
                    acc.add_product(x2y2, (S(i, j), "x"), (S(k, l), "y"))
                    acc.add_product(x2y2, (S(k, l), "y"), (S(i, j), "x"), -ONE)
                    acc.add_product(xpy, (S(k, j), "x"), (S(i, l), "y"), -ONE)
                    acc.add_product(xpy, (S(k, j), "y"), (S(i, l), "x"))
                    c1 = sg * th(k) * th(j)
                    c2 = sg * th(i) * th(l)
                    acc.add_product(xmy, (S(i, bar(k)), "x"), (S(bar(j), l), "y"), c1)
                    acc.add_product(xmy, (S(k, bar(i)), "y"), (S(bar(l), j), "x"), -c2)
                    c3 = sg * th(i) * th(j)
                    acc.add_product(one, (S(k, bar(i)), "x"), (S(bar(j), l), "y"), -c3)
                    acc.add_product(one, (S(k, bar(i)), "y"), (S(bar(j), l), "x"), c3)
                    if not acc.is_zero():
                        if raise_on_fail:
                            raise RelationFailure("reflection", (i, j, k, l))
                        return False, (i, j, k, l)
    return True, None


def check_symmetry(form: GdForm, table: Table) -> bool:
    """S_ij(x) -+ 2x theta_i theta_j S_{bar j, bar i}(x) = (1 -+ 2x) S_ij(-x)."""
    sg = form.sign
    two_x = RatFn(Poly((0, -2 * sg)))
    factor = RatFn(Poly((1, -2 * sg)))
    St = transpose_table(form, table)
    n = form.n
    for i in range(n):
        for j in range(n):
            lhs = table[i][j] + St[i][j].scale(two_x)
            rhs = table[i][j].neg_x().scale(factor)
            if not lhs.equals(rhs):
                return False
    return True


def compute_O(form: GdForm, table: Table) -> RatFn:
    """The scalar series O(x) with S(x) -+ 2x S^t(x) = (1 -+ 2x) O(x) S(-x)."""
    sg = form.sign
    two_x = RatFn(Poly((0, -2 * sg)))
    factor = RatFn(Poly((1, -2 * sg)))
    St = transpose_table(form, table)
    n = form.n
    lhs = [[table[i][j] + St[i][j].scale(two_x) for j in range(n)] for i in range(n)]
    rhs = [[table[i][j].neg_x().scale(factor) for j in range(n)] for i in range(n)]
    ratio = None
    for i in range(n):
        if ratio is not None:
            break
        for r in range(rhs[i][i].nrows):
            e = rhs[i][i].entry(r, r)
            if not e.is_zero():
                ratio = lhs[i][i].entry(r, r) / e
                break
    if ratio is None:
        raise ArithmeticError("S(-x) has no usable nonzero diagonal entry")
    for i in range(n):
        for j in range(n):
            if not lhs[i][j].equals(rhs[i][j].scale(ratio)):
                raise AssertionError("O(x) is not a scalar on this module")
    if ratio * ratio.neg_x() != RatFn(1):
        raise AssertionError("O(x) O(-x) != 1")
    return ratio


# ---------------------------------------------------------------------------
# Generator coefficients


def stabilization_bound(module: TensorModule) -> int:
    return 2 * max(len(module.factors), 1) + 2


def generator_family(table: Table, upto: int) -> list[QMat]:
    """All Laurent coefficients r = 1..upto of every entry."""
    out = []
    for row in table:
        for e in row:
            out.extend(e.laurent(upto)[1:])
    return out


def _span_rank(mats: Sequence[QMat]) -> int:
    if not mats:
        return 0
    ech = Echelon(mats[0].nrows * mats[0].ncols)
    for m in mats:
        ech.add(m.flat())
    return ech.rank


def stable_generators(table: Table, bound: int) -> list[QMat]:
    """Coefficient family up to ``bound``, asserting the span has stabilized."""
    upto = bound
    while True:
        gens = generator_family(table, upto)
        more = generator_family(table, upto + 1)
        if _span_rank(gens) == _span_rank(more):
            return gens
        upto += 1
        if upto > 4 * bound + 8:
            raise RuntimeError("coefficient span did not stabilize")


def coefficient_generators(module: TensorModule, twisted: bool) -> list[QMat]:
    table = module.series(twisted)
    return stable_generators(table, stabilization_bound(module))


def entry_generators(table: Table, pairs, bound: int) -> list[QMat]:
    """Stabilized coefficients of selected entries (pairs are 1-based)."""
    sub = [[table[i - 1][j - 1]] for i, j in pairs]
    return stable_generators(sub, bound) if sub else []


# ---------------------------------------------------------------------------
# Comparison with the Lie actions on the Fock space


def gl_operator_terms(n: int, m: int, i: int, j: int) -> list:
    """sum_a x_{ai} d_{aj}."""
    return [(ONE, (("x", gen_index(n, a, i)), ("d", gen_index(n, a, j)))) for a in range(1, m + 1)]


def gd_operator_terms(form: GdForm, m: int, i: int, j: int) -> list:
    """sum_a (x_{ai} d_{aj} - theta_i theta_j x_{a bar j} d_{a bar i})."""
    n = form.n
    s = form.theta_i(i) * form.theta_i(j)
    out = gl_operator_terms(n, m, i, j)
    for a in range(1, m + 1):
        out.append((Fraction(-s), (("x", gen_index(n, a, form.bar(j))), ("d", gen_index(n, a, form.bar(i))))))
    return out


def first_coefficients_match(module: TensorModule, theta: int, nu: Sequence[int], twisted: bool) -> bool:
    """x^{-1} coefficients equal the gl_n (or gd) operators on the Fock component."""
    n, m = module.n, len(nu)
    table = module.series(twisted)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            terms = gd_operator_terms(module.form, m, i, j) if twisted else gl_operator_terms(n, m, i, j)
            _, mat = operator_matrix(theta, m, n, terms, tuple(nu))
            if table[i - 1][j - 1].coeff_at_infinity(1) != mat:
                return False
    return True


# ---------------------------------------------------------------------------
# Olshanski homomorphisms


@dataclass
class AuxModule:
    """A finite-dimensional Lie algebra module given by basis element matrices."""

    dim: int
    action: Callable  # (a, b) -> QMat for E_ab or F_ab


def aux_gl_module(m: int, aux_n: int) -> AuxModule:
    d = datum("gl", m, -1, aux_n)
    basis = full_basis(-1, m, aux_n)
    cache = {}

    def act(a, b):
        if (a, b) not in cache:
            cache[(a, b)] = basis_matrix(-1, zeta_terms(d, {(a, b): ONE}), basis)
        return cache[(a, b)]

    return AuxModule(len(basis), act)


def aux_twisted_module(tag: str, m: int, aux_n: int) -> AuxModule:
    """Grassmann Fock of C^{2m} (x) C^aux_n with g acting through gl_{2m}."""
    d = datum(tag, m, -1, 1)
    basis = full_basis(-1, 2 * m, aux_n)
    cache = {}

    def act(a, b):
        if (a, b) not in cache:
            M = d.basis_matrix(a, b)
            terms = []
            for r in range(2 * m):
                for c in range(2 * m):
                    if M[r, c]:
                        terms.extend((M[r, c] * cc, w) for cc, w in gl_unit_terms(aux_n, r + 1, c + 1))
            cache[(a, b)] = basis_matrix(-1, terms, basis)
        return cache[(a, b)]

    return AuxModule(len(basis), act)


def _block_entries(r: RFMat, size: int, blocks: int) -> list:
    """Split an RFMat of size blocks*size into a blocks x blocks table of RFMat."""
    out = []
    for a in range(blocks):
        row = []
        for b in range(blocks):
            rows = list(range(a * size, (a + 1) * size))
            cols = list(range(b * size, (b + 1) * size))
            row.append(RFMat([c.submatrix(rows, cols) for c in r.num], r.den, (size, size)))
        out.append(row)
    return out


def _sector_bases(theta: int, m: int, n: int, max_total: int) -> list[list]:
    from .fock import _compositions

    out = []
    for total in range(max_total + 1):
        basis = []
        for nu in _compositions(total, m):
            if theta == -1 and any(v > n for v in nu):
                continue
            basis.extend(component_basis(theta, m, n, nu).basis)
        if basis:
            out.append(basis)
    return out


def homo1_tables(m: int, n: int, theta: int, aux_n: int, max_total: int | None = None) -> list[tuple[int, Table]]:
    """Images of T_ij(x) under the gl Olshanski map, one table per invariant sector."""
    W = aux_gl_module(m, aux_n)
    dw = W.dim
    C = QMat(
        [
            [
                (W.action(b, a).scale(theta)[r, c] + (Fraction(theta * m, 2) if (a == b and r == c) else 0))
                for b in range(1, m + 1)
                for c in range(dw)
            ]
            for a in range(1, m + 1)
            for r in range(dw)
        ]
    )
    R = _block_entries(resolvent(C), dw, m)
    if max_total is None:
        if theta == 1:
            raise ValueError("a degree bound is needed for the polynomial Fock space")
        max_total = m * n
    out = []
    for basis in _sector_bases(theta, m, n, max_total):
        dp = len(basis)
        ident = QMat.identity(dw * dp)
        table = []
        for i in range(1, n + 1):
            row = []
            for j in range(1, n + 1):
                acc = RFMat.constant(ident if i == j else QMat.zeros(dw * dp))
                for a in range(1, m + 1):
                    for b in range(1, m + 1):
                        X = basis_matrix(
                            theta, [(ONE, (("x", gen_index(n, a, i)), ("d", gen_index(n, b, j))))], basis
                        )
                        if X.is_zero():
                            continue
                        acc = acc + R[a - 1][b - 1].kron(RFMat.constant(X))
                row.append(acc)
            table.append(row)
        out.append((dp, table))
    return out


def olshanski_gl_check(m: int, n: int, theta: int, aux_n: int = 1, max_total: int | None = None) -> bool:
    """RTT relations, GL_m invariance and the x^{-1} coefficient for the gl Olshanski map."""
    if max_total is None:
        max_total = m * n if theta == -1 else 2
    W = aux_gl_module(m, aux_n)
    dw = W.dim
    for basis, (dp, table) in zip(_sector_bases(theta, m, n, max_total), homo1_tables(m, n, theta, aux_n, max_total)):
        ok, _ = check_rtt(table)
        if not ok:
            return False
        # invariance under the diagonal gl_m action
        for a in range(1, m + 1):
            for b in range(1, m + 1):
                zp = basis_matrix(theta, zeta_terms(datum("gl", m, theta, n), {(a, b): ONE}), basis)
                X = W.action(a, b).kron(QMat.identity(dp)) + QMat.identity(dw).kron(zp)
                for row in table:
                    for e in row:
                        if any(c @ X != X @ c for c in e.num):
                            return False
        # x^{-1} coefficient equals sum_a x_ai d_aj
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                op = basis_matrix(theta, gl_operator_terms(n, m, i, j), basis)
                if table[i - 1][j - 1].coeff_at_infinity(1) != QMat.identity(dw).kron(op):
                    return False
    return True


def homo2_table(tag: str, m: int, n: int, theta: int, aux_n: int = 1, max_total: int | None = None):
    """Image of S_ij(x) under the sp/so Olshanski map on W (x) P(U).

    Returns (table, form, aux module, Fock basis).  For theta=1 the Fock space
    is cut at ``max_total`` and callers must only test low-degree columns.
    """
    d = datum(tag, m, theta, n)
    form = dual_form(tag, theta, n)
    W = aux_twisted_module(tag, m, aux_n)
    dw = W.dim
    idx = d.label_indices()
    shift = Fraction(form.sign, 2) + theta * m
    C = QMat(
        [
            [
                (-theta * W.action(a, b)[r, c] + (shift if (a == b and r == c) else 0))
                for b in idx
                for c in range(dw)
            ]
            for a in idx
            for r in range(dw)
        ]
    )
    R = _block_entries(resolvent(C), dw, 2 * m)
    if theta == -1:
        basis = full_basis(-1, m, n)
    else:
        from .fock import basis_up_to

        basis = basis_up_to(1, m, n, max_total if max_total is not None else 3)
    pos = {b: i for i, b in enumerate(basis)}
    dp = len(basis)

    def word_matrix(coef, word):
        mat = [[ZERO] * dp for _ in range(dp)]
        from .fock import apply_word

        for col, mono in enumerate(basis):
            r = apply_word(theta, word, mono)
            if r is None:
                continue
            s, m2 = r
            if m2 in pos:
                mat[pos[m2]][col] += coef * s
        return QMat(mat, ncols=dp)

    ident = QMat.identity(dw * dp)
    table = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            acc = RFMat.constant(ident if i == j else QMat.zeros(dw * dp))
            for ai, a in enumerate(idx):
                cp, gp = p_gen(theta, form, n, a, i)
                for bi, b in enumerate(idx):
                    cq, gq = q_gen(theta, form, n, b, j)
                    X = word_matrix(cp * cq, (gp, gq))
                    if X.is_zero():
                        continue
                    acc = acc + R[ai][bi].kron(RFMat.constant(X))
            row.append(acc)
        table.append(row)
    return table, form, W, basis


def olshanski_twisted_check(tag: str, m: int, n: int, theta: int = -1, aux_n: int = 1) -> bool:
    """Reflection relation and the x^{-1} coefficient for the sp/so Olshanski map."""
    if theta != -1:
        raise NotImplementedError("the reflection check uses the finite Grassmann Fock space")
    table, form, W, basis = homo2_table(tag, m, n, theta, aux_n)
    ok, _ = check_reflection(form, table)
    if not ok:
        return False
    return homo2_first_coefficient_shift(table, form, W, basis, m, theta)


def homo2_first_coefficient_shift(table, form, W, basis, m, theta) -> bool:
    """x^{-1} coefficient equals the gd operator minus theta*m on the diagonal."""
    n = form.n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            op = basis_matrix(theta, gd_operator_terms(form, m, i, j), basis)
            if i == j:
                op = op - QMat.scalar(len(basis), theta * m)
            if table[i - 1][j - 1].coeff_at_infinity(1) != QMat.identity(W.dim).kron(op):
                return False
    return True


# ---------------------------------------------------------------------------
# Induced actions


def map_table(table: Table, left: QMat, right: QMat) -> Table:
    """Entrywise left @ X(x) @ right, with common factors cancelled."""
    return [[e.conj(left, right).reduced() for e in row] for row in table]


def submodule(module: TensorModule, columns: QMat, twisted: bool) -> TensorModule:
    """Action induced on the span of ``columns``; asserts the span is invariant."""
    from .exact_core import left_inverse

    table = module.series(twisted)
    lift = left_inverse(columns)
    sub = map_table(table, lift, columns)
    ident = QMat.identity(columns.nrows)
    for row_old, row_new in zip(table, sub):
        for old, new in zip(row_old, row_new):
            if not new.conj(columns, QMat.identity(columns.ncols)).equals(old.conj(ident, columns)):
                raise AssertionError("subspace is not invariant")
    return module_from_table(module.form, sub, module.factors, twisted)


def quotient_by(module: TensorModule, kernel, twisted: bool) -> TensorModule:
    """Action induced on V / span(kernel); asserts the kernel is invariant."""
    from .exact_core import quotient_maps

    table = module.series(twisted)
    d = module.dimension
    pi, iota = quotient_maps(kernel, d)
    if kernel:
        kcols = QMat.from_columns(kernel, d)
        for row in table:
            for e in row:
                if not e.conj(pi, kcols).is_zero():
                    raise AssertionError("kernel is not invariant")
    return module_from_table(module.form, map_table(table, pi, iota), module.factors, twisted)
