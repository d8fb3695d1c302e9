"""Intertwining operators between tensor products of evaluation modules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_core import ZERO, Echelon, QMat, intertwiner_space, mat_kernel, rat, span_rank
from .fock import component_basis, dual_form, valid_degree
from .projector import GramResult, SingularWeightError, degree_of, projector_matrix
from .repclass import is_irreducible
from .root_data import RootDatum, datum, longest_word, weight_is_nonsingular
from .yangian import (
    EvalFactor,
    TensorModule,
    _span_rank,
    antitranspose_table,
    generator_family,
    module_from_table,
    quotient_by,
    stabilization_bound,
    tensor_action,
)


@dataclass
class Intertwiner:
    source: TensorModule
    target: TensorModule
    matrix: QMat

    @property
    def kernel(self) -> list[tuple]:
        return [tuple(k.col(0)) for k in mat_kernel(self.matrix)]

    @property
    def kernel_dim(self) -> int:
        return self.matrix.ncols - self.matrix.rank()

    @property
    def image_dim(self) -> int:
        return self.matrix.rank()


# ---------------------------------------------------------------------------
# Generators shared by two modules


def _stable_upto(table, bound: int) -> int:
    upto = bound
    while _span_rank(generator_family(table, upto)) != _span_rank(generator_family(table, upto + 1)):
        upto += 1
        if upto > 4 * bound + 8:
            raise RuntimeError("coefficient span did not stabilize")
    return upto


def paired_generators(source: TensorModule, target: TensorModule, twisted: bool) -> list[tuple[QMat, QMat]]:
    """(A_source(g), A_target(g)) for every coefficient g up to a bound stable for both."""
    ts, tt = source.series(twisted), target.series(twisted)
    upto = max(
        _stable_upto(ts, stabilization_bound(source)),
        _stable_upto(tt, stabilization_bound(target)),
    )
    return list(zip(generator_family(ts, upto), generator_family(tt, upto)))


def is_intertwiner(source: TensorModule, target: TensorModule, X: QMat, twisted: bool) -> bool:
    return all(b @ X == X @ a for a, b in paired_generators(source, target, twisted))


def hom_space(source: TensorModule, target: TensorModule, twisted: bool) -> list[Intertwiner]:
    """Basis of the solution space of A_t(g) X = X A_s(g)."""
    if source.form != target.form:
        raise ValueError("modules are over different forms")
    pairs = paired_generators(source, target, twisted)
    sols = intertwiner_space(pairs, source.dimension, target.dimension)
    return [Intertwiner(source, target, X) for X in sols]


# ---------------------------------------------------------------------------
# The explicit gl operator


def eval_parameters(d: RootDatum, mu: Sequence) -> list[Fraction]:
    """t_a = mu_a + rho_a + 1/2."""
    return [rat(m) + r + Fraction(1, 2) for m, r in zip(mu, d.rho)]


def block_reversal(theta: int, m: int, n: int, nu: Sequence[int]) -> QMat:
    """x_{ai} -> x_{m+1-a, i} from degree nu to reversed degree, with the Grassmann reordering sign."""
    src = component_basis(theta, m, n, tuple(nu))
    tgt = component_basis(theta, m, n, tuple(reversed(nu)))
    sign = 1
    if theta == -1:
        s = sum(nu[a] * nu[b] for a in range(m) for b in range(a + 1, m))
        sign = -1 if s % 2 else 1
    cols = []
    for mono in src.basis:
        blocks = [mono[a * n:(a + 1) * n] for a in range(m)]
        image = tuple(e for blk in reversed(blocks) for e in blk)
        col = [ZERO] * tgt.dimension
        col[tgt.index[image]] = Fraction(sign)
        cols.append(col)
    return QMat.from_columns(cols, tgt.dimension)


def gl_modules(lam, mu, theta: int, n: int) -> tuple[TensorModule, TensorModule, tuple]:
    m = len(lam)
    d = datum("gl", m, theta, n)
    nu = tuple(int(v) for v in degree_of(d, lam, mu))
    form = dual_form("gl", theta, n)
    ts = eval_parameters(d, mu)
    factors = [EvalFactor(k, t, theta) for k, t in zip(nu, ts)]
    source = tensor_action(form, factors)
    target = tensor_action(form, list(reversed(factors)))
    return source, target, nu


def gl_explicit_intertwiner(lam, mu, theta: int, n: int, word=None, check: bool = True) -> Intertwiner:
    """Block reversal composed with the extremal projector on the degree-nu component."""
    lam = tuple(rat(v) for v in lam)
    mu = tuple(rat(v) for v in mu)
    m = len(lam)
    d = datum("gl", m, theta, n)
    if not weight_is_nonsingular(d, lam):
        raise SingularWeightError(None, None)
    nu_raw = degree_of(d, lam, mu)
    if not valid_degree(theta, n, nu_raw):
        raise ValueError(f"degree {nu_raw} is not a valid multidegree")
    source, target, nu = gl_modules(lam, mu, theta, n)
    word = tuple(word) if word is not None else longest_word(d)
    proj = projector_matrix(d, word, d.add(mu, d.rho), nu)
    X = block_reversal(theta, m, n, nu) @ proj
    op = Intertwiner(source, target, X)
    if check and not is_intertwiner(source, target, X, False):
        raise AssertionError("explicit operator does not intertwine")
    return op


def twisted_modules(tag: str, lam, mu, n: int, theta: int = -1) -> tuple[TensorModule, TensorModule, tuple]:
    """Source and target of the twisted operator: Phi^{nu_a}_{t_a} and Phi^{-nu_a}_{t_a}, same order."""
    m = len(lam)
    d = datum(tag, m, theta, n)
    nu = tuple(int(v) for v in degree_of(d, lam, mu))
    form = dual_form(tag, theta, n)
    ts = eval_parameters(d, mu)
    source = tensor_action(form, [EvalFactor(k, t, theta) for k, t in zip(nu, ts)])
    target = tensor_action(form, [EvalFactor(-k, t, theta) for k, t in zip(nu, ts)])
    return source, target, nu


# ---------------------------------------------------------------------------
# Kernels, quotients, duality


def same_kernel(a: QMat, b: QMat) -> bool:
    ka = [tuple(k.col(0)) for k in mat_kernel(a)]
    kb = [tuple(k.col(0)) for k in mat_kernel(b)]
    d = a.ncols
    return span_rank(ka, d) == span_rank(kb, d) == span_rank(ka + kb, d)


def kernel_invariant(module: TensorModule, kernel: Sequence[Sequence], twisted: bool) -> bool:
    if not kernel:
        return True
    d = module.dimension
    ech = Echelon(d)
    for v in kernel:
        ech.add(v)
    for row in module.series(twisted):
        for e in row:
            for c in e.num:
                for v in kernel:
                    if not ech.contains(c.apply(v)):
                        return False
    return True


def kernel_match(op: Intertwiner | None, gram: GramResult, twisted: bool = False, module: TensorModule | None = None) -> bool:
    """ker(operator) = ker(Gram); for the twisted case also ker(Gram) is invariant."""
    if op is not None and not same_kernel(op.matrix, gram.gram):
        return False
    if twisted:
        mod = module if module is not None else (op.source if op is not None else None)
        if mod is None:
            raise ValueError("a module is needed to test kernel invariance")
        return kernel_invariant(mod, gram.kernel, True)
    return True


def quotient_module(module: TensorModule, kernel: Sequence[Sequence], twisted: bool) -> TensorModule:
    """Induced action on the complement of the kernel pivots."""
    if len(kernel) >= module.dimension:
        raise ValueError("quotient by the whole module is zero")
    if not kernel:
        return module
    q = quotient_by(module, list(kernel), twisted)
    if not twisted:
        q.T = q.T or q.series(False)
    return q


def dual_module(module: TensorModule, twisted: bool) -> TensorModule:
    """Transposed matrices with the labels of every generator swapped."""
    return module_from_table(module.form, antitranspose_table(module.series(twisted)), module.factors, twisted)


def has_invertible(homs: Sequence[Intertwiner]) -> bool:
    if not homs:
        return False
    if homs[0].matrix.nrows != homs[0].matrix.ncols:
        return False
    for weights in _weight_choices(len(homs)):
        acc = homs[0].matrix.scale(weights[0])
        for w, h in zip(weights[1:], homs[1:]):
            acc = acc + h.matrix.scale(w)
        if acc.rank() == acc.nrows:
            return True
    return False


def _weight_choices(k: int):
    primes = [1, 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    for shift in range(4):
        yield [Fraction(primes[(i + shift) % len(primes)]) ** (i + 1) for i in range(k)]


def duality_check(source: TensorModule, target: TensorModule, twisted: bool) -> bool:
    """The dual of the source maps to the target: invertibly when both are irreducible."""
    dual = dual_module(source, twisted)
    homs = hom_space(dual, target, twisted)
    if not homs:
        return False
    if is_irreducible(source, twisted) and is_irreducible(target, twisted):
        return has_invertible(homs)
    return True


def in_span(X: QMat, homs: Sequence[Intertwiner]) -> bool:
    vecs = [h.matrix.flat() for h in homs]
    n = X.nrows * X.ncols
    return span_rank(vecs, n) == span_rank(vecs + [X.flat()], n)


def normalize_on(op: Intertwiner, src_vec: Sequence, tgt_vec: Sequence) -> tuple[Intertwiner, Fraction]:
    """Scale so src_vec maps to +1 x tgt_vec; returns (scaled op, original coefficient)."""
    img = op.matrix.apply(src_vec)
    coef = None
    for a, b in zip(img, tgt_vec):
        if b:
            coef = a / b
            break
    if coef is None or any(a != coef * b for a, b in zip(img, tgt_vec)):
        raise ValueError("image is not proportional to the target vector")
    if coef == 0:
        return op, coef
    return Intertwiner(op.source, op.target, op.matrix.scale(1 / coef)), coef
