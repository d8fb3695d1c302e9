"""Extremal projector on Fock components, Gram matrices and z-constants.

The projector for the longest Weyl element is the ordered product over a
normal ordering of the positive roots of the series

    P_beta = sum_s (-1)^s / (s! prod_{t=1..s} (h + t)) F^s E^s,

evaluated through zeta.  Here h is (w + shift)(H_beta) with w the zeta-weight
of the input vector; it is constant along the series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact_core import ONE, ZERO, QMat, mat_kernel, rat
from .fock import (
    Vector,
    add_vectors,
    apply_terms,
    component_basis,
    dual_form,
    form_norm,
    highest_monomial,
    valid_degree,
    zeta_terms,
    zeta_weight,
)
from .root_data import RootDatum, longest_word, normal_ordering, weight_is_nonsingular


class SingularWeightError(ValueError):
    """A projector denominator vanished (the weight lam + rho is singular)."""

    def __init__(self, beta, t):
        super().__init__(f"vanishing denominator for root {beta} at step {t}")
        self.beta = beta
        self.t = t


def _root_terms(d: RootDatum, beta) -> tuple[list, list]:
    key = (d, tuple(beta))
    cached = _ROOT_TERMS.get(key)
    if cached is None:
        e, f, _ = d.root_vectors(beta)
        cached = (zeta_terms(d, e), zeta_terms(d, f))
        _ROOT_TERMS[key] = cached
    return cached


_ROOT_TERMS: dict = {}


def apply_root_series(d: RootDatum, beta, shift: Sequence, v: Vector, nu: Sequence) -> Vector:
    """Apply the series P_beta with shift weight ``shift`` (labels) to v in degree nu."""
    if not v:
        return {}
    e_terms, f_terms = _root_terms(d, beta)
    w = d.add(zeta_weight(d, nu), shift)
    h = d.coroot_pairing(w, beta)
    theta = d.theta
    cap = max(sum(m) for m in v) + d.m * d.n + 1
    out = dict(v)
    cur = v
    denom = ONE
    for s in range(1, cap + 1):
        cur = apply_terms(theta, e_terms, cur)
        if not cur:
            return out
        t = h + s
        if t == 0:
            raise SingularWeightError(tuple(beta), s)
        denom *= s * t
        back = cur
        for _ in range(s):
            back = apply_terms(theta, f_terms, back)
        coef = Fraction((-1) ** s) / denom
        out = add_vectors(out, back, coeffs=[ONE, coef])
    raise RuntimeError(f"raising operator for {beta} is not nilpotent within the cap")


def apply_projector(d: RootDatum, word: Sequence[int], shift: Sequence, v: Vector, nu: Sequence) -> Vector:
    """P_{beta_l} ... P_{beta_1} v along the normal ordering of ``word``."""
    for beta in normal_ordering(d, word):
        v = apply_root_series(d, beta, shift, v, nu)
    return v


def projector_matrix(d: RootDatum, word: Sequence[int], shift: Sequence, nu: Sequence) -> QMat:
    comp = component_basis(d.theta, d.m, d.n, tuple(nu))
    cols = [comp.coords(apply_projector(d, word, shift, {b: ONE}, nu)) for b in comp.basis]
    return QMat.from_columns(cols, comp.dimension)


def degree_of(d: RootDatum, lam: Sequence, mu: Sequence) -> tuple:
    """nu = lam - mu - kappa as exact labels."""
    return tuple(rat(a) - rat(b) - k for a, b, k in zip(lam, mu, d.kappa))


@dataclass
class GramResult:
    lam: tuple
    mu: tuple
    nu: tuple
    gram: QMat
    kernel: list = field(default_factory=list)
    projector: QMat | None = None

    @property
    def dimension(self) -> int:
        return self.gram.nrows

    @property
    def quotient_dim(self) -> int:
        return self.dimension - len(self.kernel)


def shapovalov_gram(d: RootDatum, lam: Sequence, mu: Sequence, word: Sequence[int] | None = None) -> GramResult:
    """G_uv = <u, zeta(P[mu + rho]) v> on the degree nu = lam - mu - kappa component."""
    lam = tuple(rat(x) for x in lam)
    mu = tuple(rat(x) for x in mu)
    if len(lam) != d.m or len(mu) != d.m:
        raise ValueError("weights must have m labels")
    if not weight_is_nonsingular(d, lam):
        raise SingularWeightError(None, None)
    nu = degree_of(d, lam, mu)
    if not valid_degree(d.theta, d.n, nu):
        return GramResult(lam, mu, nu, QMat.zeros(0, 0), [], QMat.zeros(0, 0))
    nu = tuple(int(x) for x in nu)
    word = tuple(word) if word is not None else longest_word(d)
    shift = d.add(mu, d.rho)
    proj = projector_matrix(d, word, shift, nu)
    comp = component_basis(d.theta, d.m, d.n, nu)
    norms = [form_norm(d.theta, b) for b in comp.basis]
    gram = QMat([[norms[i] * proj[i, j] for j in range(comp.dimension)] for i in range(comp.dimension)])
    if gram != gram.T:
        raise AssertionError("Gram matrix is not symmetric")
    kernel = [tuple(k.col(0)) for k in mat_kernel(gram)]
    return GramResult(lam, mu, nu, gram, kernel, proj)


# ---------------------------------------------------------------------------
# Normalisation constants


def root_shape(d: RootDatum, alpha) -> tuple[str, int, int]:
    """("minus" | "plus" | "long", a, b) with label indices a < b (b = a for "long")."""
    m = d.m
    nz = [(j, c) for j, c in enumerate(alpha, start=1) if c]
    if d.tag == "gl":
        (a, _), (b, _) = nz
        return "minus", a, b
    if len(nz) == 1:
        a = m + 1 - nz[0][0]
        return "long", a, a
    (j1, _), (j2, c2) = nz
    return ("minus" if c2 < 0 else "plus"), m + 1 - j2, m + 1 - j1


def z_alpha(d: RootDatum, alpha, lam: Sequence, mu: Sequence, nu: Sequence | None = None, signed: bool = True) -> Fraction:
    """The constant z_alpha; ``signed=False`` drops the (-1)^{nu_a nu_b} factor."""
    lam = tuple(rat(x) for x in lam)
    mu = tuple(rat(x) for x in mu)
    nu = degree_of(d, lam, mu) if nu is None else tuple(rat(x) for x in nu)
    rho = d.rho
    shape, a, b = root_shape(d, alpha)
    a0, b0 = a - 1, b - 1
    theta, n = d.theta, d.n
    out = ONE
    if theta == 1:
        if shape == "minus":
            steps = range(1, int(nu[b0]) + 1)
            for s in steps:
                out *= _ratio(mu[a0] - mu[b0] + rho[a0] - rho[b0] - s, lam[a0] - lam[b0] + rho[a0] - rho[b0] + s, alpha)
        elif shape == "plus":
            for s in range(1, int(nu[b0]) + 1):
                out *= _ratio(mu[a0] + mu[b0] + rho[a0] + rho[b0] + s, lam[a0] + lam[b0] + rho[a0] + rho[b0] - s, alpha)
        else:
            for s in range(1, int(nu[a0]) // 2 + 1):
                out *= _ratio(mu[a0] + rho[a0] + s, lam[a0] + rho[a0] - s, alpha)
        return out
    if signed and shape in ("minus", "plus") and (nu[a0] * nu[b0]) % 2:
        out = -out
    if shape == "minus" and nu[a0] < nu[b0]:
        out *= _ratio(lam[a0] - lam[b0] + rho[a0] - rho[b0], mu[a0] - mu[b0] + rho[a0] - rho[b0], alpha)
    elif shape == "plus" and nu[a0] + nu[b0] > n:
        out *= _ratio(lam[a0] + lam[b0] + rho[a0] + rho[b0], mu[a0] + mu[b0] + rho[a0] + rho[b0], alpha)
    elif shape == "long" and 2 * nu[a0] > n:
        out *= _ratio(lam[a0] + rho[a0], mu[a0] + rho[a0], alpha)
    return out


def _ratio(num, den, alpha) -> Fraction:
    if den == 0:
        raise SingularWeightError(tuple(alpha), None)
    return Fraction(num) / den


def eigen_roots(d: RootDatum) -> tuple:
    """Roots entering the eigenvalue product on the highest monomial."""
    if d.tag != "gl" and d.theta == 1 and d.n > 1:
        return d.compact_positive_roots
    return d.positive_roots


def z_product(d: RootDatum, lam: Sequence, mu: Sequence, signed: bool = True, roots=None) -> Fraction:
    out = ONE
    for alpha in (eigen_roots(d) if roots is None else roots):
        out *= z_alpha(d, alpha, lam, mu, signed=signed)
    return out


def highest_vector_monomial(d: RootDatum, nu: Sequence) -> tuple:
    twisted = d.tag != "gl"
    form = dual_form(d.tag, d.theta, d.n)
    return highest_monomial(d.theta, twisted, d.n, nu, form)


def projector_eigen_on_highest(d: RootDatum, lam: Sequence, mu: Sequence, word: Sequence[int] | None = None) -> Fraction:
    """Scalar z with zeta(P[mu+rho]) u = z u for the highest monomial u."""
    lam = tuple(rat(x) for x in lam)
    mu = tuple(rat(x) for x in mu)
    if not weight_is_nonsingular(d, lam):
        raise SingularWeightError(None, None)
    nu = degree_of(d, lam, mu)
    if not valid_degree(d.theta, d.n, nu):
        raise ValueError(f"degree {nu} is not a valid multidegree")
    nu = tuple(int(x) for x in nu)
    u = highest_vector_monomial(d, nu)
    word = tuple(word) if word is not None else longest_word(d)
    out = apply_projector(d, word, d.add(mu, d.rho), {u: ONE}, nu)
    z = out.get(u, ZERO)
    if any(k != u for k in out):
        raise AssertionError("projector image of the highest monomial is not proportional to it")
    return z
