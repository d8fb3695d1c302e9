"""Highest vectors, Drinfeld polynomials, conjugation and irreducibility tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact_core import (
    ZERO,
    Echelon,
    Poly,
    QMat,
    RatFn,
    RFMat,
    algebra_basis,
    column_space_basis,
    commutant_basis,
    minimal_polynomial,
    rat,
    rational_roots,
)
from .fock import GdForm
from .root_data import datum, weight_is_nonsingular
from .yangian import (
    TensorModule,
    coefficient_generators,
    entry_generators,
    module_from_table,
    stabilization_bound,
    submodule,
)


class DrinfeldError(ValueError):
    """A ratio of eigen-series is not of the form Q(x+1/2)/Q(x-1/2)."""


@dataclass
class HighestData:
    vector: tuple
    series: list  # RatFn per index 1..n, empty when not a diagonal eigenvector


@dataclass
class DrinfeldData:
    kind: str
    polys: list
    delta: int | None = None
    conditions: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "polys": [p.to_json() for p in self.polys]}
        if self.delta is not None:
            out["delta"] = self.delta
        return out

    def same_polys(self, other: "DrinfeldData") -> bool:
        return self.polys == other.polys


# ---------------------------------------------------------------------------
# Highest vectors


def raising_pairs(form: GdForm, twisted: bool) -> list[tuple[int, int]]:
    n = form.n
    if twisted:
        return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if form.precedes(i, j)]
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def eigen_series(entry: RFMat, v: Sequence) -> RatFn | None:
    """h(x) with entry(x) v = h(x) v, or None if v is not an eigenvector."""
    coeffs = []
    for c in entry.num:
        w = c.apply(v)
        lam = None
        for wi, vi in zip(w, v):
            if vi:
                lam = wi / vi
                break
        if lam is None:
            return None
        if any(wi != lam * vi for wi, vi in zip(w, v)):
            return None
        coeffs.append(lam)
    return RatFn(Poly(coeffs), entry.den)


def highest_vectors(module: TensorModule, twisted: bool) -> list[HighestData]:
    """Basis of the joint kernel of all raising coefficients, with eigen-series."""
    table = module.series(twisted)
    d = module.dimension
    gens = entry_generators(table, raising_pairs(module.form, twisted), stabilization_bound(module))
    ech = Echelon(d)
    for g in gens:
        for row in g.rows:
            ech.add(row)
    out = []
    for v in ech.null_space():
        series = []
        for i in range(module.n):
            h = eigen_series(table[i][i], v)
            if h is None:
                series = []
                break
            series.append(h)
        out.append(HighestData(v, series))
    return out


def unique_highest(module: TensorModule, twisted: bool) -> HighestData:
    hv = highest_vectors(module, twisted)
    if len(hv) != 1:
        raise ValueError(f"expected a unique highest line, found {len(hv)}")
    if not hv[0].series:
        raise ValueError("the highest vector is not a diagonal eigenvector")
    return hv[0]


def higi_transfer(form: GdForm, h: Sequence[RatFn]) -> list[RatFn]:
    """Eigen-series of S_ii on a vector that is highest for the Yangian."""
    sg = form.sign
    inv2x = RatFn(Poly((1,)), Poly((0, 2)))
    out = []
    for i in range(1, form.n + 1):
        b = form.bar(i)
        hi, hb = _rf(h[i - 1]), _rf(h[b - 1])
        main = hi * hb.neg_x()
        if form.precedes(i, b):
            out.append((1 - inv2x * sg) * main + inv2x * sg * hi.neg_x() * hb)
        else:
            out.append(main)
    return out


# ---------------------------------------------------------------------------
# Q(x + 1/2) / Q(x - 1/2) = r


def linear_roots(p: Poly) -> list[Fraction]:
    """Roots of p with multiplicity; raises if p does not split over Q."""
    roots = rational_roots(p) if p.degree > 0 else []
    if len(roots) != p.degree:
        raise DrinfeldError(f"{p.pretty()} does not split into rational linear factors")
    return roots


def shift_quotient_solve(r: RatFn) -> Poly:
    """The monic Q with Q(x + 1/2) / Q(x - 1/2) = r."""
    r = r if isinstance(r, RatFn) else RatFn(r)
    num, den = r.num, r.den
    if num.degree != den.degree or num.lead != den.lead:
        raise DrinfeldError("ratio does not tend to 1 at infinity")
    count: dict = {}
    for w in linear_roots(num):
        count[w] = count.get(w, 0) + 1
    for w in linear_roots(den):
        count[w] = count.get(w, 0) - 1
    cosets: dict = {}
    for w, c in count.items():
        if c:
            cosets.setdefault(w - (w.numerator // w.denominator), []).append(w)
    roots = []
    for base in sorted(cosets):
        ws = sorted(cosets[base])
        total = 0
        w = ws[0]
        while w <= ws[-1]:
            total += count.get(w, 0)
            if total < 0:
                raise DrinfeldError("ratio has no polynomial solution")
            roots.extend([w + Fraction(1, 2)] * total)
            w += 1
        if total != 0:
            raise DrinfeldError("ratio has no polynomial solution")
    return Poly.from_roots(sorted(roots))


def shift_quotient(q: Poly) -> RatFn:
    return RatFn(q.shift(Fraction(1, 2)), q.shift(Fraction(-1, 2)))


# ---------------------------------------------------------------------------
# Drinfeld data


def ratio_table(kind: str, n: int) -> list[tuple[int, int, bool]]:
    """(numerator index, denominator index, negate) per polynomial.

    GL: T_ii / T_{i+1,i+1}.  Twisted: S_{2k+2} / S_{2k} for k < l, then
    S_nn(-x) / S_nn(x) for sp and even so, or S_nn / S_{n-1,n-1} for odd so.
    """
    if kind == "gl":
        return [(i, i + 1, False) for i in range(1, n)]
    l = n // 2
    out = [(2 * k + 2, 2 * k, False) for k in range(1, l)]
    if kind == "so" and n % 2:
        if l >= 1:
            out.append((n, n - 1, False))
    elif l >= 1:
        out.append((n, n, True))
    return out


def _ratios(kind: str, n: int, series: Sequence[RatFn]) -> list[RatFn]:
    out = []
    for a, b, neg in ratio_table(kind, n):
        top = series[a - 1].neg_x() if neg else series[a - 1]
        out.append(top / series[b - 1])
    return out


def polys_from_series(kind: str, n: int, series: Sequence[RatFn]) -> list[Poly]:
    return [shift_quotient_solve(r) for r in _ratios(kind, n, series)]


def drinfeld_extract(module: TensorModule, twisted: bool | None = None) -> DrinfeldData:
    """Drinfeld (GL) or Q (twisted) polynomials from the unique highest line."""
    kind = module.form.kind
    twisted = module.form.twisted if twisted is None else twisted
    if not twisted:
        kind = "gl"
    hv = unique_highest(module, twisted)
    if kind == "so" and module.n % 2 == 0:
        delta = delta_label(module)
        series = hv.series if delta != -1 else unique_highest(conjugate_module(module), True).series
        return DrinfeldData(kind, polys_from_series(kind, module.n, series), delta)
    return DrinfeldData(kind, polys_from_series(kind, module.n, hv.series))


def _rho_shift(d, mu) -> list[Fraction]:
    return [rat(m) + r for m, r in zip(mu, d.rho)]


def dominance_conditions(kind: str, lam, mu, nu, n: int) -> dict:
    """Nonsingularity of lam + rho and the chercon inequalities."""
    tag = "gl" if kind == "gl" else ("sp" if kind == "sp" else "so")
    m = len(lam)
    d = datum(tag, m, -1, n)
    lr = _rho_shift(d, lam)
    ok = True
    for a in range(m):
        for b in range(a + 1, m):
            if lr[a] == lr[b] and nu[a] < nu[b]:
                ok = False
            if tag != "gl" and lr[a] + lr[b] == 0 and nu[a] + nu[b] > n:
                ok = False
        if tag == "sp" and lr[a] == 0 and nu[a] > n // 2:
            ok = False
    return {"nonsingular": weight_is_nonsingular(d, lam), "chercon": ok}


def drinfeld_forward(kind: str, lam, mu, nu, n: int) -> DrinfeldData:
    """The product formulas for the quotient's polynomials."""
    tag = "gl" if kind == "gl" else ("sp" if kind == "sp" else "so")
    m = len(mu)
    d = datum(tag, m, -1, n)
    s = _rho_shift(d, mu)
    nu = [int(v) for v in nu]
    cond = dominance_conditions(kind, lam, mu, nu, n)
    x = Poly.x()
    if tag == "gl":
        polys = [Poly.from_roots([s[a] for a in range(m) if nu[a] == i]) for i in range(1, n)]
        return DrinfeldData("gl", polys, None, cond)
    l = n // 2
    polys = []
    for k in range(1, l + (1 if n % 2 else 0)):
        p = Poly.const(1)
        for a in range(m):
            if nu[a] == k:
                p = p * (x + s[a])
            if nu[a] == n - k:
                p = p * (x - s[a])
        polys.append(p)
    delta = None
    if n % 2 == 0 and l >= 1:
        p = Poly.const(1)
        for a in range(m):
            if nu[a] == l:
                p = p * (x * x - Poly.const(s[a] * s[a]))
        polys.append(p)
        if kind == "so":
            cond["split"] = any(nu[a] == l and s[a] == 0 for a in range(m))
    return DrinfeldData(kind, polys, delta, cond)


# ---------------------------------------------------------------------------
# Conjugation for even orthogonal forms


def swap_index(n: int, i: int) -> int:
    if i == n - 1:
        return n
    if i == n:
        return n - 1
    return i


def conjugate_module(module: TensorModule) -> TensorModule:
    """Pull S(x) back through conjugation by the swap of f_{n-1} and f_n."""
    form = module.form
    if form.kind != "so" or form.n % 2:
        raise ValueError("conjugation is defined for so_n with n even")
    n = form.n
    S = module.series(True)
    table = [[S[swap_index(n, i) - 1][swap_index(n, j) - 1] for j in range(1, n + 1)] for i in range(1, n + 1)]
    out = module_from_table(form, table, module.factors, True)
    out.label = module.label
    return out


def swap_operator(module: TensorModule) -> QMat:
    """The swap of f_{n-1} and f_n acting on a tensor product of exterior powers."""
    from .fock import component_basis

    n = module.n
    mat = QMat.identity(1)
    for f in module.factors:
        if f.theta != -1:
            raise ValueError("swap operator is built for exterior powers only")
        basis = component_basis(-1, 1, n, (abs(f.k),)).basis
        idx = {b: i for i, b in enumerate(basis)}
        cols = []
        for b in basis:
            e = list(b)
            sign = -1 if (e[n - 2] and e[n - 1]) else 1
            e[n - 2], e[n - 1] = e[n - 1], e[n - 2]
            col = [ZERO] * len(basis)
            col[idx[tuple(e)]] = Fraction(sign)
            cols.append(col)
        mat = mat.kron(QMat.from_columns(cols, len(basis)))
    return mat


def _solves(kind: str, n: int, series) -> bool:
    try:
        polys_from_series(kind, n, series)
        return True
    except DrinfeldError:
        return False


def delta_label(module: TensorModule) -> int | None:
    """+1 or -1 for split-type even orthogonal modules, else None."""
    form = module.form
    if form.kind != "so" or form.n % 2:
        raise ValueError("delta labels exist only for so_n with n even")
    own = unique_highest(module, True).series
    conj = unique_highest(conjugate_module(module), True).series
    own_ok = _solves("so", form.n, own)
    conj_ok = _solves("so", form.n, conj)
    if own_ok and conj_ok:
        q_last = polys_from_series("so", form.n, own)[-1]
        if q_last(0) == 0:
            raise AssertionError("both a module and its conjugate produce polynomials with Q_l(0) = 0")
        return None
    if own_ok:
        return 1
    if conj_ok:
        return -1
    raise AssertionError("neither the module nor its conjugate produces polynomials")


# ---------------------------------------------------------------------------
# Irreducibility and splitting


def is_irreducible(module: TensorModule, twisted: bool | None = None) -> bool:
    twisted = module.form.twisted if twisted is None else twisted
    d = module.dimension
    if d == 0:
        return False
    gens = coefficient_generators(module, twisted)
    return len(algebra_basis(gens, d)) == d * d


def split_components(module: TensorModule, twisted: bool | None = None) -> list[TensorModule]:
    """Irreducible summands read off from a commutant of dimension 1 or 2."""
    twisted = module.form.twisted if twisted is None else twisted
    d = module.dimension
    gens = coefficient_generators(module, twisted)
    comm = commutant_basis(gens, d)
    if len(comm) == 1:
        return [module]
    if len(comm) != 2:
        raise AssertionError(f"commutant has dimension {len(comm)}")
    ident = QMat.identity(d)
    c = next(m for m in comm if m != ident and not _is_scalar(m))
    roots = rational_roots(minimal_polynomial(c))
    if len(roots) != 2 or roots[0] == roots[1]:
        raise AssertionError("commutant is not split semisimple")
    r1, r2 = roots
    e1 = (c - QMat.scalar(d, r2)).scale(1 / (r1 - r2))
    e2 = ident - e1
    out = []
    for e in (e1, e2):
        cols = column_space_basis(e.columns(), d)
        out.append(submodule(module, cols, twisted))
    return out


def _is_scalar(m: QMat) -> bool:
    return m == QMat.scalar(m.nrows, m[0, 0])


def idempotent_images(module: TensorModule, twisted: bool = True) -> list[QMat]:
    """Column bases of the two summands inside the module (split case)."""
    d = module.dimension
    gens = coefficient_generators(module, twisted)
    comm = commutant_basis(gens, d)
    if len(comm) != 2:
        return [QMat.identity(d)]
    ident = QMat.identity(d)
    c = next(m for m in comm if not _is_scalar(m))
    r1, r2 = rational_roots(minimal_polynomial(c))
    e1 = (c - QMat.scalar(d, r2)).scale(1 / (r1 - r2))
    return [column_space_basis(e.columns(), d) for e in (e1, ident - e1)]


# ---------------------------------------------------------------------------
# Integrability


def so_weights_integral(module: TensorModule) -> bool:
    """Cartan elements of so_n (x^{-1} coefficients of S_ii) act semisimply with integer eigenvalues."""
    form = module.form
    S = module.series(True)
    for i in range(2, form.n + 1, 2):
        h = S[i - 1][i - 1].coeff_at_infinity(1)
        mp = minimal_polynomial(h)
        roots = rational_roots(mp)
        if len(roots) != mp.degree or len(set(roots)) != len(roots):
            return False
        if any(r.denominator != 1 for r in roots):
            return False
    return True


def _rf(v) -> RatFn:
    return v if isinstance(v, RatFn) else RatFn(v)
