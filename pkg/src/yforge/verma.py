"""Weight spaces of a Verma module tensored with a Fock component.

The extremal projector is an element of a completion of U(g), so its
algebraic properties (idempotency, annihilation by raising operators) are
visible only on a g-module.  Here that module is M_mu (x) P(U) restricted to
one weight space; M_mu is realised on PBW monomials of n^-.  The compression
to 1_mu (x) P(U) gives back the Fock-side operator zeta(P[mu + rho]).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exact_core import ONE, ZERO, QMat, rat
from .fock import add_vectors, apply_terms, component_basis, valid_degree, zeta_terms, zeta_weight
from .projector import SingularWeightError, projector_matrix
from .root_data import RootDatum, longest_word, normal_ordering

# g basis labels: ("E", i), ("F", i) for the i-th positive root, ("H", j) for the j-th coordinate.


def _commutator(a: QMat, b: QMat) -> QMat:
    return a @ b - b @ a


class VermaModule:
    """M_mu on PBW monomials F_1^{a_1} ... F_k^{a_k} 1_mu (positive-root order)."""

    def __init__(self, d: RootDatum, mu: Sequence):
        self.d = d
        self.mu = tuple(rat(v) for v in mu)
        self.roots = tuple(tuple(r) for r in d.positive_roots)
        self.k = len(self.roots)
        self._memo: dict = {}

    @cached_property
    def elements(self) -> dict:
        """Label -> Lie element dict."""
        d = self.d
        out = {}
        for i, beta in enumerate(self.roots):
            e, f, _ = d.root_vectors(beta)
            out[("E", i)] = e
            out[("F", i)] = f
        for j in range(d.m):
            unit = [0] * d.m
            unit[j] = 1
            out[("H", j)] = d.cartan_element(unit)
        return out

    @cached_property
    def _solver(self) -> tuple[list, QMat]:
        labels = list(self.elements)
        cols = [self.d.lie_matrix(self.elements[lb]).flat() for lb in labels]
        basis = QMat.from_columns(cols, len(cols[0]))
        left = (basis.T @ basis).inverse() @ basis.T
        return labels, left

    def decompose(self, mat: QMat) -> dict:
        labels, left = self._solver
        coef = left.apply(mat.flat())
        out = {lb: c for lb, c in zip(labels, coef) if c}
        recon = QMat.zeros(mat.nrows, mat.ncols)
        for lb, c in out.items():
            recon = recon + self.d.lie_matrix(self.elements[lb]).scale(c)
        if recon != mat:
            raise ValueError("matrix is not in the span of the root basis")
        return out

    @cached_property
    def brackets(self) -> dict:
        mats = {lb: self.d.lie_matrix(x) for lb, x in self.elements.items()}
        return {(a, b): self.decompose(_commutator(mats[a], mats[b])) for a in mats for b in mats}

    def weight(self, mono: tuple) -> tuple:
        """Weight in coordinates: mu minus the roots of the PBW factors."""
        w = list(self.d.to_coords(self.mu))
        for a, beta in zip(mono, self.roots):
            for j, c in enumerate(beta):
                w[j] -= a * c
        return tuple(w)

    def act(self, label, mono: tuple) -> dict:
        key = (label, mono)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._act(label, mono)
            self._memo[key] = hit
        return hit

    def act_element(self, elem: dict, vec: dict) -> dict:
        out: dict = {}
        for lb, c in elem.items():
            for mono, v in vec.items():
                for m2, w in self.act(lb, mono).items():
                    out[m2] = out.get(m2, ZERO) + c * v * w
        return {k: v for k, v in out.items() if v}

    def _act(self, label, mono: tuple) -> dict:
        kind, i = label
        if kind == "H":
            c = self.weight(mono)[i]
            return {mono: c} if c else {}
        p = next((j for j, a in enumerate(mono) if a), None)
        if p is None:
            if kind == "E":
                return {}
            unit = [0] * self.k
            unit[i] = 1
            return {tuple(unit): ONE}
        if kind == "F" and i <= p:
            bumped = list(mono)
            bumped[i] += 1
            return {tuple(bumped): ONE}
        rest = list(mono)
        rest[p] -= 1
        rest = tuple(rest)
        # x F_p rest = F_p (x rest) + [x, F_p] rest
        inner = self.act(label, rest)
        out = self.act_element({("F", p): ONE}, inner)
        extra = self.act_element(self.brackets[(label, ("F", p))], {rest: ONE})
        return add_vectors(out, extra)


def pbw_monomials(d: RootDatum, gamma: Sequence) -> list[tuple]:
    """Exponent tuples with sum a_i beta_i = gamma (coordinates)."""
    roots = [tuple(r) for r in d.positive_roots]
    out = []

    def rec(i, left, acc):
        if i == len(roots):
            if not any(left):
                out.append(tuple(acc))
            return
        a = 0
        cur = list(left)
        while True:
            rec(i + 1, cur, acc + [a])
            cur = [c - b for c, b in zip(cur, roots[i])]
            a += 1
            if not _could_reach(d, cur):
                return

    rec(0, list(gamma), [])
    return out


def _could_reach(d: RootDatum, gamma: Sequence) -> bool:
    """gamma is a nonnegative combination of simple roots (necessary for a PBW monomial)."""
    return all(c >= 0 for c in _simple_coords(d, gamma))


def _simple_coords(d: RootDatum, gamma: Sequence) -> tuple:
    key = d
    inv = _SIMPLE_INV.get(key)
    if inv is None:
        simple = QMat.from_columns([list(r) for r in d.simple_roots], d.m)
        inv = ((simple.T @ simple).inverse() @ simple.T, simple)
        _SIMPLE_INV[key] = inv
    left, simple = inv
    c = left.apply([rat(v) for v in gamma])
    if simple.apply(c) != tuple(rat(v) for v in gamma):
        return (Fraction(-1),)
    return c


_SIMPLE_INV: dict = {}


@dataclass
class TensorWeightSpace:
    """Basis pairs (PBW monomial, Fock monomial) of M_mu (x) P(U) at weight mu + zeta-weight(nu)."""

    d: RootDatum
    verma: VermaModule
    nu: tuple
    basis: list

    @cached_property
    def index(self) -> dict:
        return {b: i for i, b in enumerate(self.basis)}

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @cached_property
    def top(self) -> list[int]:
        """Positions of the 1_mu (x) P(U)_nu vectors."""
        zero = (0,) * self.verma.k
        return [i for i, (pm, _) in enumerate(self.basis) if pm == zero]

    def coords(self, vec: dict) -> tuple:
        out = [ZERO] * self.dimension
        for key, v in vec.items():
            out[self.index[key]] = v
        return tuple(out)


def tensor_weight_space(d: RootDatum, mu: Sequence, nu: Sequence) -> TensorWeightSpace:
    verma = VermaModule(d, mu)
    nu = tuple(int(v) for v in nu)
    base = d.to_coords(nu)
    basis = []
    for nu2 in _degrees(d):
        gamma = tuple(a - b for a, b in zip(d.to_coords(nu2), base))
        if not _could_reach(d, gamma):
            continue
        comp = component_basis(d.theta, d.m, d.n, nu2)
        for pm in pbw_monomials(d, gamma):
            for fm in comp.basis:
                basis.append((pm, fm))
    return TensorWeightSpace(d, verma, nu, basis)


def _degrees(d: RootDatum) -> list[tuple]:
    if d.theta != -1:
        raise ValueError("tensor weight spaces are finite only for theta = -1")
    out = [()]
    for _ in range(d.m):
        out = [t + (k,) for t in out for k in range(d.n + 1)]
    return [t for t in out if valid_degree(d.theta, d.n, t)]


class TensorAction:
    """Raising and lowering root vectors on M_mu (x) P(U) via the coproduct."""

    def __init__(self, space: TensorWeightSpace):
        self.space = space
        d = space.d
        self.d = d
        self._fock = {}
        for i, beta in enumerate(space.verma.roots):
            e, f, _ = d.root_vectors(beta)
            self._fock[("E", i)] = zeta_terms(d, e)
            self._fock[("F", i)] = zeta_terms(d, f)

    def apply(self, label, vec: dict) -> dict:
        verma = self.space.verma
        theta = self.d.theta
        out: dict = {}
        for (pm, fm), v in vec.items():
            for pm2, c in verma.act(label, pm).items():
                key = (pm2, fm)
                out[key] = out.get(key, ZERO) + c * v
            for fm2, c in apply_terms(theta, self._fock[label], {fm: ONE}).items():
                key = (pm, fm2)
                out[key] = out.get(key, ZERO) + c * v
        return {k: v for k, v in out.items() if v}

    def root_series(self, i: int, h: Fraction, vec: dict) -> dict:
        out = dict(vec)
        cur = vec
        denom = ONE
        s = 0
        while True:
            s += 1
            cur = self.apply(("E", i), cur)
            if not cur:
                return out
            if h + s == 0:
                raise SingularWeightError(self.space.verma.roots[i], s)
            denom *= s * (h + s)
            back = cur
            for _ in range(s):
                back = self.apply(("F", i), back)
            out = add_vectors(out, back, coeffs=[ONE, Fraction((-1) ** s) / denom])

    def projector(self, word: Sequence[int], vec: dict) -> dict:
        """P[rho] evaluated on the weight of this space."""
        d = self.d
        space = self.space
        total = d.add(space.verma.mu, zeta_weight(d, space.nu))
        shifted = d.add(total, d.rho)
        order = {beta: i for i, beta in enumerate(space.verma.roots)}
        for beta in normal_ordering(d, word):
            vec = self.root_series(order[tuple(beta)], d.coroot_pairing(shifted, beta), vec)
        return vec


@dataclass
class VermaProjectorReport:
    dimension: int
    idempotent: bool
    annihilated: bool
    compression_matches: bool
    matrix: QMat

    @property
    def ok(self) -> bool:
        return self.idempotent and self.annihilated and self.compression_matches


def verma_projector(d: RootDatum, mu: Sequence, nu: Sequence, word: Sequence[int] | None = None) -> VermaProjectorReport:
    """Projector on a weight space of M_mu (x) P(U): idempotency, E P = 0, and its compression."""
    word = tuple(word) if word is not None else longest_word(d)
    space = tensor_weight_space(d, mu, nu)
    action = TensorAction(space)
    cols = [space.coords(action.projector(word, {b: ONE})) for b in space.basis]
    P = QMat.from_columns(cols, space.dimension)
    idempotent = P @ P == P
    annihilated = True
    for i, beta in enumerate(space.verma.roots):
        if tuple(beta) not in {tuple(s) for s in d.simple_roots}:
            continue
        for b in space.basis:
            image = action.projector(word, {b: ONE})
            if action.apply(("E", i), image):
                annihilated = False
    top = space.top
    compressed = QMat([[P[r, c] for c in top] for r in top])
    fock = projector_matrix(d, word, d.add(space.verma.mu, d.rho), space.nu)
    return VermaProjectorReport(space.dimension, idempotent, annihilated, compressed == fock, P)


def component_projector_idempotent(d: RootDatum, mu: Sequence, nu: Sequence, word: Sequence[int] | None = None) -> bool:
    """Whether zeta(P[mu + rho]) restricted to P(U)_nu squares to itself."""
    word = tuple(word) if word is not None else longest_word(d)
    P = projector_matrix(d, word, d.add(tuple(rat(v) for v in mu), d.rho), tuple(int(v) for v in nu))
    return P @ P == P
