"""Root data, weights and (extended) Weyl groups for gl_m, sp_2m and so_2m.

Weights are given to users as label sequences lam_1..lam_m.  For gl_m the
labels are the coordinates in the basis eps_1..eps_m.  For sp_2m and so_2m
the labels relate to the internal eta-coordinates by
``eta_j = -lam_{m+1-j}``; all root computations happen in coordinates and
the conversion is done at the boundary.

Lie algebra elements are sparse dicts ``{(a, b): coeff}``.  For gl_m the
keys are 1-based matrix units E_ab.  For sp_2m and so_2m the keys are
canonical pairs of the basis F_ab with a, b in {-m..-1, 1..m}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product
from typing import Iterable, Sequence

from .exact_core import ONE, ZERO, QMat, commutator, rat

KINDS = ("gl", "sp", "so")

Root = tuple  # integer coordinate vector


@dataclass(frozen=True)
class LieKind:
    tag: str
    m: int

    def __post_init__(self):
        if self.tag not in KINDS:
            raise ValueError(f"unknown Lie type {self.tag!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError("m must be a positive integer")

    def __str__(self) -> str:
        if self.tag == "gl":
            return f"gl_{self.m}"
        return f"{self.tag}_{2 * self.m}"


@dataclass(frozen=True)
class SignedPerm:
    """Signed permutation of coordinate indices 1..m.

    ``images[j-1] = +-k`` means e_j is sent to +-e_k.  For gl_m all signs are
    positive.
    """

    images: tuple

    @classmethod
    def identity(cls, m: int) -> "SignedPerm":
        return cls(tuple(range(1, m + 1)))

    @property
    def m(self) -> int:
        return len(self.images)

    def act(self, v: Sequence) -> tuple:
        out = [ZERO] * self.m
        for j, img in enumerate(self.images):
            k = abs(img) - 1
            out[k] = v[j] if img > 0 else -v[j]
        return tuple(out)

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        """Composition, ``(self * other)(v) = self(other(v))``."""
        out = []
        for img in other.images:
            k = self.images[abs(img) - 1]
            out.append(k if img > 0 else -k)
        return SignedPerm(tuple(out))

    def inverse(self) -> "SignedPerm":
        out = [0] * self.m
        for j, img in enumerate(self.images, start=1):
            out[abs(img) - 1] = j if img > 0 else -j
        return SignedPerm(tuple(out))

    @property
    def flips(self) -> int:
        return sum(1 for img in self.images if img < 0)

    def label_images(self) -> dict:
        """The induced map on label indices +-1..+-m (label a <-> eta_{m+1-a})."""
        m = self.m
        out = {}
        for j, img in enumerate(self.images, start=1):
            a = m + 1 - j
            b = m + 1 - abs(img)
            out[a] = b if img > 0 else -b
            out[-a] = -out[a]
        return out


def _vec(values: Iterable) -> tuple:
    return tuple(rat(v) for v in values)


def _dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((rat(a) * b for a, b in zip(u, v)), ZERO)


def _unit(m: int, j: int, c: int = 1) -> list:
    v = [0] * m
    v[j - 1] = c
    return v


@dataclass(frozen=True)
class RootDatum:
    kind: LieKind
    theta: int
    n: int
    positive_roots: tuple = field(init=False)
    simple_roots: tuple = field(init=False)

    def __post_init__(self):
        if self.theta not in (1, -1):
            raise ValueError("theta must be +1 or -1")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n must be a positive integer")
        m, tag = self.kind.m, self.kind.tag
        pos = []
        for a in range(1, m + 1):
            for b in range(a + 1, m + 1):
                v = _unit(m, a)
                v[b - 1] = -1
                pos.append(tuple(v))
        if tag != "gl":
            for a in range(1, m + 1):
                for b in range(a + 1, m + 1):
                    v = _unit(m, a)
                    v[b - 1] = 1
                    pos.append(tuple(v))
        if tag == "sp":
            for a in range(1, m + 1):
                pos.append(tuple(_unit(m, a, 2)))
        simple = []
        for c in range(1, m):
            v = _unit(m, c)
            v[c] = -1
            simple.append(tuple(v))
        if tag == "sp":
            simple.append(tuple(_unit(m, m, 2)))
        elif tag == "so" and m > 1:
            v = [0] * m
            v[m - 2] = v[m - 1] = 1
            simple.append(tuple(v))
        object.__setattr__(self, "positive_roots", tuple(pos))
        object.__setattr__(self, "simple_roots", tuple(simple))

    # -- basic data -------------------------------------------------------

    @property
    def m(self) -> int:
        return self.kind.m

    @property
    def tag(self) -> str:
        return self.kind.tag

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def compact_positive_roots(self) -> tuple:
        return tuple(r for r in self.positive_roots if sum(r) == 0)

    def is_compact(self, alpha: Root) -> bool:
        return sum(alpha) == 0

    def coroot(self, alpha: Root) -> tuple:
        if any(abs(c) == 2 for c in alpha):
            return tuple(c // 2 for c in alpha)
        return tuple(alpha)

    def to_coords(self, labels: Sequence) -> tuple:
        labels = _vec(labels)
        if len(labels) != self.m:
            raise ValueError(f"weight must have {self.m} labels, got {len(labels)}")
        if self.tag == "gl":
            return labels
        return tuple(-labels[self.m - j] for j in range(1, self.m + 1))

    def to_labels(self, coords: Sequence) -> tuple:
        coords = _vec(coords)
        if self.tag == "gl":
            return coords
        return tuple(-coords[self.m - a] for a in range(1, self.m + 1))

    @cached_property
    def rho(self) -> tuple:
        m = self.m
        if self.tag == "gl":
            return tuple(Fraction(m, 2) - a + Fraction(1, 2) for a in range(1, m + 1))
        if self.tag == "sp":
            return tuple(Fraction(-a) for a in range(1, m + 1))
        return tuple(Fraction(1 - a) for a in range(1, m + 1))

    @cached_property
    def kappa(self) -> tuple:
        if self.tag == "gl":
            return (ZERO,) * self.m
        return (Fraction(self.theta * self.n, 2),) * self.m

    def coroot_pairing(self, labels: Sequence, alpha: Root) -> Fraction:
        """lam(H_alpha) for a weight given by labels."""
        return _dot(self.coroot(alpha), self.to_coords(labels))

    def add(self, u: Sequence, v: Sequence) -> tuple:
        return tuple(rat(a) + rat(b) for a, b in zip(u, v))

    def sub(self, u: Sequence, v: Sequence) -> tuple:
        return tuple(rat(a) - rat(b) for a, b in zip(u, v))

    # -- Weyl group ---------------------------------------------------------

    def reflect(self, v: Sequence, alpha: Root) -> tuple:
        """s_alpha on a coordinate vector."""
        c = _dot(self.coroot(alpha), v)
        return tuple(rat(x) - c * a for x, a in zip(v, alpha))

    def simple_reflection(self, c: int) -> SignedPerm:
        m = self.m
        if not 1 <= c <= self.rank:
            raise ValueError(f"simple reflection index {c} out of range 1..{self.rank}")
        img = list(range(1, m + 1))
        if c < m:
            img[c - 1], img[c] = c + 1, c
        elif self.tag == "sp":
            img[m - 1] = -m
        else:
            img[m - 2], img[m - 1] = -m, -(m - 1)
        return SignedPerm(tuple(img))

    def word_element(self, word: Sequence[int]) -> SignedPerm:
        g = SignedPerm.identity(self.m)
        for c in word:
            g = g * self.simple_reflection(c)
        return g

    def weyl_group(self) -> list[SignedPerm]:
        m = self.m
        perms = [tuple(p) for p in permutations(range(1, m + 1))]
        if self.tag == "gl":
            return [SignedPerm(p) for p in perms]
        out = []
        for p in perms:
            for signs in product((1, -1), repeat=m):
                g = SignedPerm(tuple(s * k for s, k in zip(signs, p)))
                if self.tag == "so" and g.flips % 2:
                    continue
                out.append(g)
        return out

    def extended_group(self) -> list[SignedPerm]:
        """The Weyl group extended by tau (the flip of eta_m) for so_2m."""
        if self.tag != "so":
            return self.weyl_group()
        m = self.m
        return [
            SignedPerm(tuple(s * k for s, k in zip(signs, p)))
            for p in permutations(range(1, m + 1))
            for signs in product((1, -1), repeat=m)
        ]

    def tau(self) -> SignedPerm:
        if self.tag != "so":
            raise ValueError("tau is defined for so_2m only")
        img = list(range(1, self.m + 1))
        img[-1] = -self.m
        return SignedPerm(tuple(img))

    def in_weyl_group(self, g: SignedPerm) -> bool:
        if self.tag == "gl":
            return g.flips == 0
        if self.tag == "so":
            return g.flips % 2 == 0
        return True

    # -- root vectors in the defining representation ------------------------

    @property
    def defining_dim(self) -> int:
        return self.m if self.tag == "gl" else 2 * self.m

    def pos(self, a: int) -> int:
        """Row index of the basis vector with label a in the defining module."""
        if self.tag == "gl":
            return a - 1
        return a + self.m if a < 0 else a + self.m - 1

    def label_indices(self) -> list[int]:
        m = self.m
        if self.tag == "gl":
            return list(range(1, m + 1))
        return list(range(-m, 0)) + list(range(1, m + 1))

    def basis_matrix(self, a: int, b: int) -> QMat:
        """E_ab for gl, F_ab for sp/so, as a defining-representation matrix."""
        d = self.defining_dim
        e = QMat.unit(d, d, self.pos(a), self.pos(b))
        if self.tag == "gl":
            return e
        sgn = 1 if self.tag == "so" else _sgn(a) * _sgn(b)
        return e - QMat.unit(d, d, self.pos(-b), self.pos(-a)).scale(sgn)

    def canonical_pairs(self) -> list[tuple[int, int]]:
        """Index pairs whose F_ab form a basis of the Lie algebra."""
        idx = self.label_indices()
        if self.tag == "gl":
            return [(a, b) for a in idx for b in idx]
        out = []
        for a in idx:
            for b in idx:
                if (a, b) > (-b, -a):
                    continue
                if self.tag == "so" and a == -b:
                    continue
                out.append((a, b))
        return out

    def canonical(self, a: int, b: int) -> tuple[tuple[int, int], int]:
        """(pair, sign) with F_ab = sign * F_pair; sign 0 when F_ab vanishes."""
        if self.tag == "gl" or (a, b) <= (-b, -a):
            if self.tag == "so" and a == -b:
                return (a, b), 0
            return (a, b), 1
        sgn = -1 if self.tag == "so" else -_sgn(a) * _sgn(b)
        return (-b, -a), sgn

    def decompose(self, mat: QMat) -> dict:
        """Coordinates of a defining-representation Lie element in the F basis."""
        out = {}
        for a, b in self.canonical_pairs():
            c = mat[self.pos(a), self.pos(b)]
            if self.tag == "sp" and a == -b:
                c = c / 2
            if c:
                out[(a, b)] = c
        recon = self.lie_matrix(out)
        if recon != mat:
            raise ValueError("matrix does not lie in the Lie algebra")
        return out

    def lie_matrix(self, elem: dict) -> QMat:
        d = self.defining_dim
        acc = QMat.zeros(d, d)
        for (a, b), c in elem.items():
            acc = acc + self.basis_matrix(a, b).scale(c)
        return acc

    def cartan_element(self, coroot: Sequence) -> dict:
        """The Lie element H with lam(H) = <coords(lam), coroot>."""
        m = self.m
        out = {}
        for j, c in enumerate(coroot, start=1):
            if not c:
                continue
            a = j if self.tag == "gl" else j - m - 1
            out[(a, a)] = out.get((a, a), ZERO) + rat(c)
        return out

    def _root_pair(self, alpha: Root) -> tuple[int, int, Fraction]:
        """(a, b, scale) with E_alpha = scale * F_ab (or E_ab for gl)."""
        m = self.m
        nz = [(j, c) for j, c in enumerate(alpha, start=1) if c]
        if self.tag == "gl":
            (a, _), (b, _) = nz
            return a, b, ONE
        if len(nz) == 1:
            j = nz[0][0] - m - 1
            return j, -j, Fraction(1, 2)
        (ja, ca), (jb, cb) = nz
        a, b = ja - m - 1, jb - m - 1
        if cb < 0:
            return a, b, ONE
        return a, -b, ONE

    def root_vectors(self, alpha: Root) -> tuple[dict, dict, dict]:
        """(E, F, H) as Lie elements for a positive root, with [E, F] = H."""
        return self._root_vector_cache[tuple(alpha)]

    @cached_property
    def _root_vector_cache(self) -> dict:
        out = {}
        for alpha in self.positive_roots:
            a, b, s = self._root_pair(alpha)
            e_mat = self.basis_matrix(a, b).scale(s)
            h = self.cartan_element(self.coroot(alpha))
            h_mat = self.lie_matrix(h)
            f_raw = e_mat.T
            br = commutator(e_mat, f_raw)
            # find the scalar c with [E, c E^T] = H
            i, j = next((i, j) for i in range(h_mat.nrows) for j in range(h_mat.ncols) if h_mat[i, j])
            c = h_mat[i, j] / br[i, j]
            f_mat = f_raw.scale(c)
            if commutator(e_mat, f_mat) != h_mat:
                raise RuntimeError(f"cannot normalize root vectors for {alpha}")
            if commutator(h_mat, e_mat) != e_mat.scale(2) or commutator(h_mat, f_mat) != f_mat.scale(-2):
                raise RuntimeError(f"sl2 relations fail for {alpha}")
            out[tuple(alpha)] = (self.decompose(e_mat), self.decompose(f_mat), h)
        return out

    def pair_weight(self, a: int, b: int) -> tuple:
        """Adjoint weight (coordinates) of the basis element E_ab / F_ab."""
        m = self.m
        v = [0] * m
        if self.tag == "gl":
            v[a - 1] += 1
            v[b - 1] -= 1
            return tuple(v)
        # F_ab with a, b labels: weight eta-coordinate of index a minus b,
        # where label index a<0 is eta_{a+m+1} and a>0 is -eta_{m+1-a}.
        for idx, sgn in ((a, 1), (b, -1)):
            if idx < 0:
                v[idx + m] += sgn
            else:
                v[m - idx] -= sgn
        return tuple(v)


def _sgn(a: int) -> int:
    return 1 if a > 0 else -1


def build_root_datum(kind: LieKind, theta: int, n: int) -> RootDatum:
    return RootDatum(kind, theta, n)


def datum(tag: str, m: int, theta: int = -1, n: int = 1) -> RootDatum:
    return RootDatum(LieKind(tag, m), theta, n)


def shifted_action(d: RootDatum, sigma: SignedPerm, lam: Sequence) -> tuple:
    """sigma o lam = sigma(lam + rho) - rho, in labels."""
    if sigma.m != d.m:
        raise ValueError("signed permutation has the wrong size")
    rho = d.to_coords(d.rho)
    v = d.add(d.to_coords(lam), rho)
    return d.to_labels(d.sub(sigma.act(v), rho))


def is_nonsingular(d: RootDatum, lam_plus_rho: Sequence) -> bool:
    """True iff (lam+rho)(H_alpha) avoids -1, -2, ... for every positive root."""
    for alpha in d.positive_roots:
        p = d.coroot_pairing(lam_plus_rho, alpha)
        if p.denominator == 1 and p < 0:
            return False
    return True


def weight_is_nonsingular(d: RootDatum, lam: Sequence) -> bool:
    return is_nonsingular(d, d.add(lam, d.rho))


def normal_ordering(d: RootDatum, word: Sequence[int]) -> list[Root]:
    """beta_k = s_{d_1} ... s_{d_{k-1}}(alpha_{d_k}); rejects non-reduced words."""
    out: list[Root] = []
    g = SignedPerm.identity(d.m)
    positive = set(d.positive_roots)
    for c in word:
        if not 1 <= c <= d.rank:
            raise ValueError(f"simple reflection index {c} out of range 1..{d.rank}")
        beta = tuple(int(x) for x in g.act(d.simple_roots[c - 1]))
        if beta not in positive or beta in out:
            raise ValueError(f"word {tuple(word)} is not reduced")
        out.append(beta)
        g = g * d.simple_reflection(c)
    return out


def longest_word(d: RootDatum) -> tuple[int, ...]:
    """Greedy reduced word for the longest element.

    Start from rho and repeatedly apply the first simple reflection whose
    coroot pairs positively; for gl_3 this gives (1, 2, 1).
    """
    v = d.to_coords(d.rho)
    word = []
    while True:
        c = next(
            (c for c in range(1, d.rank + 1) if _dot(d.coroot(d.simple_roots[c - 1]), v) > 0),
            None,
        )
        if c is None:
            break
        word.append(c)
        v = d.reflect(v, d.simple_roots[c - 1])
    word = tuple(word)
    if len(word) != len(d.positive_roots):
        raise RuntimeError("greedy word does not reach the longest element")
    return word


def reduced_words(d: RootDatum, limit: int | None = None) -> list[tuple[int, ...]]:
    """All reduced words of the longest element (depth-first, lexicographic)."""
    target = len(d.positive_roots)
    out: list[tuple[int, ...]] = []

    def dfs(v, word):
        if limit is not None and len(out) >= limit:
            return
        if len(word) == target:
            out.append(tuple(word))
            return
        for c in range(1, d.rank + 1):
            alpha = d.simple_roots[c - 1]
            if _dot(d.coroot(alpha), v) > 0:
                dfs(d.reflect(v, alpha), word + [c])

    dfs(d.to_coords(d.rho), [])
    return out


def extended_stabilizer_equal(d: RootDatum, lam: Sequence) -> bool:
    """True iff every extended-group element fixing lam (shifted action) is in W."""
    if d.tag != "so":
        return True
    lam = _vec(lam)
    return all(
        d.in_weyl_group(g) for g in d.extended_group() if shifted_action(d, g, lam) == lam
    )


def defining_root_vectors(d: RootDatum, alpha: Root) -> tuple[QMat, QMat, QMat]:
    e, f, h = d.root_vectors(alpha)
    return d.lie_matrix(e), d.lie_matrix(f), d.lie_matrix(h)


def longest_element(d: RootDatum) -> SignedPerm:
    return d.word_element(longest_word(d))
