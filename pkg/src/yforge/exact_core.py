"""Exact rational arithmetic: polynomials, rational functions, matrices.

Everything here works over ``fractions.Fraction``.  Matrices are immutable
tuples of tuples; the linear solvers use a sparse incremental echelon form
with first-nonzero pivots so that every basis they return is reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd, isqrt
from typing import Iterable, Iterator, Sequence

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rat_str(value: Fraction) -> str:
    """Serialize a rational as ``"p/q"`` (always with an explicit denominator)."""
    value = rat(value)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# Polynomials


def _trim(coeffs: Iterable) -> tuple:
    out = [rat(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class Poly:
    """Univariate polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim(coeffs)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def linear(cls, root) -> "Poly":
        """The monic polynomial ``x - root``."""
        return cls((-rat(root), 1))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = cls.const(1)
        for r in roots:
            p = p * cls.linear(r)
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no monic form")
        lc = self.lead
        return Poly(c / lc for c in self.coeffs)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("Poly", self.coeffs))

    def __repr__(self) -> str:
        return f"Poly({self.pretty()})"

    def pretty(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = str(abs(c)) + ("*" + mono if mono else "")
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly(c * other for c in self.coeffs)
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(e):
            out = out * self
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lead
        quo = [ZERO] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            f = c / lc
            quo[k - dq] = f
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] -= f * b
        return Poly(quo), Poly(rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __call__(self, x):
        acc = ZERO if not isinstance(x, Poly) else Poly()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, c) -> "Poly":
        """Return ``p(x + c)``."""
        return self(Poly((rat(c), 1))) if self.coeffs else Poly()

    def neg_x(self) -> "Poly":
        """Return ``p(-x)``."""
        return Poly(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs))

    def derivative(self) -> "Poly":
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)

    def to_json(self) -> list[str]:
        return [rat_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "Poly":
        return cls(rat(c) for c in data)


def _as_poly(value) -> Poly:
    if isinstance(value, Poly):
        return value
    return Poly.const(rat(value))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero only when both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(p: Poly) -> list[Fraction]:
    """All rational roots of ``p`` with multiplicity, sorted ascending."""
    if p.is_zero():
        raise ValueError("the zero polynomial has every number as a root")
    roots: list[Fraction] = []
    coeffs = list(p.coeffs)
    while coeffs and coeffs[0] == 0:
        roots.append(ZERO)
        coeffs.pop(0)
    rest = Poly(coeffs)
    if rest.degree <= 0:
        return sorted(roots)
    lcm = 1
    for c in rest.coeffs:
        lcm = lcm * c.denominator // gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in rest.coeffs]
    candidates = set()
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            candidates.add(Fraction(num, den))
            candidates.add(Fraction(-num, den))
    for cand in sorted(candidates):
        lin = Poly.linear(cand)
        while rest.degree > 0:
            q, r = rest.divmod(lin)
            if not r.is_zero():
                break
            roots.append(cand)
            rest = q
    return sorted(roots)


# ---------------------------------------------------------------------------
# Rational functions


class RatFn:
    """Reduced rational function ``num/den`` with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduced: bool = False):
        num = _as_poly(num)
        den = Poly.const(1) if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly.const(1)
            return
        if not reduced:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        lc = den.lead
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        self.num, self.den = num, den

    @classmethod
    def from_roots(cls, num_roots: Iterable, den_roots: Iterable) -> "RatFn":
        return cls(Poly.from_roots(num_roots), Poly.from_roots(den_roots))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFn):
            try:
                other = RatFn(_as_poly(other))
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash(("RatFn", self.num.coeffs, self.den.coeffs))

    def __repr__(self) -> str:
        if self.den.degree == 0:
            return f"RatFn({self.num.pretty()})"
        return f"RatFn(({self.num.pretty()}) / ({self.den.pretty()}))"

    def __neg__(self) -> "RatFn":
        return RatFn(-self.num, self.den, reduced=True)

    def __add__(self, other) -> "RatFn":
        other = _as_ratfn(other)
        return RatFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFn":
        return self + (-_as_ratfn(other))

    def __rsub__(self, other) -> "RatFn":
        return _as_ratfn(other) - self

    def __mul__(self, other) -> "RatFn":
        other = _as_ratfn(other)
        return RatFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFn":
        other = _as_ratfn(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFn":
        return _as_ratfn(other) / self

    def __call__(self, x) -> Fraction:
        d = self.den(rat(x))
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(rat(x)) / d

    def neg_x(self) -> "RatFn":
        return RatFn(self.num.neg_x(), self.den.neg_x())

    def shift(self, c) -> "RatFn":
        return RatFn(self.num.shift(c), self.den.shift(c))

    def laurent_at_infinity(self, upto: int) -> list[Fraction]:
        """Coefficients of ``x^0, x^-1, ..., x^-upto`` of the expansion at infinity."""
        if self.num.degree > self.den.degree:
            raise ValueError("expansion at infinity has a polynomial part")
        return _laurent(self.num.coeffs, self.den, upto)


def _as_ratfn(value) -> RatFn:
    if isinstance(value, RatFn):
        return value
    return RatFn(_as_poly(value))


def _laurent(num_coeffs: Sequence, den: Poly, upto: int, zero=ZERO) -> list:
    """Expand ``num/den`` at infinity, where deg num <= deg den.

    ``num_coeffs`` may hold scalars or matrices (anything supporting + and
    scalar *).  Returns coefficients of x^0 .. x^-upto.
    """
    d = den.degree
    lc = den.lead
    # num(x)/den(x) = sum_r c_r x^{-r};  num = den * sum c_r x^{-r}.
    # Matching the coefficient of x^{d-r}: num_{d-r} = sum_j den_{d-j} c_{r-j}.
    out: list = []
    for r in range(upto + 1):
        acc = num_coeffs[d - r] if 0 <= d - r < len(num_coeffs) else zero
        for j in range(1, min(r, d) + 1):
            c = den[d - j]
            if c:
                acc = acc - out[r - j] * c
        out.append(acc * (1 / lc))
    return out


# ---------------------------------------------------------------------------
# Matrices


class QMat:
    """Immutable dense rational matrix."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self.rows = tuple(tuple(rat(v) for v in row) for row in rows)
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        self.ncols = ncols
        for row in self.rows:
            if len(row) != ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def _raw(cls, rows: tuple, nrows: int, ncols: int) -> "QMat":
        obj = object.__new__(cls)
        obj.rows, obj.nrows, obj.ncols = rows, nrows, ncols
        return obj

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "QMat":
        ncols = nrows if ncols is None else ncols
        return cls._raw(tuple((ZERO,) * ncols for _ in range(nrows)), nrows, ncols)

    @classmethod
    def identity(cls, d: int) -> "QMat":
        return cls._raw(
            tuple(tuple(ONE if i == j else ZERO for j in range(d)) for i in range(d)), d, d
        )

    @classmethod
    def scalar(cls, d: int, c) -> "QMat":
        c = rat(c)
        return cls._raw(
            tuple(tuple(c if i == j else ZERO for j in range(d)) for i in range(d)), d, d
        )

    @classmethod
    def unit(cls, nrows: int, ncols: int, i: int, j: int) -> "QMat":
        return cls._raw(
            tuple(
                tuple(ONE if (r, c) == (i, j) else ZERO for c in range(ncols))
                for r in range(nrows)
            ),
            nrows,
            ncols,
        )

    @classmethod
    def diag(cls, entries: Sequence) -> "QMat":
        d = len(entries)
        return cls(
            [[entries[i] if i == j else 0 for j in range(d)] for i in range(d)], ncols=d
        )

    @classmethod
    def column(cls, vec: Sequence) -> "QMat":
        return cls([[v] for v in vec], ncols=1)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "QMat":
        return cls([[col[i] for col in cols] for i in range(nrows)], ncols=len(cols))

    @classmethod
    def from_flat(cls, flat: Sequence, nrows: int, ncols: int) -> "QMat":
        return cls._raw(
            tuple(tuple(flat[i * ncols:(i + 1) * ncols]) for i in range(nrows)), nrows, ncols
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    def flat(self) -> tuple:
        return tuple(v for row in self.rows for v in row)

    def __eq__(self, other) -> bool:
        return isinstance(other, QMat) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(v) for v in row) for row in self.rows)
        return f"QMat[{self.nrows}x{self.ncols}]({body})"

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.rows for v in row)

    def __add__(self, other: "QMat") -> "QMat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return QMat._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.nrows,
            self.ncols,
        )

    def __sub__(self, other: "QMat") -> "QMat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return QMat._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.nrows,
            self.ncols,
        )

    def __neg__(self) -> "QMat":
        return QMat._raw(tuple(tuple(-a for a in r) for r in self.rows), self.nrows, self.ncols)

    def scale(self, c) -> "QMat":
        c = rat(c)
        if c == 0:
            return QMat.zeros(self.nrows, self.ncols)
        return QMat._raw(tuple(tuple(a * c for a in r) for r in self.rows), self.nrows, self.ncols)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self @ other

    __rmul__ = scale

    def __matmul__(self, other: "QMat") -> "QMat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.ncols
        orows = other.rows
        out = []
        for row in self.rows:
            acc = [ZERO] * ocols
            for k, a in enumerate(row):
                if a == 0:
                    continue
                brow = orows[k]
                for j in range(ocols):
                    b = brow[j]
                    if b:
                        acc[j] += a * b
            out.append(tuple(acc))
        return QMat._raw(tuple(out), self.nrows, ocols)

    def apply(self, vec: Sequence) -> tuple:
        return tuple(sum((a * v for a, v in zip(row, vec) if a and v), ZERO) for row in self.rows)

    @property
    def T(self) -> "QMat":
        return QMat._raw(tuple(zip(*self.rows)) if self.rows else (), self.ncols, self.nrows) \
            if self.nrows else QMat.zeros(self.ncols, 0)

    def kron(self, other: "QMat") -> "QMat":
        rows = []
        for ra in self.rows:
            for rb in other.rows:
                rows.append(tuple(a * b for a in ra for b in rb))
        return QMat._raw(tuple(rows), self.nrows * other.nrows, self.ncols * other.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMat":
        return QMat._raw(
            tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(rows), len(cols)
        )

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(min(self.shape))), ZERO)

    def rank(self) -> int:
        ech = Echelon(self.ncols)
        for row in self.rows:
            ech.add(row)
        return ech.rank

    def inverse(self) -> "QMat":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        d = self.nrows
        aug = [list(row) + [ONE if i == j else ZERO for j in range(d)] for i, row in enumerate(self.rows)]
        for c in range(d):
            piv = next((r for r in range(c, d) if aug[r][c] != 0), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            aug[c], aug[piv] = aug[piv], aug[c]
            inv = 1 / aug[c][c]
            aug[c] = [v * inv for v in aug[c]]
            for r in range(d):
                if r != c and aug[r][c] != 0:
                    f = aug[r][c]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
        return QMat(row[d:] for row in aug)

    def det(self) -> Fraction:
        d = self.nrows
        a = [list(r) for r in self.rows]
        det = ONE
        for c in range(d):
            piv = next((r for r in range(c, d) if a[r][c] != 0), None)
            if piv is None:
                return ZERO
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            det *= a[c][c]
            inv = 1 / a[c][c]
            for r in range(c + 1, d):
                if a[r][c] != 0:
                    f = a[r][c] * inv
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det


def commutator(a: QMat, b: QMat) -> QMat:
    return a @ b - b @ a


def block_matrix(blocks: Sequence[Sequence[QMat]]) -> QMat:
    rows = []
    for brow in blocks:
        for i in range(brow[0].nrows):
            rows.append(tuple(v for blk in brow for v in blk.rows[i]))
    return QMat(rows)


# ---------------------------------------------------------------------------
# Incremental sparse echelon form


class Echelon:
    """Rows kept in semi-echelon form (distinct leading columns, leading 1).

    Rows are sparse dicts column -> value.  ``add`` reduces a new row and keeps
    it when independent; the first nonzero column is always the pivot.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row) -> dict[int, Fraction]:
        if isinstance(row, dict):
            r = {k: v for k, v in row.items() if v}
        else:
            r = {k: rat(v) for k, v in enumerate(row) if v}
        pivots = self.pivots
        while r:
            hit = [c for c in r if c in pivots]
            if not hit:
                break
            c = min(hit)
            f = r[c]
            for k, v in pivots[c].items():
                nv = r.get(k, ZERO) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        return r

    def add(self, row) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        lead = min(r)
        inv = 1 / r[lead]
        self.pivots[lead] = {k: v * inv for k, v in r.items()}
        return True

    def contains(self, row) -> bool:
        return not self.reduce(row)

    def rref_rows(self) -> list[dict[int, Fraction]]:
        """Fully reduced rows sorted by pivot column."""
        order = sorted(self.pivots)
        rows = {c: dict(self.pivots[c]) for c in order}
        for c in reversed(order):
            pr = rows[c]
            for c2 in order:
                if c2 >= c:
                    break
                r = rows[c2]
                f = r.get(c)
                if f:
                    for k, v in pr.items():
                        nv = r.get(k, ZERO) - f * v
                        if nv:
                            r[k] = nv
                        else:
                            r.pop(k, None)
        return [rows[c] for c in order]

    def null_space(self) -> list[tuple]:
        """Basis of the solution space of (rows) v = 0, echelon-normalized."""
        rref = self.rref_rows()
        pivot_of = {min(r): r for r in rref}
        free = [c for c in range(self.ncols) if c not in pivot_of]
        basis = []
        for f in free:
            v = [ZERO] * self.ncols
            v[f] = ONE
            for p, r in pivot_of.items():
                coef = r.get(f)
                if coef:
                    v[p] = -coef
            basis.append(tuple(v))
        return echelon_basis(basis, self.ncols)


def echelon_basis(vectors: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Reduced row echelon basis of the span of ``vectors``."""
    vectors = list(vectors)
    if ncols is None:
        if not vectors:
            return []
        ncols = len(vectors[0])
    ech = Echelon(ncols)
    for v in vectors:
        ech.add(v)
    out = []
    for r in ech.rref_rows():
        out.append(tuple(r.get(k, ZERO) for k in range(ncols)))
    return out


def null_space(rows: Sequence[Sequence], ncols: int) -> list[tuple]:
    ech = Echelon(ncols)
    for row in rows:
        ech.add(row)
    return ech.null_space()


def mat_kernel(M: QMat) -> list[QMat]:
    """Basis of ker M as column matrices, in reduced echelon normalization."""
    return [QMat.column(v) for v in null_space(M.rows, M.ncols)]


def span_rank(vectors: Sequence[Sequence], ncols: int) -> int:
    ech = Echelon(ncols)
    for v in vectors:
        ech.add(v)
    return ech.rank


def same_span(a: Sequence[Sequence], b: Sequence[Sequence], ncols: int) -> bool:
    ra, rb = span_rank(a, ncols), span_rank(b, ncols)
    return ra == rb == span_rank(list(a) + list(b), ncols)


# ---------------------------------------------------------------------------
# Matrix algebra closure utilities


def _square_size(gens: Sequence[QMat], d: int | None) -> int:
    if d is None:
        if not gens:
            raise ValueError("matrix size must be given when there are no generators")
        d = gens[0].nrows
    for g in gens:
        if g.shape != (d, d):
            raise ValueError("generators must be square of equal size")
    return d


def algebra_basis(gens: Sequence[QMat], d: int | None = None) -> list[QMat]:
    """A spanning basis of the unital algebra generated by ``gens``."""
    d = _square_size(gens, d)
    ech = Echelon(d * d)
    basis: list[QMat] = []
    frontier = [QMat.identity(d)]
    ech.add(frontier[0].flat())
    basis.append(frontier[0])
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                p = g @ a
                if ech.add(p.flat()):
                    basis.append(p)
                    new.append(p)
                    if len(basis) > d * d:
                        raise RuntimeError("span closure exceeded d^2; arithmetic bug")
        frontier = new
    return basis


def burnside_dimension(gens: Sequence[QMat], d: int | None = None) -> int:
    """Dimension of the unital matrix algebra generated by ``gens``."""
    return len(algebra_basis(gens, d))


def intertwiner_space(pairs: Sequence[tuple[QMat, QMat]], dim_source: int, dim_target: int) -> list[QMat]:
    """Basis of {X : B X = X A for every (A, B) in pairs}, X of size target x source."""
    ns, nt = dim_source, dim_target
    ech = Echelon(ns * nt)
    full = ns * nt
    for a, b in pairs:
        if a.shape != (ns, ns) or b.shape != (nt, nt):
            raise ValueError("intertwiner pair has the wrong shape")
        for i in range(nt):
            brow = b.rows[i]
            for j in range(ns):
                # (B X)_{ij} - (X A)_{ij}
                row: dict[int, Fraction] = {}
                for k in range(nt):
                    v = brow[k]
                    if v:
                        row[k * ns + j] = row.get(k * ns + j, ZERO) + v
                for k in range(ns):
                    v = a.rows[k][j]
                    if v:
                        row[i * ns + k] = row.get(i * ns + k, ZERO) - v
                ech.add(row)
                if ech.rank == full:
                    return []
    return [QMat.from_flat(v, nt, ns) for v in ech.null_space()]


def commutant_basis(gens: Sequence[QMat], d: int | None = None) -> list[QMat]:
    """Basis of {X : XA = AX for all A in gens}."""
    d = _square_size(gens, d)
    return intertwiner_space([(g, g) for g in gens], d, d)


# ---------------------------------------------------------------------------
# Matrices over rational functions


class RFMat:
    """Matrix of rational functions stored over a common monic denominator.

    ``num`` is the list of matrix coefficients of the numerator polynomial
    (lowest degree first) and ``den`` the shared denominator.  Entries are
    exposed as reduced ``RatFn`` values through :meth:`entry`.
    """

    __slots__ = ("num", "den", "nrows", "ncols")

    def __init__(self, num: Sequence[QMat], den: Poly | None = None, shape: tuple[int, int] | None = None):
        num = list(num)
        if shape is None:
            if not num:
                raise ValueError("shape required for an empty numerator")
            shape = num[0].shape
        while num and num[-1].is_zero():
            num.pop()
        den = Poly.const(1) if den is None else den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if den.lead != 1:
            inv = 1 / den.lead
            num = [c.scale(inv) for c in num]
            den = den * inv
        self.num = tuple(num)
        self.den = den
        self.nrows, self.ncols = shape

    @classmethod
    def constant(cls, m: QMat) -> "RFMat":
        return cls([m], Poly.const(1), m.shape)

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[RatFn]]) -> "RFMat":
        nrows = len(entries)
        ncols = len(entries[0]) if nrows else 0
        den = Poly.const(1)
        for row in entries:
            for e in row:
                e = _as_ratfn(e)
                den = den * (e.den // poly_gcd(den, e.den))
        deg = 0
        scaled = []
        for row in entries:
            srow = []
            for e in row:
                e = _as_ratfn(e)
                p = e.num * (den // e.den)
                deg = max(deg, p.degree)
                srow.append(p)
            scaled.append(srow)
        num = [
            QMat([[p[k] for p in srow] for srow in scaled], ncols=ncols) for k in range(deg + 1)
        ]
        return cls(num, den, (nrows, ncols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def num_degree(self) -> int:
        return len(self.num) - 1

    def is_zero(self) -> bool:
        return not self.num

    def entry(self, i: int, j: int) -> RatFn:
        return RatFn(Poly(c.rows[i][j] for c in self.num), self.den)

    def entries(self) -> list[list[RatFn]]:
        return [[self.entry(i, j) for j in range(self.ncols)] for i in range(self.nrows)]

    def num_coeff(self, k: int) -> QMat:
        return self.num[k] if 0 <= k < len(self.num) else QMat.zeros(self.nrows, self.ncols)

    def evaluate(self, x0) -> QMat:
        x0 = rat(x0)
        d = self.den(x0)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x0}")
        acc = QMat.zeros(self.nrows, self.ncols)
        for c in reversed(self.num):
            acc = acc.scale(x0) + c
        return acc.scale(1 / d)

    def with_den(self, den: Poly) -> "RFMat":
        """Rewrite over a multiple ``den`` of the current denominator."""
        q, r = den.divmod(self.den)
        if not r.is_zero():
            raise ValueError("new denominator is not a multiple of the old one")
        return RFMat(_polymat_mul_scalar(self.num, q, self.shape), den, self.shape)

    def _common(self, other: "RFMat") -> tuple["RFMat", "RFMat"]:
        if self.den == other.den:
            return self, other
        g = poly_gcd(self.den, other.den)
        den = self.den * (other.den // g)
        return self.with_den(den), other.with_den(den)

    def __add__(self, other: "RFMat") -> "RFMat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        a, b = self._common(other)
        n = max(len(a.num), len(b.num))
        return RFMat([a.num_coeff(k) + b.num_coeff(k) for k in range(n)], a.den, a.shape)

    def __neg__(self) -> "RFMat":
        return RFMat([-c for c in self.num], self.den, self.shape)

    def __sub__(self, other: "RFMat") -> "RFMat":
        return self + (-other)

    def __matmul__(self, other: "RFMat") -> "RFMat":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        shape = (self.nrows, other.ncols)
        if not self.num or not other.num:
            return RFMat([], self.den * other.den, shape)
        out = [QMat.zeros(*shape) for _ in range(len(self.num) + len(other.num) - 1)]
        for i, a in enumerate(self.num):
            for j, b in enumerate(other.num):
                out[i + j] = out[i + j] + a @ b
        return RFMat(out, self.den * other.den, shape)

    def scale(self, f) -> "RFMat":
        """Multiply by a scalar rational function (or rational / polynomial)."""
        f = _as_ratfn(f)
        return RFMat(_polymat_mul_scalar(self.num, f.num, self.shape), self.den * f.den, self.shape)

    def times_matrix(self, m: QMat, left: bool = True) -> "RFMat":
        if left:
            return RFMat([m @ c for c in self.num], self.den, (m.nrows, self.ncols))
        return RFMat([c @ m for c in self.num], self.den, (self.nrows, m.ncols))

    def neg_x(self) -> "RFMat":
        return RFMat(
            [c if k % 2 == 0 else -c for k, c in enumerate(self.num)], self.den.neg_x(), self.shape
        )

    def shift(self, c) -> "RFMat":
        """Substitute x -> x + c."""
        c = rat(c)
        deg = len(self.num)
        out = [QMat.zeros(*self.shape) for _ in range(deg)]
        for k, coef in enumerate(self.num):
            # (x + c)^k = sum_j binom(k, j) c^{k-j} x^j
            binom = 1
            for j in range(k + 1):
                if j:
                    binom = binom * (k - j + 1) // j
                out[j] = out[j] + coef.scale(binom * c ** (k - j))
        return RFMat(out, self.den.shift(c), self.shape)

    def kron(self, other: "RFMat") -> "RFMat":
        shape = (self.nrows * other.nrows, self.ncols * other.ncols)
        if not self.num or not other.num:
            return RFMat([], self.den * other.den, shape)
        out = [QMat.zeros(*shape) for _ in range(len(self.num) + len(other.num) - 1)]
        for i, a in enumerate(self.num):
            for j, b in enumerate(other.num):
                out[i + j] = out[i + j] + a.kron(b)
        return RFMat(out, self.den * other.den, shape)

    def transpose(self) -> "RFMat":
        return RFMat([c.T for c in self.num], self.den, (self.ncols, self.nrows))

    def conj(self, left: QMat, right: QMat) -> "RFMat":
        """Return ``left @ self @ right`` (constant outer factors)."""
        return RFMat([left @ c @ right for c in self.num], self.den, (left.nrows, right.ncols))

    def equals(self, other: "RFMat") -> bool:
        if self.shape != other.shape:
            return False
        lhs = _polymat_mul_scalar(self.num, other.den, self.shape)
        rhs = _polymat_mul_scalar(other.num, self.den, self.shape)
        n = max(len(lhs), len(rhs))
        zero = QMat.zeros(*self.shape)
        return all(
            (lhs[k] if k < len(lhs) else zero) == (rhs[k] if k < len(rhs) else zero)
            for k in range(n)
        )

    def proper(self) -> bool:
        """True when every entry has numerator degree <= denominator degree."""
        return len(self.num) - 1 <= self.den.degree

    def laurent(self, upto: int) -> list[QMat]:
        if not self.proper():
            raise ValueError("matrix series has a polynomial part at infinity")
        if not self.num:
            return [QMat.zeros(*self.shape) for _ in range(upto + 1)]
        return _laurent(list(self.num), self.den, upto, QMat.zeros(*self.shape))

    def coeff_at_infinity(self, r: int) -> QMat:
        return self.laurent(r)[r]

    def reduced(self) -> "RFMat":
        """Cancel common factors of the denominator and all numerator entries."""
        g = self.den
        for c in _entry_polys(self):
            if g.degree == 0:
                break
            g = poly_gcd(g, c)
        if g.degree <= 0:
            return self
        polys = [[p // g for p in row] for row in _entry_poly_grid(self)]
        deg = max((p.degree for row in polys for p in row), default=-1)
        num = [QMat([[p[k] for p in row] for row in polys], ncols=self.ncols) for k in range(deg + 1)]
        return RFMat(num, self.den // g, self.shape)


def _entry_poly_grid(m: RFMat) -> list[list[Poly]]:
    return [[Poly(c.rows[i][j] for c in m.num) for j in range(m.ncols)] for i in range(m.nrows)]


def _entry_polys(m: RFMat) -> list[Poly]:
    return [p for row in _entry_poly_grid(m) for p in row if not p.is_zero()]


def _polymat_mul_scalar(num: Sequence[QMat], p: Poly, shape: tuple[int, int]) -> list[QMat]:
    if not num or p.is_zero():
        return []
    out = [QMat.zeros(*shape) for _ in range(len(num) + len(p.coeffs) - 1)]
    for i, c in enumerate(num):
        for j, s in enumerate(p.coeffs):
            if s:
                out[i + j] = out[i + j] + c.scale(s)
    return out


def rf_coeff_at_infinity(M: RFMat, r: int) -> QMat:
    """Coefficient of x^{-r} in the entrywise expansion of ``M`` at infinity."""
    return M.coeff_at_infinity(r)


def rfmat_identity(d: int) -> RFMat:
    return RFMat.constant(QMat.identity(d))


def _minimal_data(c: QMat) -> tuple[Poly, list[QMat]]:
    d = c.nrows
    powers = [QMat.identity(d)]
    ech = Echelon(d * d)
    ech.add(powers[0].flat())
    while True:
        nxt = powers[-1] @ c
        if not ech.add(nxt.flat()):
            break
        powers.append(nxt)
    k = len(powers)
    rel = null_space(QMat([p.flat() for p in powers + [powers[-1] @ c]]).T.rows, k + 1)
    if len(rel) != 1:
        raise RuntimeError("minimal polynomial not unique")
    return Poly(rel[0]).monic(), powers


def minimal_polynomial(c: QMat) -> Poly:
    return _minimal_data(c)[0]


def resolvent(c: QMat) -> RFMat:
    """The matrix ``(x + C)^{-1}`` as a matrix of rational functions.

    Uses the minimal polynomial p of C:  p(z) - p(w) = (z - w) Q(z, w) with
    z = C, w = -x gives (x + C)^{-1} = -Q(C, -x) / p(-x).
    """
    d = c.nrows
    minpoly, powers = _minimal_data(c)
    # Q(z, w) = sum_k p_k sum_{j<k} z^j w^{k-1-j}, with w = -x.
    deg = minpoly.degree
    out = [QMat.zeros(d, d) for _ in range(max(deg, 1))]
    for kk in range(1, deg + 1):
        pk = minpoly[kk]
        if pk == 0:
            continue
        for j in range(kk):
            e = kk - 1 - j
            out[e] = out[e] + powers_or(c, powers, j).scale(pk * (-1) ** e)
    den = minpoly.neg_x()
    return RFMat([m.scale(-1) for m in out], den, (d, d))


def powers_or(c: QMat, powers: list[QMat], j: int) -> QMat:
    while len(powers) <= j:
        powers.append(powers[-1] @ c)
    return powers[j]


def column_space_basis(vectors: Sequence[Sequence], d: int) -> QMat:
    """Columns forming a reduced echelon basis of the span (d x r)."""
    basis = echelon_basis(vectors, d)
    return QMat.from_columns(basis, d) if basis else QMat.zeros(d, 0)


def left_inverse(b: QMat) -> QMat:
    """L with L b = I for b of full column rank."""
    return (b.T @ b).inverse() @ b.T


def quotient_maps(kernel: Sequence[Sequence], d: int) -> tuple[QMat, QMat]:
    """(pi, iota): projection onto coordinates complementary to the kernel pivots.

    iota embeds the non-pivot unit vectors; pi reduces modulo the kernel and
    reads off the non-pivot coordinates, so pi iota = I and pi kills the kernel.
    """
    ech = Echelon(d)
    for v in kernel:
        ech.add(v)
    rows = ech.rref_rows()
    pivots = {min(r) for r in rows}
    free = [c for c in range(d) if c not in pivots]
    iota = QMat.from_columns([[ONE if k == f else ZERO for k in range(d)] for f in free], d) if free else QMat.zeros(d, 0)
    cols = []
    for i in range(d):
        r = ech.reduce({i: ONE})
        cols.append([r.get(f, ZERO) for f in free])
    pi = QMat.from_columns(cols, len(free)) if free else QMat.zeros(0, d)
    return pi, iota


def bivariate_zero(terms: Iterable[tuple[dict, QMat]]) -> bool:
    """Check that a sum of monomial-weighted matrices vanishes identically.

    ``terms`` yields (exponent dict {(p, q): coefficient}, matrix); the sum over
    all terms of coefficient * matrix at each (p, q) must be zero.
    """
    acc: dict[tuple[int, int], QMat] = {}
    for mono, mat in terms:
        for key, c in mono.items():
            if c == 0:
                continue
            contrib = mat.scale(c)
            acc[key] = acc[key] + contrib if key in acc else contrib
    return all(m.is_zero() for m in acc.values())


def all_vectors(ranges: Sequence[int]) -> Iterator[tuple]:
    return product(*(range(r) for r in ranges))
