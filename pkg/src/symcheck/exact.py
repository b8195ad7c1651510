"""Exact scalars, multivariate polynomials and linear algebra over Q and Q(i).

Everything in this module is immutable after construction and all operations
are pure.  The zero polynomial is the empty term map; there are no epsilon
comparisons anywhere.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence


class GaussianRational:
    """Exact element of Q(i), stored as a pair of Fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n: int):
        if n < 0:
            return GaussianRational(1) / self ** (-n)
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        """Squared modulus, an exact rational."""
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


I = GaussianRational(0, 1)

# A scalar is a Fraction or a GaussianRational; ints are accepted on input.
Scalar = object


def _is_zero(c) -> bool:
    return not c if isinstance(c, GaussianRational) else c == 0


def monomial_degree(alpha: Sequence[int]) -> int:
    return sum(alpha)


def monomials_of_degree(nvars: int, deg: int) -> list[tuple[int, ...]]:
    """All exponent vectors in `nvars` variables of total degree `deg`."""
    if nvars == 0:
        return [()] if deg == 0 else []
    out = []
    for head in range(deg, -1, -1):
        for tail in monomials_of_degree(nvars - 1, deg - head):
            out.append((head,) + tail)
    return out


def monomials_up_to_degree(nvars: int, deg: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(deg + 1):
        out.extend(monomials_of_degree(nvars, d))
    return out


class MultiPoly:
    """Multivariate polynomial with exact coefficients in canonical form.

    The term map sends exponent tuples of length `nvars` to nonzero scalars
    (Fraction or GaussianRational).  Two equal polynomials have identical
    term maps.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        cleaned = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != nvars:
                    raise ValueError(
                        f"exponent {exp} has length {len(exp)}, expected {nvars}"
                    )
                if isinstance(c, int):
                    c = Fraction(c)
                if not _is_zero(c):
                    cleaned[tuple(exp)] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, exp: Sequence[int], c=Fraction(1)) -> "MultiPoly":
        return cls(nvars, {tuple(exp): c})

    # -- ring structure -----------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable-count mismatch: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = MultiPoly.const(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp, 0) + c
            if _is_zero(s):
                terms.pop(exp, None)
            else:
                terms[exp] = s
        return MultiPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = MultiPoly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            if _is_zero(other) or (isinstance(other, int) and other == 0):
                return MultiPoly.zero(self.nvars)
            return MultiPoly(
                self.nvars, {e: c * other for e, c in self.terms.items()}
            )
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if _is_zero(s):
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return MultiPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = MultiPoly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = MultiPoly.const(self.nvars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    # -- queries --------------------------------------------------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def homogeneous_degree(self):
        """Common total degree of all terms, or None if inhomogeneous.

        The zero polynomial counts as homogeneous of every degree and
        returns -1.
        """
        degs = {sum(e) for e in self.terms}
        if not degs:
            return -1
        if len(degs) == 1:
            return degs.pop()
        return None

    def homogeneous_component(self, deg: int) -> "MultiPoly":
        return MultiPoly(
            self.nvars, {e: c for e, c in self.terms.items() if sum(e) == deg}
        )

    def evaluate(self, point: Sequence):
        """Exact evaluation at a point of Fractions or GaussianRationals."""
        if len(point) != self.nvars:
            raise ValueError("point dimension mismatch")
        total = None
        for exp, c in self.terms.items():
            v = c
            for x, e in zip(point, exp):
                if e:
                    v = v * x ** e
            total = v if total is None else total + v
        if total is None:
            return Fraction(0)
        return total

    def derivative(self, var: int) -> "MultiPoly":
        terms = {}
        for exp, c in self.terms.items():
            if exp[var] == 0:
                continue
            e = list(exp)
            e[var] -= 1
            terms[tuple(e)] = c * exp[var]
        return MultiPoly(self.nvars, terms)

    def derivative_multi(self, alpha: Sequence[int]) -> "MultiPoly":
        p = self
        for v, e in enumerate(alpha):
            for _ in range(e):
                p = p.derivative(v)
        return p

    def leading(self, key) -> tuple[tuple[int, ...], object]:
        """Leading (exponent, coefficient) under the given monomial key."""
        exp = max(self.terms, key=key)
        return exp, self.terms[exp]

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Exact quotient self / divisor; raises if the division is inexact.

        Used by the fraction-free (Bareiss) routines, where divisibility is
        guaranteed.
        """
        self._check(divisor)
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        key = grlex_key
        dexp, dc = divisor.leading(key)
        rem = self
        qterms: dict = {}
        while not rem.is_zero:
            rexp, rc = rem.leading(key)
            qexp = tuple(a - b for a, b in zip(rexp, dexp))
            if any(e < 0 for e in qexp):
                raise ArithmeticError("inexact polynomial division")
            qc = rc / dc
            qterms[qexp] = qterms.get(qexp, 0) + qc
            rem = rem - MultiPoly.monomial(self.nvars, qexp, qc) * divisor
        return MultiPoly(self.nvars, qterms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                f"x{i}^{e}" if e > 1 else f"x{i}"
                for i, e in enumerate(exp)
                if e
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


def grevlex_key(exp: tuple[int, ...]):
    return (sum(exp), tuple(-e for e in reversed(exp)))


# ---------------------------------------------------------------------------
# Exact matrices over Q / Q(i)
# ---------------------------------------------------------------------------


class ScalarMatrix:
    """Immutable dense matrix with Fraction or GaussianRational entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable]):
        rows = tuple(
            tuple(Fraction(c) if isinstance(c, int) else c for c in row)
            for row in entries
        )
        if not rows:
            raise ValueError("matrix needs at least one row")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("ScalarMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "ScalarMatrix":
        return cls(
            [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ScalarMatrix":
        return cls([[Fraction(0)] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "ScalarMatrix":
        dim = len(columns[0])
        return cls([[col[i] for col in columns] for i in range(dim)])

    def __eq__(self, other):
        return (
            isinstance(other, ScalarMatrix)
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "ScalarMatrix":
        return ScalarMatrix(list(zip(*self.entries)))

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        return ScalarMatrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ]
        )

    def __sub__(self, other):
        return self + (other * Fraction(-1))

    def __mul__(self, scalar):
        return ScalarMatrix(
            [[c * scalar for c in row] for row in self.entries]
        )

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        ot = list(zip(*other.entries))
        return ScalarMatrix(
            [
                [sum(a * b for a, b in zip(row, col)) for col in ot]
                for row in self.entries
            ]
        )

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise ValueError("vector dimension mismatch")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.entries)

    @property
    def is_zero(self) -> bool:
        return all(_is_zero(c) for row in self.entries for c in row)

    # -- elimination ----------------------------------------------------

    def _echelon(self):
        """Row echelon form with exact field arithmetic.

        Returns (list of rows, pivot column list).  Forward elimination is
        fraction-free in the sense that every update is an exact field
        operation; no rounding occurs anywhere.
        """
        m = [list(row) for row in self.entries]
        pivots = []
        r = 0
        for c in range(self.cols):
            pivot_row = None
            for i in range(r, self.rows):
                if not _is_zero(m[i][c]):
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            m[r], m[pivot_row] = m[pivot_row], m[r]
            pv = m[r][c]
            m[r] = [x / pv for x in m[r]]
            for i in range(self.rows):
                if i != r and not _is_zero(m[i][c]):
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self._echelon()[1])

    def kernel_basis(self) -> list[tuple]:
        """Exact basis of the right kernel; len = cols - rank."""
        m, pivots = self._echelon()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for fc in free:
            v = [Fraction(0)] * self.cols
            v[fc] = Fraction(1)
            for r, pc in enumerate(pivots):
                v[pc] = -m[r][fc]
            basis.append(tuple(v))
        return basis

    def solve(self, rhs: Sequence):
        """One exact solution of self @ x = rhs, or None if infeasible."""
        if len(rhs) != self.rows:
            raise ValueError("rhs dimension mismatch")
        aug = ScalarMatrix(
            [list(row) + [b] for row, b in zip(self.entries, rhs)]
        )
        m, pivots = aug._echelon()
        for r, pc in enumerate(pivots):
            if pc == self.cols:
                return None  # pivot in the rhs column: inconsistent
        x = [Fraction(0)] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = m[r][self.cols]
        return tuple(x)

    def column_space_basis(self) -> list[tuple]:
        """Basis of the column span, as vectors in the row-count dimension."""
        _, pivots = self._echelon()
        cols = list(zip(*self.entries))
        return [tuple(cols[c]) for c in pivots]

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return _bareiss_det([list(r) for r in self.entries])

    def __repr__(self):
        return f"ScalarMatrix({[list(map(str, r)) for r in self.entries]})"


def _bareiss_det(m):
    """Bareiss determinant over any exact integral domain.

    Entries must support +, -, *, exact division (/ for fields, .exact_div
    for polynomials) and zero testing via `_is_zero` / is_zero.
    """
    n = len(m)
    if n == 0:
        return Fraction(1)

    def div(a, b):
        if isinstance(a, MultiPoly):
            return a.exact_div(b)
        return a / b

    def zero(a):
        return a.is_zero if isinstance(a, MultiPoly) else _is_zero(a)

    sign = 1
    prev = None
    for k in range(n - 1):
        if zero(m[k][k]):
            swap = next(
                (i for i in range(k + 1, n) if not zero(m[i][k])), None
            )
            if swap is None:
                zero_like = m[k][k]
                return zero_like * 0 if isinstance(zero_like, MultiPoly) else Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num if prev is None else div(num, prev)
            m[i][k] = m[i][k] * 0 if isinstance(m[i][k], MultiPoly) else Fraction(0)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


# ---------------------------------------------------------------------------
# Subspace operations over Q
# ---------------------------------------------------------------------------


def reduce_basis(vectors: Sequence[Sequence], dim: int) -> list[tuple]:
    """Independent subset spanning the same subspace (possibly empty)."""
    vecs = [tuple(Fraction(c) if isinstance(c, int) else c for c in v) for v in vectors]
    if not vecs:
        return []
    mat = ScalarMatrix.from_columns(vecs) if len(vecs[0]) == dim else None
    if mat is None:
        raise ValueError("ambient dimension mismatch")
    _, pivots = mat._echelon()
    return [vecs[c] for c in pivots]


def subspace_intersect(U: Sequence[Sequence], V: Sequence[Sequence], dim: int) -> list[tuple]:
    """Basis of span(U) ∩ span(V) inside Q^dim."""
    U = reduce_basis(U, dim)
    V = reduce_basis(V, dim)
    if not U or not V:
        return []
    # Solve U a = V b: kernel of [U | -V] stacked column-wise.
    cols = [list(u) for u in U] + [[-c for c in v] for v in V]
    M = ScalarMatrix.from_columns(cols)
    basis = []
    for sol in M.kernel_basis():
        a = sol[: len(U)]
        vec = tuple(
            sum(ai * u[i] for ai, u in zip(a, U)) for i in range(dim)
        )
        if any(c != 0 for c in vec):
            basis.append(vec)
    return reduce_basis(basis, dim)


def orth_complement(B: Sequence[Sequence], dim: int) -> list[tuple]:
    """Basis of the orthogonal complement of span(B) in Q^dim."""
    B = reduce_basis(B, dim)
    if not B:
        return [tuple(ScalarMatrix.identity(dim).entries[i]) for i in range(dim)]
    return ScalarMatrix(B).kernel_basis()


def projector_onto_complement(B: Sequence[Sequence], dim: int) -> ScalarMatrix:
    """Exact projector Id - B (B^T B)^{-1} B^T onto span(B)^perp."""
    B = reduce_basis(B, dim)
    if not B:
        return ScalarMatrix.identity(dim)
    Bm = ScalarMatrix.from_columns(B)  # dim x r
    G = Bm.transpose() @ Bm  # r x r Gram, invertible for independent basis
    r = len(B)
    # Solve G X = B^T for X, column by column.
    Bt = Bm.transpose()
    Xcols = []
    for j in range(dim):
        col = [Bt.entries[i][j] for i in range(r)]
        sol = G.solve(col)
        assert sol is not None, "Gram matrix singular on independent basis"
        Xcols.append(sol)
    X = ScalarMatrix.from_columns(Xcols)  # r x dim
    P_onto = Bm @ X
    return ScalarMatrix.identity(dim) - P_onto


def projector_matrix(W: Sequence[Sequence], dim: int) -> ScalarMatrix:
    """Exact orthogonal projector onto span(W)."""
    return ScalarMatrix.identity(dim) - projector_onto_complement(W, dim)


# ---------------------------------------------------------------------------
# Polynomial matrices
# ---------------------------------------------------------------------------


class PolyMatrix:
    """Matrix of MultiPoly entries, optionally tagged homogeneous."""

    __slots__ = ("rows", "cols", "nvars", "entries")

    def __init__(self, entries: Iterable[Iterable[MultiPoly]]):
        rows = tuple(tuple(row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("PolyMatrix needs at least one entry")
        nvars = rows[0][0].nvars
        for row in rows:
            if len(row) != len(rows[0]):
                raise ValueError("ragged PolyMatrix")
            for p in row:
                if p.nvars != nvars:
                    raise ValueError("variable-count mismatch inside PolyMatrix")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", len(rows[0]))
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def identity(cls, n: int, nvars: int) -> "PolyMatrix":
        return cls(
            [
                [
                    MultiPoly.const(nvars, 1) if i == j else MultiPoly.zero(nvars)
                    for j in range(n)
                ]
                for i in range(n)
            ]
        )

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for row in self.entries for p in row)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(list(zip(*self.entries)))

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return PolyMatrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ]
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix([[p * c for p in row] for row in self.entries])

    def scale_poly(self, q: MultiPoly) -> "PolyMatrix":
        return PolyMatrix([[p * q for p in row] for row in self.entries])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in PolyMatrix product")
        ot = list(zip(*other.entries))
        out = []
        for row in self.entries:
            out_row = []
            for col in ot:
                acc = MultiPoly.zero(self.nvars)
                for a, b in zip(row, col):
                    acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return PolyMatrix(out)

    def stack(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch in vertical stack")
        return PolyMatrix(self.entries + other.entries)

    def evaluate(self, point: Sequence) -> ScalarMatrix:
        return ScalarMatrix(
            [[p.evaluate(point) for p in row] for row in self.entries]
        )

    def apply_vector(self, vec: Sequence) -> list[MultiPoly]:
        """Multiply by a constant vector on the right."""
        if len(vec) != self.cols:
            raise ValueError("vector dimension mismatch")
        out = []
        for row in self.entries:
            acc = MultiPoly.zero(self.nvars)
            for p, c in zip(row, vec):
                acc = acc + p * c
            out.append(acc)
        return out

    def homogeneous_degree(self):
        """Common degree of all nonzero entries, or None."""
        degs = {
            p.homogeneous_degree()
            for row in self.entries
            for p in row
            if not p.is_zero
        }
        if None in degs:
            return None
        if not degs:
            return -1
        if len(degs) == 1:
            return degs.pop()
        return None

    def minors(self, size: int) -> list[MultiPoly]:
        """All size x size minor determinants, via Bareiss elimination."""
        if size < 1 or size > min(self.rows, self.cols):
            raise ValueError(
                f"minor size {size} out of range for {self.rows}x{self.cols}"
            )
        out = []
        for rsel in itertools.combinations(range(self.rows), size):
            for csel in itertools.combinations(range(self.cols), size):
                sub = [[self.entries[i][j] for j in csel] for i in rsel]
                out.append(_bareiss_det(sub))
        return out

    def charpoly(self) -> list[MultiPoly]:
        """Coefficients c_0..c_{n-1} of det(lambda*Id - M), leading term 1.

        Faddeev-LeVerrier recurrence; the only divisions are by integers.
        """
        if self.rows != self.cols:
            raise ValueError("charpoly of a non-square matrix")
        n = self.rows
        nv = self.nvars
        cs = [MultiPoly.zero(nv)] * n
        B = PolyMatrix.identity(n, nv)
        for k in range(1, n + 1):
            A = self @ B
            tr = MultiPoly.zero(nv)
            for i in range(n):
                tr = tr + A.entries[i][i]
            c = tr * Fraction(-1, k)
            cs[n - k] = c
            if k < n:
                B = A + PolyMatrix.identity(n, nv).scale_poly(c)
        return cs

    def power(self, e: int) -> "PolyMatrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        out = PolyMatrix.identity(self.rows, self.nvars)
        for _ in range(e):
            out = out @ self
        return out

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols})"


def binom(n: int, k: int) -> int:
    return comb(n, k)
