"""Buchberger engine for ideals and free-module submodules over Q.

Module elements are tuples of MultiPoly (rank-m free module over the
polynomial ring); ideals are the rank-1 case.  Every basis tracks exact
representation coefficients in terms of the original generators, so that
membership certificates come out of the reduction itself.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .exact import MultiPoly, grevlex_key, grlex_key

ModuleElement = tuple  # tuple[MultiPoly, ...]


class TermOrder:
    """Monomial order on the ring, extended position-over-term (graded) to
    free modules.

    kind: "grlex" or "grevlex".  The module order compares total degree
    first, then prefers lower positions, then the ring order.
    """

    def __init__(self, kind: str = "grevlex"):
        if kind not in ("grlex", "grevlex"):
            raise ValueError(f"unknown term order {kind!r}")
        self.kind = kind
        self._ring_key = grlex_key if kind == "grlex" else grevlex_key

    def key(self, exp: tuple[int, ...]):
        return self._ring_key(exp)

    def module_key(self, term: tuple[int, tuple[int, ...]]):
        pos, exp = term
        return (sum(exp), -pos, self._ring_key(exp))

    def __repr__(self):
        return f"TermOrder({self.kind!r})"


def _leading_term(g: ModuleElement, order: TermOrder):
    """Leading (position, exponent) and coefficient of a module element."""
    best = None
    for pos, p in enumerate(g):
        for exp in p.terms:
            t = (pos, exp)
            if best is None or order.module_key(t) > order.module_key(best):
                best = t
    if best is None:
        return None, None
    return best, g[best[0]].terms[best[1]]


def _mono_mul(g: ModuleElement, exp: tuple[int, ...], c) -> ModuleElement:
    nv = g[0].nvars
    m = MultiPoly.monomial(nv, exp, c)
    return tuple(p * m for p in g)

def _add(g: ModuleElement, h: ModuleElement) -> ModuleElement:
    return tuple(a + b for a, b in zip(g, h))


def _sub(g: ModuleElement, h: ModuleElement) -> ModuleElement:
    return tuple(a - b for a, b in zip(g, h))


def _is_zero_elt(g: ModuleElement) -> bool:
    return all(p.is_zero for p in g)


def _divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


class GroebnerBasis:
    """Reduced Groebner basis with representation tracking.

    `generators` are the reduced basis elements (module elements); `reps[i]`
    expresses generators[i] as a polynomial combination of the original
    input generators.
    """

    def __init__(self, gens: Sequence[ModuleElement], order: TermOrder):
        gens = [tuple(g) for g in gens if not _is_zero_elt(g)]
        if not gens:
            raise ValueError("empty (or all-zero) generator list")
        self.rank = len(gens[0])
        self.nvars = gens[0][0].nvars
        self.order = order
        self.input_gens = list(gens)
        self.generators: list[ModuleElement] = []
        self.reps: list[list[MultiPoly]] = []
        self.reduced = False
        self._buchberger()
        self._autoreduce()
        self.reduced = True

    # -- construction ----------------------------------------------------

    def _reduce_full(self, f: ModuleElement, rep: list[MultiPoly], basis, reps):
        """Fully reduce f modulo basis, updating its representation.

        Returns the remainder (no term of which is divisible by any leading
        term of the basis) and its representation.
        """
        order = self.order
        rem = tuple(MultiPoly.zero(self.nvars) for _ in range(self.rank))
        work = f
        rep = list(rep)
        while not _is_zero_elt(work):
            lt, lc = _leading_term(work, order)
            pos, exp = lt
            hit = None
            for i, g in enumerate(basis):
                glt, glc = _leading_term(g, order)
                if glt[0] == pos and _divides(glt[1], exp):
                    hit = (i, glt, glc)
                    break
            if hit is None:
                # move leading term to the remainder
                mono = MultiPoly.monomial(self.nvars, exp, lc)
                rem = tuple(
                    r + mono if j == pos else r for j, r in enumerate(rem)
                )
                work = tuple(
                    w - mono if j == pos else w for j, w in enumerate(work)
                )
                continue
            i, glt, glc = hit
            qexp = tuple(a - b for a, b in zip(exp, glt[1]))
            qc = lc / glc
            work = _sub(work, _mono_mul(basis[i], qexp, qc))
            qpoly = MultiPoly.monomial(self.nvars, qexp, qc)
            rep = [r - qpoly * gr for r, gr in zip(rep, reps[i])]
        return rem, rep

    def _buchberger(self):
        n_in = len(self.input_gens)
        basis: list[ModuleElement] = []
        reps: list[list[MultiPoly]] = []
        for i, g in enumerate(self.input_gens):
            rep = [
                MultiPoly.const(self.nvars, 1) if j == i else MultiPoly.zero(self.nvars)
                for j in range(n_in)
            ]
            rem, rrep = self._reduce_full(g, rep, basis, reps)
            if not _is_zero_elt(rem):
                basis.append(rem)
                reps.append(rrep)
        pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
        while pairs:
            i, j = pairs.pop(0)
            s, srep = self._spair(basis[i], reps[i], basis[j], reps[j])
            if s is None:
                continue
            rem, rrep = self._reduce_full(s, srep, basis, reps)
            if not _is_zero_elt(rem):
                pairs.extend((len(basis), t) for t in range(len(basis)))
                basis.append(rem)
                reps.append(rrep)
        self.generators = basis
        self.reps = reps

    def _spair(self, g, grep, h, hrep):
        (gp, ge), gc = _leading_term(g, self.order)
        (hp, he), hc = _leading_term(h, self.order)
        if gp != hp:
            return None, None
        lcm = tuple(max(a, b) for a, b in zip(ge, he))
        ug = tuple(a - b for a, b in zip(lcm, ge))
        uh = tuple(a - b for a, b in zip(lcm, he))
        s = _sub(
            _mono_mul(g, ug, Fraction(1) / gc),
            _mono_mul(h, uh, Fraction(1) / hc),
        )
        mg = MultiPoly.monomial(self.nvars, ug, Fraction(1) / gc)
        mh = MultiPoly.monomial(self.nvars, uh, Fraction(1) / hc)
        rep = [mg * a - mh * b for a, b in zip(grep, hrep)]
        return s, rep

    def _autoreduce(self):
        # normalize leading coefficients and tail-reduce every element
        changed = True
        while changed:
            changed = False
            for i in range(len(self.generators)):
                others = self.generators[:i] + self.generators[i + 1 :]
                oreps = self.reps[:i] + self.reps[i + 1 :]
                rem, rrep = self._reduce_full(
                    self.generators[i], self.reps[i], others, oreps
                )
                if _is_zero_elt(rem):
                    del self.generators[i]
                    del self.reps[i]
                    changed = True
                    break
                if rem != self.generators[i]:
                    changed = True
                self.generators[i] = rem
                self.reps[i] = rrep
        for i, g in enumerate(self.generators):
            _, lc = _leading_term(g, self.order)
            inv = Fraction(1) / lc
            self.generators[i] = tuple(p * inv for p in g)
            self.reps[i] = [p * inv for p in self.reps[i]]
        # deterministic ordering by leading term
        idx = sorted(
            range(len(self.generators)),
            key=lambda i: self.order.module_key(
                _leading_term(self.generators[i], self.order)[0]
            ),
        )
        self.generators = [self.generators[i] for i in idx]
        self.reps = [self.reps[i] for i in idx]

    # -- queries ----------------------------------------------------------

    def normal_form(self, f: ModuleElement, with_quotients: bool = False):
        """Unique remainder of f modulo the basis.

        With with_quotients=True also returns quotients q_i against the
        reduced basis such that f = sum q_i * generators[i] + remainder.
        """
        f = tuple(f)
        if len(f) != self.rank:
            raise ValueError("module rank mismatch")
        nq = len(self.generators)
        quots = [MultiPoly.zero(self.nvars) for _ in range(nq)]
        rem = tuple(MultiPoly.zero(self.nvars) for _ in range(self.rank))
        work = f
        while not _is_zero_elt(work):
            lt, lc = _leading_term(work, self.order)
            pos, exp = lt
            hit = None
            for i, g in enumerate(self.generators):
                glt, glc = _leading_term(g, self.order)
                if glt[0] == pos and _divides(glt[1], exp):
                    hit = (i, glt, glc)
                    break
            if hit is None:
                mono = MultiPoly.monomial(self.nvars, exp, lc)
                rem = tuple(r + mono if j == pos else r for j, r in enumerate(rem))
                work = tuple(w - mono if j == pos else w for j, w in enumerate(work))
                continue
            i, glt, glc = hit
            qexp = tuple(a - b for a, b in zip(exp, glt[1]))
            qc = lc / glc
            quots[i] = quots[i] + MultiPoly.monomial(self.nvars, qexp, qc)
            work = _sub(work, _mono_mul(self.generators[i], qexp, qc))
        if with_quotients:
            return rem, quots
        return rem

    def contains(self, f: ModuleElement) -> bool:
        return _is_zero_elt(self.normal_form(f))

    def leading_exponents(self) -> list[tuple[int, tuple[int, ...]]]:
        return [_leading_term(g, self.order)[0] for g in self.generators]

    def verify(self) -> bool:
        """Buchberger criterion: every S-pair reduces to zero (exhaustive)."""
        for i in range(len(self.generators)):
            for j in range(i):
                s, _ = self._spair(
                    self.generators[i], self.reps[i], self.generators[j], self.reps[j]
                )
                if s is None:
                    continue
                if not _is_zero_elt(self.normal_form(s)):
                    return False
        # the input generators must reduce to zero as well
        return all(self.contains(g) for g in self.input_gens)


# ---------------------------------------------------------------------------
# Ideal-level wrappers
# ---------------------------------------------------------------------------


def buchberger_ideal(gens: Sequence[MultiPoly], order: Optional[TermOrder] = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by `gens`."""
    order = order or TermOrder("grevlex")
    wrapped = [(g,) for g in gens if not g.is_zero]
    if not wrapped:
        raise ValueError("empty (or all-zero) generator list")
    return GroebnerBasis(wrapped, order)


def normal_form_ideal(f: MultiPoly, G: GroebnerBasis) -> MultiPoly:
    if G.rank != 1:
        raise ValueError("not an ideal basis")
    return G.normal_form((f,))[0]


def zero_dim_origin(gens: Sequence[MultiPoly]) -> bool:
    """True iff the homogeneous system has no common complex zero but 0.

    Criterion: the reduced Groebner basis' leading terms contain a pure
    power of every variable.
    """
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return False
    nvars = gens[0].nvars
    for g in gens:
        if g.homogeneous_degree() is None:
            raise ValueError("zero_dim_origin requires homogeneous generators")
    if nvars == 0:
        return True
    G = buchberger_ideal(gens, TermOrder("grevlex"))
    covered = set()
    for _, exp in G.leading_exponents():
        support = [i for i, e in enumerate(exp) if e]
        if len(support) == 1:
            covered.add(support[0])
        elif len(support) == 0:
            return True  # unit ideal
    return covered == set(range(nvars))


def module_member_with_coeffs(
    target: ModuleElement,
    gens: Sequence[ModuleElement],
    order: Optional[TermOrder] = None,
):
    """Express `target` in the module generated by `gens`, or return None.

    On success returns polynomials q_1..q_n with target = sum q_j * gens[j],
    re-verified by exact expansion.
    """
    order = order or TermOrder("grevlex")
    G = GroebnerBasis(gens, order)
    rem, quots = G.normal_form(tuple(target), with_quotients=True)
    if not _is_zero_elt(rem):
        return None
    n_in = len(G.input_gens)
    nv = G.nvars
    coeffs = [MultiPoly.zero(nv) for _ in range(n_in)]
    for q, rep in zip(quots, G.reps):
        for j in range(n_in):
            coeffs[j] = coeffs[j] + q * rep[j]
    # exact re-verification of the representation
    acc = tuple(MultiPoly.zero(nv) for _ in range(G.rank))
    for c, g in zip(coeffs, G.input_gens):
        acc = tuple(a + c * p for a, p in zip(acc, g))
    if tuple(acc) != tuple(target):
        raise AssertionError("representation tracking produced a wrong identity")
    return coeffs
