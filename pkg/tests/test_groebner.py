import random
from fractions import Fraction

import pytest

from symcheck.exact import MultiPoly
from symcheck.groebner import (
    GroebnerBasis,
    TermOrder,
    buchberger_ideal,
    module_member_with_coeffs,
    normal_form_ideal,
    zero_dim_origin,
)
from helpers import rand_homogeneous, rand_poly


def P(nvars, terms):
    return MultiPoly(nvars, {k: Fraction(v) for k, v in terms.items()})


# ---------------------------------------------------------------------------
# an independent oracle for zero_dim_origin in two variables
# ---------------------------------------------------------------------------


def _univ_coeffs(p: MultiPoly):
    """Coefficients of p(1, t) as a dense list."""
    out = {}
    for (e1, e2), c in p.terms.items():
        out[e2] = out.get(e2, Fraction(0)) + c
    if not out:
        return []
    deg = max(out)
    return [out.get(i, Fraction(0)) for i in range(deg + 1)]


def _univ_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _univ_mod(a, b):
    a, b = _univ_trim(list(a)), _univ_trim(list(b))
    while len(a) >= len(b):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[i + shift] -= f * bc
        _univ_trim(a)
        if not a:
            break
    return a


def _univ_gcd_degree(polys):
    """Degree of gcd of nonzero univariate polynomials over Q."""
    g = []
    for c in polys:
        c = _univ_trim(list(c))
        if not c:
            continue
        if not g:
            g = c
            continue
        a, b = g, c
        while b:
            a, b = b, _univ_mod(a, b)
        g = a
    return len(g) - 1 if g else None


def zero_dim_origin_oracle_2vars(gens):
    """Homogeneous bivariate system has only the origin as a common zero iff
    the dehomogenizations p(1, t) share no root over C and the point (0, 1)
    is not a common zero."""
    gens = [g for g in gens if not g.is_zero]
    if not gens:
        return False
    if all(g.evaluate((Fraction(0), Fraction(1))) == 0 for g in gens):
        return False
    dehom = [_univ_coeffs(g) for g in gens]
    deg = _univ_gcd_degree(dehom)
    if deg is None:
        # every dehomogenization vanished: common zeros on the x-axis
        return False
    return deg == 0


# ---------------------------------------------------------------------------


class TestBuchberger:
    def test_spair_reduction_on_random_ideals(self):
        rng = random.Random(20)
        for _ in range(25):
            gens = [rand_homogeneous(rng, 2, rng.randint(1, 3)) for _ in range(2)]
            gens = [g for g in gens if not g.is_zero]
            if not gens:
                continue
            G = buchberger_ideal(gens)
            assert G.verify()

    def test_module_bases_verify(self):
        rng = random.Random(21)
        for _ in range(15):
            gens = [
                tuple(rand_homogeneous(rng, 2, 1) for _ in range(2))
                for _ in range(2)
            ]
            gens = [g for g in gens if any(not p.is_zero for p in g)]
            if not gens:
                continue
            G = GroebnerBasis(gens, TermOrder("grevlex"))
            assert G.verify()

    def test_normal_form_of_members_is_zero(self):
        rng = random.Random(22)
        for _ in range(25):
            g1 = rand_homogeneous(rng, 2, 2)
            g2 = rand_homogeneous(rng, 2, 2)
            if g1.is_zero or g2.is_zero:
                continue
            G = buchberger_ideal([g1, g2])
            q1 = rand_poly(rng, 2, max_deg=2)
            q2 = rand_poly(rng, 2, max_deg=2)
            assert normal_form_ideal(q1 * g1 + q2 * g2, G).is_zero

    def test_determinism(self):
        gens = [
            P(2, {(2, 0): 1, (1, 1): 2}),
            P(2, {(0, 2): 3, (1, 1): -1}),
        ]
        a = buchberger_ideal(gens)
        b = buchberger_ideal(gens)
        assert a.generators == b.generators
        assert a.reps == b.reps

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            buchberger_ideal([MultiPoly.zero(2)])


class TestModuleMembership:
    def test_random_combinations_are_members(self):
        rng = random.Random(23)
        for _ in range(25):
            gens = [
                tuple(rand_homogeneous(rng, 2, 1) for _ in range(2))
                for _ in range(2)
            ]
            gens = [g for g in gens if any(not p.is_zero for p in g)]
            if not gens:
                continue
            qs = [rand_poly(rng, 2, max_deg=2) for _ in gens]
            target = tuple(
                sum((q * g[j] for q, g in zip(qs, gens)), MultiPoly.zero(2))
                for j in range(2)
            )
            coeffs = module_member_with_coeffs(target, gens)
            assert coeffs is not None
            acc = tuple(
                sum((c * g[j] for c, g in zip(coeffs, gens)), MultiPoly.zero(2))
                for j in range(2)
            )
            assert acc == target

    def test_rotation_is_not_in_the_gradient_row_module(self):
        xi1 = MultiPoly.monomial(2, (1, 0))
        xi2 = MultiPoly.monomial(2, (0, 1))
        gens = [(xi1, xi2)]
        assert module_member_with_coeffs((xi2, -xi1), gens) is None

    def test_scalar_membership(self):
        xi1 = MultiPoly.monomial(2, (1, 0))
        xi2 = MultiPoly.monomial(2, (0, 1))
        gens = [(xi1 * xi1,), (xi2 * xi2,)]
        member = (xi1 * xi1 * xi2 + xi2 * xi2 * xi2,)
        assert module_member_with_coeffs(member, gens) is not None
        assert module_member_with_coeffs((xi1 * xi2,), gens) is None


class TestZeroDimOrigin:
    def test_fixed_suite(self):
        xi1 = MultiPoly.monomial(2, (1, 0))
        xi2 = MultiPoly.monomial(2, (0, 1))
        assert zero_dim_origin([xi1 * xi1, xi2 * xi2]) is True
        assert zero_dim_origin([xi1 * xi2]) is False
        assert zero_dim_origin([xi1 * xi1 + xi2 * xi2]) is False

    def test_empty_and_unit(self):
        assert zero_dim_origin([]) is False
        assert zero_dim_origin([MultiPoly.zero(2)]) is False

    def test_inhomogeneous_rejected(self):
        p = MultiPoly(2, {(1, 0): Fraction(1), (0, 0): Fraction(1)})
        with pytest.raises(ValueError):
            zero_dim_origin([p])

    def test_against_bivariate_oracle(self):
        rng = random.Random(24)
        checked = 0
        for _ in range(200):
            gens = [
                rand_homogeneous(rng, 2, rng.randint(1, 3))
                for _ in range(rng.randint(1, 3))
            ]
            gens = [g for g in gens if not g.is_zero]
            if not gens:
                continue
            assert zero_dim_origin(gens) == zero_dim_origin_oracle_2vars(gens)
            checked += 1
        assert checked >= 150
