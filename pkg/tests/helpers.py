"""Shared generators for randomized tests."""

import random
from fractions import Fraction

from symcheck.exact import GaussianRational, MultiPoly, monomials_of_degree
from symcheck.operators import DiffOp


def rand_fraction(rng, span=6):
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def rand_gaussian(rng, span=6):
    return GaussianRational(rand_fraction(rng, span), rand_fraction(rng, span))


def rand_poly(rng, nvars, max_deg=3, n_terms=4, gaussian=False, span=4):
    terms = {}
    for _ in range(n_terms):
        exp = tuple(rng.randint(0, max_deg) for _ in range(nvars))
        if sum(exp) > max_deg:
            continue
        c = rand_gaussian(rng, span) if gaussian else rand_fraction(rng, span)
        terms[exp] = terms.get(exp, Fraction(0)) + c
    return MultiPoly(nvars, terms)


def rand_homogeneous(rng, nvars, deg, span=3):
    monos = monomials_of_degree(nvars, deg)
    terms = {
        m: Fraction(rng.randint(-span, span))
        for m in rng.sample(monos, k=min(len(monos), rng.randint(1, 3)))
    }
    return MultiPoly(nvars, terms)


def rand_op(rng, N=2, d=None, l=None, k=None, span=2, density=0.7):
    """Random homogeneous constant-coefficient operator, never zero."""
    d = d or rng.randint(1, 2)
    l = l or rng.randint(1, 3)
    k = k or rng.randint(1, 2)
    while True:
        terms = {}
        for alpha in monomials_of_degree(N, k):
            if rng.random() > density:
                continue
            m = [
                [Fraction(rng.randint(-span, span)) for _ in range(d)]
                for _ in range(l)
            ]
            if any(any(row) for row in m):
                terms[alpha] = m
        if terms:
            return DiffOp("random", N, d, l, k, terms)


def rand_point(rng, N, gaussian=False, span=5):
    while True:
        if gaussian:
            pt = tuple(rand_gaussian(rng, span) for _ in range(N))
        else:
            pt = tuple(rand_fraction(rng, span) for _ in range(N))
        if any(pt):
            return pt
