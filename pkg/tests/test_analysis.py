import random
from fractions import Fraction

import pytest

from symcheck.exact import GaussianRational, MultiPoly, ScalarMatrix
from symcheck.analysis import (
    CERTIFIED_NO,
    CERTIFIED_YES,
    UNCERTIFIED_YES,
    HypothesesNotMet,
    NotInImage,
    SMaxExceeded,
    compute_W,
    construct_annihilator,
    construct_Cbeta,
    construct_L,
    find_witness,
    is_elliptic,
    kernel_inclusion,
    polynomial_lift,
    quotient_spec,
    rank_profile,
    verify_L_annihilates_W,
)
from symcheck.operators import OperatorPair, catalog, compose, grad_power
from helpers import rand_op, rand_point, rand_poly


def full_gradient(N):
    return grad_power(1, N, N)


class TestRankProfile:
    def test_catalog_constant_rank(self):
        expectations = {
            ("gradient", 2): True,
            ("divergence", 2): True,
            ("curl", 3): True,
            ("sym_gradient", 2): True,
            ("laplacian", 2): False,
            ("cauchy_riemann", 2): False,
        }
        for (name, N), expected in expectations.items():
            prof = rank_profile(catalog(name, N))
            assert prof.constant_rank_C is expected, name

    def test_complex_constant_rank_implies_certified_real(self):
        # real matrices have equal real and complex nullity, so the complex
        # certificate carries over to the real frequencies
        rng = random.Random(40)
        found = 0
        while found < 10:
            op = rand_op(rng)
            prof = rank_profile(op)
            if prof.constant_rank_C:
                assert prof.constant_rank_R == CERTIFIED_YES
                found += 1
            else:
                assert prof.constant_rank_R in (CERTIFIED_NO, UNCERTIFIED_YES)

    def test_real_rank_drop_is_found(self):
        # divergence-like operator that drops rank on a real hyperplane:
        # symbol (xi_1, 0) has rank 1 generically, 0 at xi = (0, 1)
        op = catalog("divergence", 2)
        prof = rank_profile(op)
        assert prof.constant_rank_C
        # the full gradient stacked on a degenerate row instead:
        from symcheck.operators import DiffOp

        deg = DiffOp("deg", 2, 1, 1, 1, {(1, 0): [[Fraction(1)]]})
        prof2 = rank_profile(deg)
        assert prof2.constant_rank_C is False
        assert prof2.constant_rank_R == CERTIFIED_NO
        assert prof2.real_witness is not None


class TestEllipticity:
    def test_catalog(self):
        assert is_elliptic(catalog("gradient", 2), "C").value is True
        assert is_elliptic(catalog("gradient", 2), "R").value is True
        assert is_elliptic(catalog("divergence", 2), "C").value is False
        cr = catalog("cauchy_riemann", 2)
        assert is_elliptic(cr, "C").value is False
        vr = is_elliptic(cr, "R")
        assert vr.value is True and vr.status == UNCERTIFIED_YES
        lap = catalog("laplacian", 2)
        assert is_elliptic(lap, "C").value is False
        assert is_elliptic(lap, "R").value is True

    def test_elliptic_C_implies_elliptic_R(self):
        rng = random.Random(41)
        found = 0
        while found < 15:
            op = rand_op(rng, l=rng.randint(2, 3), d=rng.randint(1, 2))
            if is_elliptic(op, "C").value:
                assert is_elliptic(op, "R").value
                found += 1

    def test_wide_symbol_never_elliptic(self):
        op = catalog("divergence", 3)
        v = is_elliptic(op, "R")
        assert v.value is False and v.witness is not None


class TestKernelInclusion:
    def test_sym_gradient_controls_the_full_gradient(self):
        pair = OperatorPair(catalog("sym_gradient", 2), full_gradient(2), "korn")
        assert kernel_inclusion(pair).holds

    def test_divergence_does_not_control_the_gradient(self):
        pair = OperatorPair(catalog("divergence", 2), full_gradient(2), "korn")
        v = kernel_inclusion(pair)
        assert not v.holds and v.failing_minor is not None

    def test_guard_without_constant_rank(self):
        pair = OperatorPair(
            catalog("bilaplacian", 2), catalog("d2_laplacian", 2), "korn"
        )
        with pytest.raises(HypothesesNotMet):
            kernel_inclusion(pair)

    def test_holds_verdict_is_pointwise_sound(self):
        rng = random.Random(42)
        pair = OperatorPair(catalog("sym_gradient", 2), full_gradient(2), "korn")
        assert kernel_inclusion(pair).holds
        sa, sb = pair.calA.symbol(), pair.A.symbol()
        for _ in range(50):
            x = rand_point(rng, 2, gaussian=True)
            Ma, Mb = sa.evaluate(list(x)), sb.evaluate(list(x))
            for v in Ma.kernel_basis():
                assert all(c == 0 for c in Mb.apply(v))

    def test_witness_is_exact(self):
        pair = OperatorPair(catalog("divergence", 2), full_gradient(2), "korn")
        w = find_witness(pair)
        Ma = pair.calA.symbol().evaluate(list(w.xi))
        Mb = pair.A.symbol().evaluate(list(w.xi))
        assert all(c == 0 for c in Ma.apply(list(w.v)))
        assert any(c != 0 for c in Mb.apply(list(w.v)))


class TestFactorization:
    def test_sym_gradient_certificate(self):
        pair = OperatorPair(catalog("sym_gradient", 2), full_gradient(2), "korn")
        cert = construct_L(pair, 6)
        assert cert.s == 1 and cert.verified
        lhs = compose(grad_power(cert.s, pair.A.l, 2), pair.A).symbol()
        rhs = cert.L.symbol() @ pair.calA.symbol()
        assert lhs.entries == rhs.entries

    def test_identity_pair_needs_no_derivatives(self):
        g = catalog("gradient", 2)
        pair = OperatorPair(g, g, "korn")
        cert = construct_L(pair, 6)
        assert cert.s == 0

    def test_failing_inclusion_is_rejected(self):
        pair = OperatorPair(catalog("divergence", 2), full_gradient(2), "korn")
        with pytest.raises(ValueError):
            construct_L(pair, 6)


class TestCancellation:
    def test_catalog_cancellation(self):
        assert compute_W(catalog("gradient", 2)).cancelling
        assert compute_W(catalog("sym_gradient", 2)).cancelling
        rep = compute_W(catalog("divergence", 2))
        assert not rep.cancelling and len(rep.W_basis) == 1
        rep_cr = compute_W(catalog("cauchy_riemann", 2))
        assert not rep_cr.cancelling and len(rep_cr.W_basis) == 2

    def test_W_vectors_lie_in_every_sampled_image(self):
        rng = random.Random(43)
        op = catalog("divergence", 2)
        rep = compute_W(op)
        sym = op.symbol()
        for _ in range(25):
            x = rand_point(rng, 2)
            M = sym.evaluate(list(x))
            if M.rank() != 1:
                continue
            for w in rep.W_basis:
                aug = ScalarMatrix.from_columns(
                    [ [M.entries[i][j] for i in range(op.l)] for j in range(op.d) ]
                    + [list(w)]
                )
                assert aug.rank() == M.rank()

    def test_projector_annihilates_W(self):
        rep = compute_W(catalog("divergence", 2))
        for w in rep.W_basis:
            assert all(c == 0 for c in rep.P_Wperp.apply(list(w)))


class TestAnnihilator:
    def test_gradient_annihilator_is_the_curl_projector(self):
        op = catalog("gradient", 2)
        ann = construct_annihilator(op)
        assert ann.op is not None
        assert ann.order == 2
        prod = ann.op.symbol() @ op.symbol()
        assert all(p.is_zero for row in prod.entries for p in row)

    def test_surjective_symbol_gives_the_zero_annihilator(self):
        ann = construct_annihilator(catalog("divergence", 2))
        assert ann.op is None

    def test_kernel_equals_image_at_random_points(self):
        rng = random.Random(44)
        op = catalog("gradient", 3)
        ann = construct_annihilator(op)
        sym, asym = op.symbol(), ann.op.symbol()
        for _ in range(25):
            x = rand_point(rng, 3)
            M, B = sym.evaluate(list(x)), asym.evaluate(list(x))
            image = M.column_space_basis()
            kernel = B.kernel_basis()
            assert len(image) == len(kernel)
            combined = ScalarMatrix.from_columns(
                [list(v) for v in image] + [list(v) for v in kernel]
            )
            assert combined.rank() == len(image)


class TestClaims:
    def test_projection_identity_for_gradient(self):
        op = catalog("gradient", 2)
        ann = construct_annihilator(op)
        rep = compute_W(op)
        cb = construct_Cbeta(ann, rep.W_basis, op.l)
        acc = ScalarMatrix.zeros(op.l, op.l)
        for beta, C in cb.items():
            acc = acc + (C @ ScalarMatrix(ann.op.terms[beta]))
        assert acc == rep.P_Wperp

    def test_zero_annihilator_with_trivial_projector(self):
        op = catalog("divergence", 2)
        ann = construct_annihilator(op)
        rep = compute_W(op)
        # W is all of R^1, so the complement projector vanishes
        assert rep.P_Wperp.is_zero
        assert construct_Cbeta(ann, rep.W_basis, op.l) == {}

    def test_factorization_annihilates_W(self):
        pair = OperatorPair(catalog("sym_gradient", 2), full_gradient(2), "korn")
        cert = construct_L(pair, 6)
        rep = compute_W(pair.calA)
        result = verify_L_annihilates_W(cert.L, rep.W_basis, cert.s)
        assert result.holds and result.s_precondition_met


class TestPolynomialLift:
    def test_random_feasible_instances(self):
        rng = random.Random(45)
        ops = [catalog("gradient", 2), catalog("divergence", 2),
               catalog("sym_gradient", 2)]
        for _ in range(30):
            A = rng.choice(ops)
            Pi = [rand_poly(rng, A.N, max_deg=3) for _ in range(A.d)]
            pi = A.apply_to_poly(Pi)
            lift = polynomial_lift(A, pi)
            assert A.apply_to_poly(list(lift.Pi)) == list(pi)
            deg_pi = max((p.degree() for p in pi if not p.is_zero), default=0)
            deg_Pi = max((p.degree() for p in lift.Pi if not p.is_zero), default=0)
            assert deg_Pi <= deg_pi + A.k

    def test_infeasible_target_is_rejected(self):
        g = catalog("gradient", 2)
        pi_bad = [MultiPoly.monomial(2, (0, 1)), MultiPoly.zero(2)]
        with pytest.raises(NotInImage):
            polynomial_lift(g, pi_bad)


class TestQuotientSpec:
    def test_degree_bound_and_dimension(self):
        pair = OperatorPair(catalog("sym_gradient", 2), full_gradient(2), "korn")
        q = quotient_spec(pair, 1)
        assert q.degree_bound == 3
        assert q.dimension == 2 * 10
