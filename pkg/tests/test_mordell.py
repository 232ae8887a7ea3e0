import mpmath
import pytest
from gmpy2 import mpfr
from hypothesis import given, settings, strategies as st

import oracles
from thetasum import (euler_numbers, h_sum_H, h_tail_J, h_tail_J_fast, laguerre_rule, make_context,
                      mordell_eval, mordell_h, p_seq, q_coeffs, shift_count)

CTX = make_context(1, 1e-30, bits=256)
EULER = euler_numbers(80, CTX)


def mp(v):
    return oracles.to_mp(v)


def gaussian(z, tau):
    """(2/sqrt(tau)) e^{i pi/4 + i pi (z+1/2)^2/tau}, in mpmath."""
    z, tau = mpmath.mpf(z), mpmath.mpf(tau)
    return 2 / mpmath.sqrt(tau) * mpmath.expjpi(mpmath.mpf(1) / 4 + (z + 0.5) ** 2 / tau)


class TestQCoeffs:
    def test_q0_is_one(self):
        assert q_coeffs(0.37, 3, EULER, CTX).q[0] == 1

    def test_q1_at_half(self):
        q1 = mp(q_coeffs(0.5, 1, EULER, CTX).q[1])
        assert abs(q1 - mpmath.mpc(-0.5, 0.5 / mpmath.pi)) < 1e-70

    @pytest.mark.parametrize("tau", [0.0, 0.3, -0.8, 0.99])
    def test_against_taylor_oracle(self, tau):
        ours = q_coeffs(tau, 12, EULER, CTX).q
        ref = oracles.sech_exp_series(tau, 12)
        for a, b in zip(ours, ref):
            assert abs(mp(a) - b) < 1e-60

    def test_bound(self):
        q10 = q_coeffs(0.99, 10, EULER, CTX).q[10]
        assert abs(mp(q10)) < 3 * (2 / mpmath.pi) ** 20

    def test_needs_long_enough_table(self):
        with pytest.raises(ValueError):
            q_coeffs(0.1, 50, EULER, CTX)


class TestPSeq:
    def test_p0_closed_form(self):
        p0 = mp(p_seq(2, 1, CTX).p[0])
        assert abs(p0 - (1 - mpmath.exp(-2)) / 2) < 1e-70
        assert abs(p0 - mpmath.mpf("0.4323323583816936")) < 1e-15

    @pytest.mark.parametrize("x", [1.0, 3.7, 55.0])
    def test_p1_recursion(self, x):
        p = p_seq(x, 1, CTX).p
        assert abs(mp(p[1]) - (mp(p[0]) - mpmath.exp(-x)) / x) < 1e-70

    def test_against_quadrature(self):
        p = p_seq(10, 8, CTX).p
        for k in range(9):
            assert abs(mp(p[k]) - oracles.incomplete_moment(10, k)) < mpmath.mpf(2) ** (-256 + 8)

    def test_slightly_below_kmax_is_accepted(self):
        p = p_seq(2 * 95.5 - 6, 2 * 95, CTX).p
        assert abs(mp(p[-1]) - oracles.incomplete_moment(185, 190)) < 1e-70

    def test_refuses_unstable_region(self):
        with pytest.raises(ValueError):
            p_seq(3, 10, CTX)
        with pytest.raises(ValueError):
            p_seq(0, 0, CTX)


class TestH:
    def test_single_term_at_minus_half(self):
        v = mp(h_sum_H(-0.5, 0.3, 1, CTX, eps=1e-30))
        assert abs(v - mpmath.expjpi(0.25) / mpmath.sqrt(mpmath.mpf(0.3))) < 1e-60

    def test_telescoping(self):
        z, tau = 0.3, 0.7
        diff = mp(h_sum_H(z, tau, 2, CTX, 1e-30)) - mp(h_sum_H(z, tau, 1, CTX, 1e-30))
        # l = 1 term: -(e^{i pi/4}/sqrt(tau)) e^{i u^2} (1 - Phi(e^{i pi/4} u)), u = sqrt(pi/tau)(z + 3/2)
        u = mpmath.sqrt(mpmath.pi / tau) * (mpmath.mpf(z) + 1.5)
        term = -mpmath.expjpi(0.25) / mpmath.sqrt(tau) * mpmath.expj(u * u) * (1 - oracles.erf_rot(u))
        assert abs(diff - term) < 1e-28

    def test_five_terms_against_erf_oracle(self):
        z, tau = mpmath.mpf(0.3), mpmath.mpf(0.7)
        ref = 0
        for l in range(5):
            u = mpmath.sqrt(mpmath.pi / tau) * (z + l + 0.5)
            ref += (-1) ** l * mpmath.expj(u * u) * (1 - oracles.erf_rot(u))
        ref *= mpmath.expjpi(0.25) / mpmath.sqrt(tau)
        assert abs(mp(h_sum_H(0.3, 0.7, 5, CTX, 1e-30)) - ref) < 1e-28


class TestTail:
    @pytest.mark.parametrize("z", [-0.5, 0.0, 0.31])
    @pytest.mark.parametrize("tau", [0.05, 0.4, 0.95])
    def test_against_quadrature(self, z, tau):
        eps = 1e-20
        K = shift_count(eps)
        q = q_coeffs(tau, K, euler_numbers(2 * K, CTX), CTX)
        j = h_tail_J(K + z, tau, K, q, CTX)
        assert abs(mp(j) - oracles.tail_quad(K + z, tau)) < eps

    def test_tau_zero_uses_euler_numbers(self):
        K = 10
        q = q_coeffs(0, K, EULER, CTX)
        assert all(q.q[l] == EULER.e_tilde[2 * l] for l in range(K + 1))
        p = p_seq(2 * 12.0, 2 * K, CTX).p
        expected = sum(mp(EULER.e_tilde[2 * l]) * mp(p[2 * l]) for l in range(K + 1))
        assert abs(mp(h_tail_J(12.0, 0, K, q, CTX)) - expected) < 1e-60

    def test_series_tail_bound(self):
        for eps in (1e-10, 1e-20, 1e-30):
            K = shift_count(eps)
            tail = 3 * sum((2 / mpmath.pi) ** (2 * l) for l in range(K + 1, K + 400))
            assert tail < eps / 4

    def test_domain(self):
        q = q_coeffs(0.2, 6, EULER, CTX)
        with pytest.raises(ValueError):
            h_tail_J(1.0, 0.2, 6, q, CTX)


class TestFastTail:
    def test_large_shift_limit(self):
        rule = laguerre_rule(20, 20, CTX)
        k = 10**6
        v = mp(h_tail_J_fast(k + 0.2, 0.3, k, rule, CTX))
        assert abs(v * 2 * k - 1) < 1e-5

    def test_one_node_rule_is_coarse(self):
        ctx = make_context(1, 1e-30, bits=128)
        z, tau = 0.17, 0.33
        exact = mp(mordell_h(z, tau, 1e-30, ctx))
        crude = mp(mordell_h(z, tau, 1e-30, ctx, fast=True, fast_rule=(1, 1)))
        rel = abs(crude - exact) / abs(exact)
        assert 1e-4 < rel < 1e-1

    def test_needs_reduced_argument(self):
        with pytest.raises(ValueError):
            mordell_h(1.7, 0.2, 1e-10, make_context(1, 1e-10, bits=128), fast=True, reduce_z=False)

    def test_needs_113_bits(self):
        with pytest.raises(ValueError):
            mordell_h(0.1, 0.2, 1e-10, make_context(1, 1e-10, bits=100), fast=True)


class TestMordell:
    @pytest.mark.parametrize("z, tau", [(0.2, 0.6), (-0.4, 0.1), (0.5, 0.9), (0.0, 0.05), (-0.5, 0.33)])
    def test_against_quadrature(self, z, tau):
        eps = 1e-25
        v = mordell_h(z, tau, eps, CTX)
        assert abs(mp(v) - oracles.mordell_quad(z, tau)) < eps / mpmath.sqrt(tau)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(-3, 3), st.floats(0.02, 0.98))
    def test_even_in_z(self, z, tau):
        a = mordell_h(z, tau, 1e-20, CTX)
        b = mordell_h(-z, tau, 1e-20, CTX)
        assert abs(mp(a) - mp(b)) < 2e-20 / mpmath.sqrt(tau)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(-2, 2), st.floats(0.05, 0.95))
    def test_shift_residual(self, z, tau):
        eps = 1e-20
        a = mp(mordell_h(z, tau, eps, CTX, reduce_z=False))
        b = mp(mordell_h(mpfr(z) + 1, tau, eps, CTX, reduce_z=False))
        assert abs(a + b - gaussian(z, tau)) < 4 * eps / mpmath.sqrt(tau)

    @pytest.mark.parametrize("z, tau", [(2.3, 0.3), (-1.6, 0.5), (3.0, 0.95)])
    def test_unreduced_matches_reduced(self, z, tau):
        a = mp(mordell_h(z, tau, 1e-25, CTX))
        b = mp(mordell_h(z, tau, 1e-25, CTX, reduce_z=False))
        assert abs(a - b) < 1e-25 / mpmath.sqrt(tau)
        assert abs(b - oracles.mordell_quad(z, tau)) < 1e-25 / mpmath.sqrt(tau)

    def test_wider_rule_is_accurate(self):
        # 60 of 124 nodes captures the Laguerre mass the 40-node cut drops
        fast_ctx = make_context(1, 1e-30, bits=128)
        for z in (-0.5, 0.0, 0.37):
            for tau in (0.0125, 0.2, 0.4875):
                exact = mp(mordell_h(z, tau, 1e-38, CTX))
                wide = mp(mordell_h(z, tau, 1e-32, fast_ctx, fast=True, fast_rule=(124, 60)))
                assert abs(wide - exact) / abs(exact) < 1e-25

    def test_negative_tau_is_conjugate(self):
        a = mordell_h(0.23, 0.41, 1e-20, CTX)
        b = mordell_h(0.23, -0.41, 1e-20, CTX)
        assert a.conjugate() == b

    def test_eval_record(self):
        rec = mordell_eval(0.1, 0.5, 1e-20, CTX)
        assert rec.shift_k == shift_count(1e-20) and rec.shift_k % 2 == 0
        assert rec.result == mordell_h(0.1, 0.5, 1e-20, CTX)

    def test_far_argument_with_cap_lifted(self):
        z, tau = 37.3, 0.2
        with pytest.raises(ValueError):
            mordell_h(z, tau, 1e-20, CTX)
        v = mordell_h(z, tau, 1e-20, CTX, z_bound=None)
        w = mordell_h(z - 1, tau, 1e-20, CTX, z_bound=None)
        assert abs(mp(v) + mp(w) - gaussian(z - 1, tau)) < 1e-18

    @pytest.mark.parametrize("tau", [0, 1, -1, 1.5])
    def test_rejects_tau(self, tau):
        with pytest.raises(ValueError):
            mordell_h(0.1, tau, 1e-10, CTX)

    @pytest.mark.parametrize("eps", [0.1, 0.5, 0.0])
    def test_rejects_eps(self, eps):
        with pytest.raises(ValueError):
            mordell_h(0.1, 0.2, eps, CTX)
