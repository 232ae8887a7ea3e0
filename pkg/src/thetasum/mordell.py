"""The Mordell integral h(z, tau) for real z and real tau with 0 < |tau| < 1.

For tau > 0, h is the analytic continuation

    h(z, tau) = 2 e^{i pi/4} int_0^inf e^{-pi tau y^2}
                cosh(2 pi z e^{i pi/4} y) / cosh(pi e^{i pi/4} y) dy,

and h(z, -tau) is defined as conj(h(z, tau)).  After shifting z into
[-1/2, 1/2] with h(z) + h(z+1) = (2/sqrt(tau)) e^{i pi/4 + i pi (z+1/2)^2/tau},
it is split into k explicit error-function terms H_k(+-z, tau) plus the
damped tails J(k +- z, tau).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from gmpy2 import mpc, mpfr

from .erf import _erf_rot_scaled
from .precision import PrecisionContext, RealLike, exp_2pii, tally
from .tables import EulerTable, LaguerreRule, euler_numbers, laguerre_rule

FAST_SHIFT = 5
FAST_ORDER = 124
FAST_TRUNCATION = 40
FAST_MIN_BITS = 113


@dataclass(frozen=True)
class QCoeffs:
    """Taylor coefficients of e^{i tau x^2/pi} / cosh(x) in powers of x^2."""

    q: tuple


@dataclass(frozen=True)
class PSeq:
    """p_k(x) = int_0^1 e^{-x u} u^k du for k = 0..len(p)-1."""

    x: mpfr
    p: tuple


@dataclass(frozen=True)
class MordellEval:
    z: mpfr
    tau: mpfr
    eps: float
    shift_k: int
    result: mpc


def shift_count(eps: float) -> int:
    """K(eps) = 2 + 2 ceil(ln(1/eps))."""
    return 2 + 2 * math.ceil(math.log(1.0 / eps))


def q_coeffs(tau: RealLike, count: int, euler: EulerTable, ctx: PrecisionContext) -> QCoeffs:
    """q_0(tau) .. q_count(tau), q_k = sum_j E~_{2k-2j} (i tau/pi)^j / j!."""
    if len(euler.e_tilde) < 2 * count + 1:
        raise ValueError("Euler table too short")
    with ctx.activate():
        return _q_coeffs(ctx.real(tau), count, euler)


def _q_coeffs(tau: mpfr, count: int, euler: EulerTable) -> QCoeffs:
    if not abs(tau) < 1:
        raise ValueError("q_coeffs needs |tau| < 1")
    e = euler.e_tilde
    ratio = tau / gmpy2.const_pi()
    mags = [mpfr(1)]
    for j in range(1, count + 1):
        mags.append(mags[-1] * ratio / j)
    # i^j cycles 1, i, -1, -i
    signed = [m if j % 4 < 2 else -m for j, m in enumerate(mags)]
    out = []
    for k in range(count + 1):
        re = mpfr(0)
        im = mpfr(0)
        for j in range(0, k + 1, 2):
            re += e[2 * k - 2 * j] * signed[j]
        for j in range(1, k + 1, 2):
            im += e[2 * k - 2 * j] * signed[j]
        out.append(mpc(re, im))
    tally((count + 1) * (count + 2))
    return QCoeffs(tuple(out))


def p_seq(x: RealLike, kmax: int, ctx: PrecisionContext) -> PSeq:
    """p_0(x) .. p_kmax(x) by the upward recursion p_k = (k p_{k-1} - e^{-x}) / x.

    Each step past k = x multiplies the rounding error by k/x; the product
    over the run is capped at 2^8, which admits x a little below kmax.
    """
    with ctx.activate():
        return _p_seq(ctx.real(x), kmax)


MAX_RECURSION_GROWTH = 8 * math.log(2)


def _recursion_growth(x: float, kmax: int) -> float:
    """log of prod_{x < k <= kmax} k/x."""
    return sum(math.log(k / x) for k in range(max(1, math.floor(x) + 1), kmax + 1))


def _p_seq(x: mpfr, kmax: int) -> PSeq:
    if not x > 0:
        raise ValueError("p_seq needs x > 0")
    if _recursion_growth(float(x), kmax) > MAX_RECURSION_GROWTH:
        raise ValueError(f"upward recursion unstable for x={float(x)}, kmax={kmax}")
    ex = gmpy2.exp(-x)
    p = [(1 - ex) / x]
    for k in range(1, kmax + 1):
        p.append((k * p[-1] - ex) / x)
    tally(3 * kmax + 3)
    return PSeq(x, tuple(p))


def _scaled_tail(u: mpfr, eps: float, bits: int) -> mpc:
    """e^{i u^2} (1 - Phi(e^{i pi/4} u)) for any real u."""
    if u >= 0:
        return _erf_rot_scaled(u, eps, bits)
    # 1 - Phi(-v) = 2 - (1 - Phi(v))
    return 2 * exp_2pii(u * u / (2 * gmpy2.const_pi())) - _erf_rot_scaled(-u, eps, bits)


def h_sum_H(z: RealLike, tau: RealLike, k: int, ctx: PrecisionContext,
            eps: float | None = None) -> mpc:
    """H_k(z, tau): the k error-function terms of the Mordell decomposition."""
    with ctx.activate():
        return _h_sum_H(ctx.real(z), ctx.real(tau), k, eps or ctx.target_eps, ctx.working_bits)


def _h_sum_H(z: mpfr, tau: mpfr, k: int, eps: float, bits: int) -> mpc:
    if not tau > 0:
        raise ValueError("H_k needs tau > 0")
    if k < 1:
        raise ValueError("H_k needs k >= 1")
    scale = gmpy2.sqrt(gmpy2.const_pi() / tau)
    eps_term = eps / (8 * k)
    acc = mpc(0)
    for l in range(k):
        term = _scaled_tail(scale * (z + l + mpfr(0.5)), eps_term, bits)
        acc = acc + term if l % 2 == 0 else acc - term
    w = gmpy2.sqrt(mpfr(2)) / 2
    return mpc(w, w) * acc / gmpy2.sqrt(tau)


def h_tail_J(w: RealLike, tau: RealLike, K: int, q: QCoeffs, ctx: PrecisionContext) -> mpc:
    """J(w, tau) ~ sum_{l<=K} q_l(tau) p_{2l}(2w) for w near K or above."""
    with ctx.activate():
        return _h_tail_J(ctx.real(w), K, q)


def _h_tail_J(w: mpfr, K: int, q: QCoeffs) -> mpc:
    p = _p_seq(2 * w, 2 * K).p
    re, im = mpfr(0), mpfr(0)
    for l in range(K + 1):
        ql = q.q[l]
        re += ql.real * p[2 * l]
        im += ql.imag * p[2 * l]
    tally(2 * K + 2)
    return mpc(re, im)


def h_tail_J_fast(w: RealLike, tau: RealLike, k: int, rule: LaguerreRule,
                  ctx: PrecisionContext) -> mpc:
    """J(w, tau) by Gauss-Laguerre quadrature after the substitution x = y/(2k).

    J(k+z, tau) = (1/(2k)) int_0^inf e^{-y} g(y/k) dy with
    g(y) = e^{i tau y^2/(4 pi) - z y} / cosh(y/2).  Not error-certified.
    """
    with ctx.activate():
        return _h_tail_J_fast(ctx.real(w), ctx.real(tau), k, rule)


def _h_tail_J_fast(w: mpfr, tau: mpfr, k: int, rule: LaguerreRule) -> mpc:
    if k < 1:
        raise ValueError("h_tail_J_fast needs k >= 1")
    z = w - k
    c = tau / (8 * gmpy2.const_pi() ** 2)  # tau y^2/(4 pi) = 2 pi c y^2
    acc = mpc(0)
    for node, weight in zip(rule.nodes, rule.weights):
        y = node / k
        mag = weight * gmpy2.exp(-z * y) / gmpy2.cosh(y / 2)
        acc += mag * exp_2pii(c * y * y)
    tally(8 * len(rule.nodes))
    return acc / (2 * k)


@lru_cache(maxsize=32)
def _q_cached(tau: mpfr, count: int, bits: int) -> QCoeffs:
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        table = _euler_table(2 * count, bits)
        return _q_coeffs(tau, count, table)


def _euler_table(count: int, bits: int) -> EulerTable:
    return euler_numbers(count, PrecisionContext(bits, 0.5))


def _gaussian_term(z: mpfr, tau: mpfr) -> mpc:
    """(2/sqrt(tau)) e^{i pi/4 + i pi (z+1/2)^2/tau} = h(z) + h(z+1)."""
    s = z + mpfr(0.5)
    return 2 * exp_2pii(mpfr(1) / 8 + s * s / (2 * tau)) / gmpy2.sqrt(tau)


def _h_core(z: mpfr, tau: mpfr, eps: float, bits: int, fast: bool,
            fast_rule: tuple[int, int]) -> tuple[mpc, int]:
    if fast:
        k = FAST_SHIFT
        rule = laguerre_rule(*fast_rule, PrecisionContext(bits, 0.5))
        H = _h_sum_H(z, tau, k, eps, bits) + _h_sum_H(-z, tau, k, eps, bits)
        J = _h_tail_J_fast(k + z, tau, k, rule) + _h_tail_J_fast(k - z, tau, k, rule)
        return H - J / gmpy2.const_pi(), k
    # J(K -+ z) keeps its e^{-2(K - |z|)} tail small only while K outgrows |z|
    K = shift_count(eps) + 2 * math.ceil(max(abs(z) - mpfr(0.5), 0))
    q = _q_cached(tau, K, bits)
    H = _h_sum_H(z, tau, K, eps, bits) + _h_sum_H(-z, tau, K, eps, bits)
    J = _h_tail_J(K + z, K, q) + _h_tail_J(K - z, K, q)
    # K is even, so (-1)^K = 1
    return H + J / gmpy2.const_pi(), K


def mordell_h(z: RealLike, tau: RealLike, eps: float, ctx: PrecisionContext,
              fast: bool = False, z_bound: float | None = 10.0,
              fast_rule: tuple[int, int] = (FAST_ORDER, FAST_TRUNCATION),
              reduce_z: bool = True) -> mpc:
    """h(z, tau) to within +-eps/sqrt(|tau|).

    ``fast`` replaces the certified tail series by a Gauss-Laguerre rule
    with 5 shifts; ``fast_rule`` is (order, nodes kept), 124 truncated to 40
    by default, and needs at least 113 working bits.  ``z_bound`` caps |z|
    (None lifts the cap; each unit of |z| costs one extra Gaussian term).
    With ``reduce_z=False`` the decomposition is applied at z itself, with
    the shift count grown by 2 ceil(|z| - 1/2), instead of first moving z
    into [-1/2, 1/2]; used to cross-check the shift identity.
    """
    return mordell_eval(z, tau, eps, ctx, fast=fast, z_bound=z_bound, fast_rule=fast_rule,
                        reduce_z=reduce_z).result


def mordell_eval(z: RealLike, tau: RealLike, eps: float, ctx: PrecisionContext,
                 fast: bool = False, z_bound: float | None = 10.0,
                 fast_rule: tuple[int, int] = (FAST_ORDER, FAST_TRUNCATION),
                 reduce_z: bool = True) -> MordellEval:
    if fast and ctx.working_bits < FAST_MIN_BITS:
        raise ValueError(f"fast Mordell path needs >= {FAST_MIN_BITS} working bits")
    if fast and not reduce_z:
        raise ValueError("the Gauss-Laguerre tail needs z reduced to [-1/2, 1/2]")
    if not 0 < eps < 0.1:
        raise ValueError(f"eps must lie in (0, 1/10), got {eps}")
    with ctx.activate():
        z = ctx.real(z)
        tau = ctx.real(tau)
        if tau == 0:
            raise ValueError("h(z, tau) is undefined at tau = 0")
        if not abs(tau) < 1:
            raise ValueError("mordell_h needs |tau| < 1")
        if z_bound is not None and not abs(z) < z_bound:
            raise ValueError(f"mordell_h needs |z| < {z_bound}, got {float(z)}")
        conj = tau < 0
        t = -tau if conj else tau
        acc = mpc(0)
        sign = 1
        zz = z
        half = mpfr(0.5)
        while reduce_z and zz > half:
            # h(zz) = G(zz - 1) - h(zz - 1)
            acc += sign * _gaussian_term(zz - 1, t)
            sign = -sign
            zz -= 1
        while reduce_z and zz < -half:
            # h(zz) = G(zz) - h(zz + 1)
            acc += sign * _gaussian_term(zz, t)
            sign = -sign
            zz += 1
        core, k = _h_core(zz, t, eps, ctx.working_bits, fast, fast_rule)
        val = acc + sign * core
        if conj:
            val = val.conjugate()
        return MordellEval(z, tau, eps, k, val)
