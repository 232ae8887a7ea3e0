"""The error function on the 45-degree ray, Phi(e^{i pi/4} x) for real x.

Small arguments use the Taylor series at the origin.  For x > 1 we use the
Hunter-Regan pole-corrected Poisson-sum representation

    Phi(w) = 1 - (h w e^{-w^2}/pi) sum_k e^{-k^2 h^2}/(w^2 + k^2 h^2) + R(w, h),
    R(w, h) = 2/(e^{2 pi w/h} - 1) when Re(w) < pi/h, else 0,

with w = e^{i pi/4} x, so w^2 = i x^2, and the step h picked from x so that
the discretisation error stays below eps^4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from gmpy2 import mpc, mpfr

from .precision import PrecisionContext, RealLike, exp_2pii, tally


@dataclass(frozen=True)
class ErfConfig:
    eps: float
    gamma: mpfr
    step_size: mpfr
    trunc_n: int

    @classmethod
    def for_argument(cls, x: mpfr, eps: float) -> "ErfConfig":
        """Choose the Poisson step for argument ``x`` (active gmpy2 context)."""
        gamma = gmpy2.sqrt(-gmpy2.log(mpfr(eps)))
        if 2 * gamma < x < 4 * gamma:
            h = gmpy2.const_pi() / (4 * gamma)
        else:
            h = gmpy2.const_pi() / (2 * gamma)
        return cls(eps, gamma, h, math.ceil(4 * math.log(1.0 / eps)))


@lru_cache(maxsize=64)
def _gauss_weights(h: mpfr, count: int, bits: int) -> tuple:
    """e^{-k^2 h^2} for k = 1..count, via e^{-(k+1)^2 h^2} = e^{-k^2 h^2} e^{-(2k+1) h^2}."""
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        q = gmpy2.exp(-h * h)
        q2 = q * q
        out, val, step = [], q, q * q2
        for _ in range(count):
            out.append(val)
            val *= step
            step *= q2
    return tuple(out)


def _taylor(x: mpfr, eps: float) -> mpc:
    """Phi(e^{i pi/4} x) for 0 <= x <= 1 by the Maclaurin series."""
    # Phi(w x) = (2/sqrt(pi)) w x sum_n (-i x^2)^n / (n! (2n+1))
    x2 = x * x
    stop = mpfr(eps) * gmpy2.sqrt(gmpy2.const_pi()) / 8
    re, im = mpfr(0), mpfr(0)
    power = mpfr(1)  # x^{2n} / n!
    n = 0
    while True:
        term = power / (2 * n + 1)
        phase = n % 4
        if phase == 0:
            re += term
        elif phase == 1:
            im -= term
        elif phase == 2:
            re -= term
        else:
            im += term
        if x * term <= stop and n > 0:
            break
        n += 1
        power = power * x2 / n
    tally(2 * n + 2)
    w = gmpy2.sqrt(mpfr(2)) / 2
    scale = 2 * x / gmpy2.sqrt(gmpy2.const_pi())
    # multiply (re + i im) by e^{i pi/4} = w (1 + i)
    return mpc(scale * w * (re - im), scale * w * (re + im))


def _poisson_bracket(x: mpfr, cfg: ErfConfig, bits: int) -> mpc:
    """-i/x^2 + 2 sum_{k=1}^N e^{-k^2 h^2} / (i x^2 + k^2 h^2).

    Since |i x^2 + k^2 h^2| >= x^2, the tail beyond k is at most
    (2/x^2) sum_{k'>k} e^{-k'^2 h^2}; the loop stops once that bound,
    scaled by the prefactor h x/pi, falls below eps/16.
    """
    h = cfg.step_size
    b = x * x
    h2 = h * h
    weights = _gauss_weights(h, cfg.trunc_n, bits)
    # stop once 4 h e^{-k^2 h^2}/(pi x) < eps/16 with the ratio of successive weights <= 1/2
    cutoff = mpfr(cfg.eps) * gmpy2.const_pi() * x / (64 * h)
    half_ratio_k = math.ceil((math.log(2) / float(h2) - 1) / 2)
    re, im = mpfr(0), mpfr(0)
    used = 0
    for k, e in enumerate(weights, start=1):
        a = k * k * h2
        d = e / (a * a + b * b)
        re += a * d
        im -= b * d
        used = k
        if e < cutoff and k >= half_ratio_k:
            break
    tally(6 * used + 2)
    return mpc(2 * re, 2 * im - 1 / b)


def _pole_term(x: mpfr, h: mpfr) -> mpc | None:
    """The R(w, h) correction, or None when Re(w) >= pi/h."""
    re_w = x / gmpy2.sqrt(mpfr(2))
    if re_w >= gmpy2.const_pi() / h:
        return None
    # e^{2 pi w / h} with w = (1 + i) x / sqrt(2)
    scale = 2 * gmpy2.const_pi() * re_w / h
    arg = mpc(gmpy2.exp(scale), 0) * exp_2pii(re_w / h)
    tally(4)
    return 2 / (arg - 1)


def _rotation() -> mpc:
    w = gmpy2.sqrt(mpfr(2)) / 2
    return mpc(w, w)


def erf_rot(x: RealLike, eps: float, ctx: PrecisionContext) -> mpc:
    """Phi(e^{i pi/4} x) to within +-eps."""
    with ctx.activate():
        return _erf_rot(ctx.real(x), eps, ctx.working_bits)


def _erf_rot(x: mpfr, eps: float, bits: int) -> mpc:
    if x < 0:
        return -_erf_rot(-x, eps, bits)
    if x == 0:
        return mpc(0)
    if x <= 1:
        return _taylor(x, eps)
    return _poisson(x, eps, bits)


def _poisson(x: mpfr, eps: float, bits: int) -> mpc:
    cfg = ErfConfig.for_argument(x, eps)
    bracket = _poisson_bracket(x, cfg, bits)
    oscil = exp_2pii(-x * x / (2 * gmpy2.const_pi()))
    val = 1 - cfg.step_size * _rotation() * x * oscil * bracket / gmpy2.const_pi()
    pole = _pole_term(x, cfg.step_size)
    if pole is not None:
        val += pole
    return val


def erf_rot_scaled(x: RealLike, eps: float, ctx: PrecisionContext) -> mpc:
    """e^{i x^2} (1 - Phi(e^{i pi/4} x)) for x >= 0.

    For x > 1 the factor e^{-i x^2} of the Poisson representation cancels
    analytically, so no large oscillatory phase is ever formed.
    """
    with ctx.activate():
        return _erf_rot_scaled(ctx.real(x), eps, ctx.working_bits)


def _erf_rot_scaled(x: mpfr, eps: float, bits: int) -> mpc:
    if x < 0:
        raise ValueError("erf_rot_scaled needs x >= 0")
    if x == 0:
        return mpc(1)
    if x <= 1:
        return exp_2pii(x * x / (2 * gmpy2.const_pi())) * (1 - _taylor(x, eps))
    cfg = ErfConfig.for_argument(x, eps)
    bracket = _poisson_bracket(x, cfg, bits)
    val = cfg.step_size * _rotation() * x * bracket / gmpy2.const_pi()
    pole = _pole_term(x, cfg.step_size)
    if pole is not None:
        val -= exp_2pii(x * x / (2 * gmpy2.const_pi())) * pole
    return val
