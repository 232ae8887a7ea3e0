"""Polylogarithmic-time evaluation of F_n(z, tau).

For tau > 0 and any m, n >= 0 the sum satisfies the exact identity

    F_n(z, tau) = e^{i pi/4 - i pi z^2/(2 tau)} / sqrt(2 tau)
                  * F_m(z/(2 tau), -1/(4 tau)) + R_{m,n}(z, tau),

with a remainder made of two Mordell integrals.  Choosing m = floor(2 n tau)
at least halves the length of the sum, so iterating (after renormalising
(z, tau) each time) reaches a short or nearly-linear-phase sum after at most
log2(n) steps.  The running state keeps F_n = alpha_j F_{n_j}(z_j, tau_j) + beta_j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .direct import ThetaQuery, _direct, _normalize
from .mordell import mordell_eval
from .precision import PrecisionContext, RealLike, count_ops, exp_2pii, make_context, tally
from .small_tau import small_tau_eval


@dataclass(frozen=True)
class RecursionState:
    j: int
    n_j: int
    z_j: mpfr
    tau_j: mpfr
    alpha_j: mpc
    beta_j: mpc


@dataclass(frozen=True)
class RemainderInput:
    m: int
    n: int
    z: RealLike
    tau: RealLike


def remainder_R(inp: RemainderInput, eps_h: float, ctx: PrecisionContext,
                fast_mordell: bool = False) -> mpc:
    """R_{m,n}(z, tau) for tau > 0, each Mordell integral to +-eps_h/sqrt(2 tau)."""
    with ctx.activate():
        return _remainder(inp.m, inp.n, ctx.real(inp.z), ctx.real(inp.tau), eps_h, ctx,
                          fast_mordell)


def _remainder(m: int, n: int, z: mpfr, tau: mpfr, eps_h: float, ctx: PrecisionContext,
               fast_mordell: bool) -> mpc:
    if not tau > 0:
        raise ValueError("remainder_R needs tau > 0")
    half = mpfr(0.5)
    # arguments of size |2 n tau - m| arise for arbitrary m; lift the |z| cap then
    h1 = mordell_eval(z - tau + half, -2 * tau, eps_h, ctx, fast=fast_mordell, z_bound=None).result
    h2 = mordell_eval(z + (2 * n + 1) * tau - m - half, -2 * tau, eps_h, ctx,
                      fast=fast_mordell, z_bound=None).result
    ph1 = exp_2pii(-(z - tau / 2) / 2)
    nh = n + half
    ph2 = exp_2pii(nh * (z + tau * nh))
    second = ph2 * h2
    if m % 2:
        second = -second
    return mpc(0, -0.5) * (ph1 * h1 + second)


def modular_prefactor(z: RealLike, tau: RealLike, ctx: PrecisionContext) -> mpc:
    """e^{i pi/4 - i pi z^2/(2 tau)} / sqrt(2 tau), the factor in front of F_m."""
    with ctx.activate():
        z, tau = ctx.real(z), ctx.real(tau)
        return exp_2pii(mpfr(1) / 8 - z * z / (4 * tau)) / gmpy2.sqrt(2 * tau)


def _validate(q: ThetaQuery) -> None:
    if q.n < 1:
        raise ValueError(f"n must be >= 1, got {q.n}")
    if not 0 < q.eps < 0.1:
        raise ValueError(f"eps must lie in (0, 1/10), got {q.eps}")


def fast_eval(q: ThetaQuery, ctx: PrecisionContext | None = None, *,
              fast_mordell: bool = False, trace: list | None = None) -> mpc:
    """F_n(z, tau) to within +-eps by the modular recursion.

    Each step (n, z, tau) -> (floor(2 n |tau|), z/(2|tau|), -1/(4 tau)) is
    followed by renormalisation.  The loop stops with a direct sum once
    n_j <= ln(n)^3, or with the small-tau expansion once |tau_j| < n_j^-4.
    Internal quantities are computed to +-eps/n^3.  If ``trace`` is a list,
    the state at every step is appended to it.
    """
    _validate(q)
    n = q.n
    ctx = ctx or make_context(n, q.eps)
    eps_int = q.eps / float(n) ** 3
    threshold = math.log(n) ** 3
    with ctx.activate():
        norm = _normalize(ctx.real(q.z), ctx.real(q.tau))
        state = RecursionState(1, n, norm.z_norm, norm.tau_norm, mpc(1), mpc(0))
        while True:
            if trace is not None:
                trace.append(state)
            n_j, z_j, tau_j = state.n_j, state.z_j, state.tau_j
            alpha, beta = state.alpha_j, state.beta_j
            if n_j <= threshold:
                return alpha * _direct(n_j, z_j, tau_j) + beta
            if abs(tau_j) < 1 / mpfr(n_j) ** 4:
                f = small_tau_eval(ThetaQuery(n_j, z_j, tau_j, eps_int), ctx)
                return alpha * f + beta
            t = abs(tau_j)
            n_next = int(gmpy2.floor(2 * n_j * t))
            if not 2 * n_next <= n_j:
                raise AssertionError(f"recursion failed to halve: {n_j} -> {n_next}")
            if tau_j > 0:
                pref = exp_2pii(mpfr(1) / 8 - z_j * z_j / (4 * t)) / gmpy2.sqrt(2 * t)
                rem = _remainder(n_next, n_j, z_j, t, eps_int, ctx, fast_mordell)
            else:
                pref = exp_2pii(-mpfr(1) / 8 + z_j * z_j / (4 * t)) / gmpy2.sqrt(2 * t)
                rem = _remainder(n_next, n_j, -z_j, t, eps_int, ctx, fast_mordell).conjugate()
            tally(12)
            nxt = _normalize(z_j / (2 * t), -1 / (4 * tau_j))
            state = RecursionState(state.j + 1, n_next, nxt.z_norm, nxt.tau_norm,
                                   alpha * pref, beta + alpha * rem)


def op_counter(q: ThetaQuery, ctx: PrecisionContext | None = None, **kwargs) -> int:
    """Number of extended-precision operations fast_eval spends on ``q``."""
    with count_ops() as box:
        fast_eval(q, ctx, **kwargs)
    return box[0]


def direct_op_count(q: ThetaQuery, ctx: PrecisionContext | None = None) -> int:
    """Number of extended-precision operations of the plain n+1 term sum."""
    ctx = ctx or q.default_context()
    with count_ops() as box, ctx.activate():
        _direct(q.n, ctx.real(q.z), ctx.real(q.tau))
    return box[0]
