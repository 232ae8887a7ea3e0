"""Direct O(n) summation of F_n(z, tau) = sum_{k=0}^n exp(2 pi i (z k + tau k^2)).

This is the ground-truth oracle for every faster evaluator, together with
the exact normalisation identities

    F_n(z, tau) = F_n(z + k, tau + l) = F_n(z + 1/2, tau + 1/2),  k, l integers.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .precision import PrecisionContext, RealLike, exp_2pii, make_context, tally


@dataclass(frozen=True)
class ThetaQuery:
    n: int
    z: RealLike
    tau: RealLike
    eps: float = 1e-15

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"n must be nonnegative, got {self.n}")
        if not self.eps > 0:
            raise ValueError("eps must be positive")

    def default_context(self) -> PrecisionContext:
        return make_context(max(self.n, 1), min(self.eps, 0.09))


@dataclass(frozen=True)
class NormalizedQuery:
    z_norm: mpfr
    tau_norm: mpfr


def _reduce(t: mpfr) -> mpfr:
    """t - floor(t + 1/2), in [-1/2, 1/2)."""
    return t - gmpy2.floor(t + mpfr(0.5))


def normalize(z: RealLike, tau: RealLike, ctx: PrecisionContext | None = None) -> NormalizedQuery:
    """Map (z, tau) to [-1/2, 1/2) x [-1/4, 1/4] without changing F_n."""
    if ctx is not None:
        with ctx.activate():
            return _normalize(ctx.real(z), ctx.real(tau))
    return _normalize(mpfr(z), mpfr(tau))


def _normalize(z: mpfr, tau: mpfr) -> NormalizedQuery:
    z = _reduce(z)
    tau = _reduce(tau)
    if abs(tau) > mpfr(0.25):
        half = mpfr(0.5)
        z = _reduce(z + half)
        tau = _reduce(tau + half)
    return NormalizedQuery(z, tau)


def _direct(n: int, z: mpfr, tau: mpfr) -> mpc:
    twopi = 2 * gmpy2.const_pi()
    re, im = mpfr(0), mpfr(0)
    for k in range(n + 1):
        t = z * k + tau * (k * k)
        s, c = gmpy2.sin_cos(twopi * (t - gmpy2.floor(t)))
        re += c
        im += s
    tally(6 * (n + 1))
    return mpc(re, im)


def direct_sum(q: ThetaQuery, ctx: PrecisionContext | None = None) -> mpc:
    """F_n(z, tau) by summing all n+1 terms, each phase reduced mod 1 first."""
    ctx = ctx or q.default_context()
    with ctx.activate():
        return _direct(q.n, ctx.real(q.z), ctx.real(q.tau))


def conj_symmetry_check(q: ThetaQuery, ctx: PrecisionContext | None = None) -> mpfr:
    """|conj(F_n(z, tau)) - F_n(-z, -tau)|, which is zero up to rounding."""
    ctx = ctx or q.default_context()
    with ctx.activate():
        z, tau = ctx.real(q.z), ctx.real(q.tau)
        a = _direct(q.n, z, tau).conjugate()
        b = _direct(q.n, -z, -tau)
        return abs(a - b)


def phase_term(k: int, z: RealLike, tau: RealLike, ctx: PrecisionContext) -> mpc:
    """The single summand exp(2 pi i (z k + tau k^2))."""
    with ctx.activate():
        return exp_2pii(ctx.real(z) * k + ctx.real(tau) * (k * k))
