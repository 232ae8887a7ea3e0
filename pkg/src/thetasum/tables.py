"""Cached constant tables: scaled Euler and Bernoulli numbers, Gauss-Laguerre rules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .precision import PrecisionContext, tally


class ConvergenceError(ArithmeticError):
    """A root search failed to converge at the requested precision."""


@dataclass(frozen=True)
class EulerTable:
    """Taylor coefficients of 1/cosh(x): ``e_tilde[k] = E_k / k!``."""

    e_tilde: tuple


@dataclass(frozen=True)
class BernoulliTable:
    """``b_over_fact[i] = B_i / i!`` with the convention B_1 = -1/2."""

    b_over_fact: tuple


@dataclass(frozen=True)
class LaguerreRule:
    order: int
    truncation: int
    nodes: tuple
    weights: tuple


@lru_cache(maxsize=None)
def _euler_exact(count: int) -> tuple[Fraction, ...]:
    # sech(x) * cosh(x) = 1, solved term by term for the sech coefficients
    inv_fact = [Fraction(1, math.factorial(m)) for m in range(count + 1)]
    e = [Fraction(0)] * (count + 1)
    e[0] = Fraction(1)
    for k in range(2, count + 1, 2):
        e[k] = -sum(e[k - m] * inv_fact[m] for m in range(2, k + 1, 2))
    return tuple(e)


@lru_cache(maxsize=None)
def _bernoulli_exact(count: int) -> tuple[Fraction, ...]:
    # (x / (e^x - 1)) * ((e^x - 1) / x) = 1 with (e^x - 1)/x = sum x^m/(m+1)!
    inv_fact = [Fraction(1, math.factorial(m + 1)) for m in range(count + 1)]
    b = [Fraction(0)] * (count + 1)
    b[0] = Fraction(1)
    for k in range(1, count + 1):
        b[k] = -sum(b[i] * inv_fact[k - i] for i in range(k))
    return tuple(b)


def _to_mpfr(values, bits: int) -> tuple:
    return tuple(mpfr(gmpy2.mpq(v.numerator, v.denominator), bits) for v in values)


@lru_cache(maxsize=64)
def _euler_cached(count: int, bits: int) -> EulerTable:
    return EulerTable(_to_mpfr(_euler_exact(count), bits))


@lru_cache(maxsize=64)
def _bernoulli_cached(count: int, bits: int) -> BernoulliTable:
    return BernoulliTable(_to_mpfr(_bernoulli_exact(count), bits))


def euler_numbers(count: int, ctx: PrecisionContext) -> EulerTable:
    """Return E~_0 .. E~_count (odd entries are zero)."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    tally((count // 2 + 1) ** 2 // 2)
    return _euler_cached(count, ctx.working_bits)


def bernoulli_scaled(count: int, ctx: PrecisionContext) -> BernoulliTable:
    """Return B_i / i! for 0 <= i <= count."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    tally((count + 1) ** 2 // 2)
    return _bernoulli_cached(count, ctx.working_bits)


# -- Gauss-Laguerre ----------------------------------------------------------

def _laguerre_pair(order: int, x: mpfr) -> tuple[mpfr, mpfr]:
    """(L_order(x), L_{order-1}(x)) by the three-term recurrence."""
    prev, cur = mpfr(1), 1 - x
    if order == 1:
        return cur, prev
    for k in range(1, order):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur, prev


def _refine_root(order: int, lo: mpfr, hi: mpfr, guess: mpfr, tol: mpfr,
                 max_iter: int) -> mpfr:
    f_lo, _ = _laguerre_pair(order, lo)
    f_hi, _ = _laguerre_pair(order, hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise ConvergenceError(f"no sign change of L_{order} on [{float(lo)}, {float(hi)}]")
    x = guess
    for _ in range(max_iter):
        f, f_prev = _laguerre_pair(order, x)
        if f == 0:
            return x
        if (f > 0) == (f_lo > 0):
            lo, f_lo = x, f
        else:
            hi = x
        deriv = order * (f - f_prev) / x
        step = f / deriv if deriv != 0 else None
        if step is not None and lo < x - step < hi:
            x_new = x - step
        else:
            x_new = (lo + hi) / 2
        if abs(x_new - x) <= tol * x_new or hi - lo <= tol * lo:
            return x_new
        x = x_new
    raise ConvergenceError(f"root search for L_{order} did not converge in {max_iter} steps")


@lru_cache(maxsize=16)
def _laguerre_cached(order: int, truncation: int, bits: int) -> LaguerreRule:
    seeds = np.polynomial.laguerre.laggauss(order)[0]
    extra = 48
    with gmpy2.context(gmpy2.get_context(), precision=bits + extra):
        tol = mpfr(2) ** (-(bits + extra - 8))
        nodes, weights = [], []
        for i in range(truncation):
            # midpoints between consecutive seeds bracket each root
            lo = mpfr(0) if i == 0 else mpfr((seeds[i - 1] + seeds[i]) / 2)
            if i + 1 < order:
                hi = mpfr((seeds[i] + seeds[i + 1]) / 2)
            else:
                hi = mpfr(seeds[i] * 1.5 + 4)
            x = _refine_root(order, lo, hi, mpfr(seeds[i]), tol, 4 * (bits + extra))
            _, l_prev = _laguerre_pair(order, x)
            w = x / (order * order * l_prev * l_prev)
            nodes.append(mpfr(x, bits))
            weights.append(mpfr(w, bits))
    for a, b in zip(nodes, nodes[1:]):
        if not a < b:
            raise ConvergenceError("Laguerre nodes are not strictly increasing")
    return LaguerreRule(order, truncation, tuple(nodes), tuple(weights))


def laguerre_rule(order: int, truncation: int, ctx: PrecisionContext) -> LaguerreRule:
    """Order-``order`` Gauss-Laguerre rule (weight e^-y) keeping the smallest nodes.

    Double-precision seeds bracket each root; the roots are then polished by
    Newton steps on the three-term recurrence with a bisection fallback, at
    ``working_bits`` plus 48 guard bits.
    """
    if not 1 <= truncation <= order:
        raise ValueError(f"need 1 <= truncation <= order, got {truncation}, {order}")
    return _laguerre_cached(order, truncation, ctx.working_bits)
