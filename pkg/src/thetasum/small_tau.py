"""F_n(z, tau) for |tau| < n^-4 by Taylor expansion of the quadratic phase.

Two branches, split at |z| = 1/n:

* |z| > 1/n: expand exp(2 pi i tau k^2); each power sum
  sum_k (tau k^2)^l e^{2 pi i z k} is a derivative of the geometric sum,
  computed by the Leibniz rule from the scaled derivatives f_j of
  1/(e^{2 pi i z} - 1) and g_j of e^{2 pi i z (n+1)} - 1.
* |z| <= 1/n: expand the whole phase and use the normalised power sums
  S_j(n) = n^-j sum_k k^j written with Bernoulli numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .direct import ThetaQuery, _direct
from .precision import PrecisionContext, exp_2pii, tally
from .tables import bernoulli_scaled


@dataclass(frozen=True)
class SmallTauState:
    """Row j of the coefficients a_{j,k}, k = 1..j+1, of f_j in powers of 1/(n(E-1))."""

    L: int
    j: int
    row: tuple

    @classmethod
    def start(cls, L: int) -> "SmallTauState":
        return cls(L, 0, (mpc(1),))


def a_row_advance(state: SmallTauState, n: int, ctx: PrecisionContext) -> SmallTauState:
    """a_{j+1,k} = -(2 pi i/n) ((k-1) a_{j,k-1} + (k/n) a_{j,k} [k <= j+1])."""
    with ctx.activate():
        return _advance(state, n)


def _advance(state: SmallTauState, n: int) -> SmallTauState:
    row = state.row
    j = state.j
    factor = mpc(0, -2 * gmpy2.const_pi() / n)
    new = []
    for k in range(1, j + 3):
        acc = mpc(0)
        if k >= 2:
            acc += (k - 1) * row[k - 2]
        if k <= j + 1:
            acc += row[k - 1] * k / n
        new.append(factor * acc)
    tally(4 * (j + 2))
    return SmallTauState(state.L, j + 1, tuple(new))


def _truncation(n: int, rho: mpfr, eps: float) -> int:
    """Smallest L with (n+1) sum_{l>L} (2 pi rho)^l / l! < eps/2."""
    x = float(2 * gmpy2.const_pi() * rho)
    target = eps / (2 * (n + 1))
    term = 1.0
    l = 0
    while True:
        l += 1
        term *= x / l
        # geometric bound on the remaining tail once the ratio is below 1/2
        if x / (l + 1) <= 0.5 and 2 * term < target:
            return l - 1


def _binomial_row(m: int) -> list[int]:
    row = [1]
    for j in range(m):
        row.append(row[-1] * (m - j) // (j + 1))
    return row


def _branch_a(n: int, z: mpfr, tau: mpfr, L: int) -> mpc:
    two_pi = 2 * gmpy2.const_pi()
    E = exp_2pii(z)
    D = n * (E - 1)
    if not abs(D) >= 4:
        raise ArithmeticError(f"denominator n|e^(2 pi i z) - 1| = {float(abs(D))} < 4")
    u = 1 / D
    top = 2 * L
    u_pow = [mpc(1), u]
    for _ in range(top + 1):
        u_pow.append(u_pow[-1] * u)
    # f_j = sum_k a_{j,k} u^k
    f = []
    state = SmallTauState.start(L)
    for j in range(top + 1):
        if j:
            state = _advance(state, n)
        acc = mpc(0)
        for k, a in enumerate(state.row, start=1):
            acc += a * u_pow[k]
        f.append(acc)
    # g_j = (2 pi i (n+1)/n^2)^j E^{n+1} - [j == 0]
    En1 = exp_2pii(z * (n + 1))
    ratio = mpc(0, two_pi * (n + 1) / (n * n))
    g = [En1 - 1]
    cur = En1
    for _ in range(top):
        cur = cur * ratio
        g.append(cur)
    total = mpc(0)
    coef = mpc(1)  # (tau n^4)^l / (l! (2 pi i)^l)
    step = tau * mpfr(n) ** 4 / mpc(0, two_pi)
    for l in range(L + 1):
        if l:
            coef = coef * step / l
        binom = _binomial_row(2 * l)
        inner = mpc(0)
        for j in range(2 * l + 1):
            inner += binom[j] * f[j] * g[2 * l - j]
        total += coef * inner
    tally(4 * (top + 1) ** 2 + 6 * (L + 1) ** 2)
    return n * total


def _power_sums(n: int, top: int, bern: tuple) -> list[mpfr]:
    """S_j(n) = n^-j sum_{k=0}^n k^j for j = 0..top."""
    out = [mpfr(n + 1)]
    inv_n = 1 / mpfr(n)
    inv_pows = [mpfr(1)]
    for _ in range(top + 1):
        inv_pows.append(inv_pows[-1] * inv_n)
    for j in range(1, top + 1):
        acc = mpfr(0)
        falling = 1  # (j+1)!/(j+1-i)! = C(j+1, i) i!
        for i in range(j + 1):
            if i:
                falling *= j + 2 - i
            term = bern[i] * falling * inv_pows[i]
            acc = acc - term if i % 2 else acc + term
        out.append(n * acc / (j + 1))
    tally(3 * (top + 1) ** 2)
    return out


def _branch_b(n: int, z: mpfr, tau: mpfr, L: int, ctx_bits: int) -> mpc:
    top = 2 * L
    bern = bernoulli_scaled(top, _bits_ctx(ctx_bits)).b_over_fact
    S = _power_sums(n, top, bern)
    nz = n * z
    n2t = n * n * tau
    total = mpc(0)
    coef = mpc(1)  # (2 pi i)^l / l!
    two_pi_i = mpc(0, 2 * gmpy2.const_pi())
    for l in range(L + 1):
        if l:
            coef = coef * two_pi_i / l
        binom = _binomial_row(l)
        inner = mpfr(0)
        for j in range(l + 1):
            inner += binom[j] * nz ** (l - j) * n2t ** j * S[l + j]
        total += coef * inner
    tally(4 * (L + 1) ** 2)
    return total


def _bits_ctx(bits: int) -> PrecisionContext:
    return PrecisionContext(bits, 0.5)


def small_tau_eval(q: ThetaQuery, ctx: PrecisionContext | None = None, *,
                   fallback: bool = True, L: int | None = None) -> mpc:
    """F_n(z, tau) to within +-q.eps for |z| <= 1/2, |tau| < n^-4.

    The truncation length L defaults to the smallest value whose tail
    bound is below eps/2.  With ``fallback`` the direct sum is used when
    L^3 >= n, where the expansion is no cheaper than summing.
    """
    ctx = ctx or q.default_context()
    n = q.n
    if n < 1:
        raise ValueError("small_tau_eval needs n >= 1")
    with ctx.activate():
        z = ctx.real(q.z)
        tau = ctx.real(q.tau)
        if abs(z) > mpfr(0.5):
            raise ValueError("small_tau_eval needs |z| <= 1/2; normalise first")
        if not abs(tau) < 1 / mpfr(n) ** 4:
            raise ValueError("small_tau_eval needs |tau| < n^-4")
        use_a = abs(z) * n > 1
        if L is None:
            rho = abs(tau) * n * n if use_a else abs(z) * n + abs(tau) * n * n
            L = _truncation(n, rho, q.eps)
        if fallback and L ** 3 >= n:
            return _direct(n, z, tau)
        if use_a:
            return _branch_a(n, z, tau, L)
        return _branch_b(n, z, tau, L, ctx.working_bits)


def default_truncation(n: int, z: float, tau: float, eps: float) -> int:
    """The L small_tau_eval would pick, for diagnostics."""
    rho = abs(tau) * n * n if abs(z) * n > 1 else abs(z) * n + abs(tau) * n * n
    return _truncation(n, mpfr(rho), eps)

