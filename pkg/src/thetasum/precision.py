"""Extended-precision arithmetic layer.

Every numerical routine in the package takes a :class:`PrecisionContext` and
runs its arithmetic inside ``ctx.activate()``, which installs a gmpy2 (MPFR /
MPC) context with ``working_bits`` of mantissa.  Values are plain
``gmpy2.mpfr`` / ``gmpy2.mpc`` objects.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import gmpy2
from gmpy2 import mpc, mpfr

XReal = mpfr
XComplex = mpc
RealLike = Union[int, float, str, Fraction, mpfr]

MIN_BITS = 64


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision plus the accuracy target it was sized for."""

    working_bits: int
    target_eps: float
    n_hint: int = 1
    guard_multiplier: float = 1.0

    def __post_init__(self):
        if self.working_bits < MIN_BITS:
            raise ValueError(f"working_bits must be >= {MIN_BITS}, got {self.working_bits}")
        if not self.target_eps > 0:
            raise ValueError("target_eps must be positive")

    @property
    def output_bits(self) -> int:
        return math.ceil(math.log2(1.0 / self.target_eps))

    @property
    def guard_bits(self) -> int:
        return math.ceil(self.guard_multiplier * 5.0 * math.log2(self.n_hint / self.target_eps))

    @property
    def unit_roundoff(self) -> mpfr:
        return mpfr(2) ** (-self.working_bits)

    def activate(self):
        """Context manager installing this precision for gmpy2 arithmetic."""
        return gmpy2.context(gmpy2.get_context(), precision=self.working_bits,
                             real_prec=self.working_bits, imag_prec=self.working_bits)

    def real(self, x: RealLike) -> mpfr:
        if isinstance(x, Fraction):
            x = gmpy2.mpq(x.numerator, x.denominator)
        return mpfr(x, self.working_bits)

    def with_bits(self, bits: int) -> "PrecisionContext":
        return PrecisionContext(bits, self.target_eps, self.n_hint, self.guard_multiplier)


def make_context(n: int, eps: float, guard_multiplier: float = 1.0,
                 bits: int | None = None) -> PrecisionContext:
    """Size the working precision for evaluating an n-term sum to +-eps.

    ``working_bits = max(64, ceil(log2(1/eps)) + ceil(m * 5 * log2(n/eps)))``
    where ``m`` is ``guard_multiplier``.  Passing ``bits`` pins the precision
    instead (used for fixed-precision experiments).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 < eps < 0.1:
        raise ValueError(f"eps must lie in (0, 1/10), got {eps}")
    if not guard_multiplier > 0:
        raise ValueError("guard_multiplier must be positive")
    if bits is None:
        output = math.ceil(math.log2(1.0 / eps))
        guard = math.ceil(guard_multiplier * 5.0 * math.log2(n / eps))
        bits = max(MIN_BITS, output + guard)
    return PrecisionContext(int(bits), float(eps), int(n), float(guard_multiplier))


def pi() -> mpfr:
    return gmpy2.const_pi()


def frac(t: mpfr) -> mpfr:
    """t mod 1, in [0, 1)."""
    return t - gmpy2.floor(t)


def exp_2pii(t: mpfr) -> mpc:
    """exp(2*pi*i*t) in the active gmpy2 context, reducing t mod 1 first."""
    tally(1)
    r = frac(t)
    s, c = gmpy2.sin_cos(2 * gmpy2.const_pi() * r)
    return mpc(c, s)


def complex_exp_2pii(t: RealLike, ctx: PrecisionContext) -> mpc:
    """exp(2*pi*i*t) at the working precision of ``ctx``."""
    with ctx.activate():
        return exp_2pii(ctx.real(t))


# -- operation counting ------------------------------------------------------

_op_box: ContextVar[list | None] = ContextVar("thetasum_op_box", default=None)


def tally(k: int = 1) -> None:
    """Record ``k`` extended-precision operations when a counter is active."""
    box = _op_box.get()
    if box is not None:
        box[0] += k


@contextmanager
def count_ops() -> Iterator[list]:
    """Count operations inside the block; the total is ``box[0]``."""
    box = [0]
    token = _op_box.set(box)
    try:
        yield box
    finally:
        _op_box.reset(token)
