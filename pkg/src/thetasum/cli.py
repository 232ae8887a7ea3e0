"""Command-line front end: single evaluations and the timing benchmark.

    thetasum eval --n 1000 --z 0.1 --tau 0.2 --eps 1e-20 [--mode fast|direct|compare]
    thetasum bench --n-list 100,1000,10000 --samples 20 --eps 1e-15 --seed 1

The benchmark writes CSV (header ``n,mean_time_fast_s,mean_time_direct_s,
max_abs_diff,mean_ops_fast``) to standard output.  Random (z, tau) pairs are
drawn with Python's ``random.Random`` (Mersenne Twister MT19937) from the given
seed: z uniform on (-1/2, 1/2), tau uniform on (0, 1/4).
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .direct import ThetaQuery, direct_sum
from .fast import fast_eval
from .precision import PrecisionContext, count_ops, make_context

MODES = ("fast", "direct", "compare")
CSV_FIELDS = ("n", "mean_time_fast_s", "mean_time_direct_s", "max_abs_diff", "mean_ops_fast")


@dataclass
class BenchConfig:
    n_list: list[int]
    samples: int = 10
    eps: float = 1e-15
    seed: int = 0
    mode: str = "compare"
    bits: int | None = None
    fast_mordell: bool = False

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.n_list or any(n < 1 for n in self.n_list):
            raise ValueError("n_list must be a nonempty list of integers >= 1")
        if not 0 < self.eps < 0.1:
            raise ValueError("eps must lie in (0, 1/10)")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")


@dataclass
class BenchRecord:
    n: int
    mean_time_fast_s: float | None = None
    mean_time_direct_s: float | None = None
    max_abs_diff: float | None = None
    mean_ops_fast: float | None = None
    samples: list = field(default_factory=list, repr=False)

    def row(self) -> list[str]:
        def fmt(v):
            return "" if v is None else repr(v) if isinstance(v, int) else f"{v:.6e}"
        return [str(self.n)] + [fmt(getattr(self, k)) for k in CSV_FIELDS[1:]]


def sample_domain(rng: random.Random) -> tuple[float, float]:
    """One (z, tau) pair from (-1/2, 1/2) x (0, 1/4)."""
    while True:
        u, v = rng.random(), rng.random()
        if u > 0 and v > 0:
            return u - 0.5, 0.25 * v


def _context(n: int, eps: float, bits: int | None) -> PrecisionContext:
    if bits is None and os.environ.get("THETA_BITS"):
        bits = int(os.environ["THETA_BITS"])
    return make_context(max(n, 1), eps, bits=bits)


def run_bench(cfg: BenchConfig) -> list[BenchRecord]:
    rng = random.Random(cfg.seed)
    records = []
    for n in cfg.n_list:
        ctx = _context(n, cfg.eps, cfg.bits)
        rec = BenchRecord(n)
        t_fast = t_direct = 0.0
        ops = 0
        diff = 0.0
        # untimed warm-up so cached tables are built outside the timed region
        warm = ThetaQuery(n, 0.1, 0.1, cfg.eps)
        if cfg.mode != "direct":
            fast_eval(warm, ctx, fast_mordell=cfg.fast_mordell)
        for _ in range(cfg.samples):
            z, tau = sample_domain(rng)
            q = ThetaQuery(n, z, tau, cfg.eps)
            rec.samples.append((z, tau))
            if cfg.mode in ("fast", "compare"):
                with count_ops() as box:
                    t0 = time.perf_counter()
                    f = fast_eval(q, ctx, fast_mordell=cfg.fast_mordell)
                    t_fast += time.perf_counter() - t0
                ops += box[0]
            if cfg.mode in ("direct", "compare"):
                t0 = time.perf_counter()
                d = direct_sum(q, ctx)
                t_direct += time.perf_counter() - t0
            if cfg.mode == "compare":
                diff = max(diff, float(abs(f - d)))
        if cfg.mode in ("fast", "compare"):
            rec.mean_time_fast_s = t_fast / cfg.samples
            rec.mean_ops_fast = ops / cfg.samples
        if cfg.mode in ("direct", "compare"):
            rec.mean_time_direct_s = t_direct / cfg.samples
        if cfg.mode == "compare":
            rec.max_abs_diff = diff
        records.append(rec)
    return records


def write_csv(records: list[BenchRecord], out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        writer.writerow(rec.row())


def format_real(x, digits: int) -> str:
    """Round to ``digits`` significant digits, dropping trailing zeros."""
    if x == 0:
        return "0.0"
    s = format(x, f".{digits}g")
    if "e" in s:
        mant, exp = s.split("e")
        if "." in mant:
            mant = mant.rstrip("0").rstrip(".")
        return f"{mant}e{int(exp)}"
    if "." in s:
        s = s.rstrip("0")
        if s.endswith("."):
            s += "0"
    else:
        s += ".0"
    return s


def _parse_n_list(text: str) -> list[int]:
    try:
        return [int(float(tok)) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n list: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thetasum",
                                     description="Truncated theta sums F_n(z, tau).")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a single F_n(z, tau)")
    ev.add_argument("--n", type=int, required=True)
    ev.add_argument("--z", type=str, required=True)
    ev.add_argument("--tau", type=str, required=True)
    ev.add_argument("--eps", type=float, default=1e-15)
    ev.add_argument("--mode", choices=MODES, default="fast")
    ev.add_argument("--bits", type=int, default=None,
                    help="working precision in bits (default: sized from n and eps, or $THETA_BITS)")
    ev.add_argument("--fast-mordell", action="store_true",
                    help="Gauss-Laguerre tail for the Mordell integrals (not error-certified)")

    bench = sub.add_parser("bench", help="timing benchmark, CSV on stdout")
    bench.add_argument("--n-list", type=_parse_n_list, default=[100, 1000, 10000])
    bench.add_argument("--samples", type=int, default=10)
    bench.add_argument("--eps", type=float, default=1e-15)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--mode", choices=MODES, default="compare")
    bench.add_argument("--bits", type=int, default=None)
    bench.add_argument("--fast-mordell", action="store_true")
    return parser


def cli_eval(args, out=None) -> int:
    out = out or sys.stdout
    if args.n < 0:
        raise ValueError(f"n must be >= 0, got {args.n}")
    if not 0 < args.eps < 0.1:
        raise ValueError(f"eps must lie in (0, 1/10), got {args.eps}")
    digits = math.ceil(math.log10(1.0 / args.eps)) + 2
    ctx = _context(args.n, args.eps, args.bits)
    # decimal or p/q strings are read exactly, then rounded once to working precision
    z, tau = ctx.real(Fraction(args.z)), ctx.real(Fraction(args.tau))
    q = ThetaQuery(args.n, z, tau, args.eps)
    if args.n == 0 or args.mode == "direct":
        val = direct_sum(q, ctx)
    else:
        val = fast_eval(q, ctx, fast_mordell=args.fast_mordell)
    print(format_real(val.real, digits), format_real(val.imag, digits), file=out)
    if args.mode == "compare":
        diff = abs(val - direct_sum(q, ctx))
        print(f"{float(diff):.3e}", file=out)
    return 0


def cli_bench(cfg: BenchConfig, out=None) -> int:
    write_csv(run_bench(cfg), out or sys.stdout)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eval":
            return cli_eval(args)
        cfg = BenchConfig(args.n_list, args.samples, args.eps, args.seed, args.mode,
                          args.bits, args.fast_mordell)
        return cli_bench(cfg)
    except ValueError as exc:
        print(f"thetasum: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
