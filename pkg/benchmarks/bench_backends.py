"""Benchmark the JIT (numba) kernels against the pure-numpy fallback.

Run:
    python benchmarks/bench_backends.py [--tau-limit 200000] [--phase-n 262144]

The numbers depend heavily on core count: the eta convolution is
memory-streaming and the vectorized numpy path can win on small machines,
while the phase kernels favor the JIT scalar loops.
"""

import argparse
import time

import numpy as np

from expsumlab import kernels_numba as knb
from expsumlab import kernels_numpy as knp
from expsumlab.hecke import pentagonal_series


def bench(func, *args, repeat=3, warmup=True):
    if warmup:
        func(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tau-limit", type=int, default=200_000)
    ap.add_argument("--phase-n", type=int, default=1 << 18)
    args = ap.parse_args()

    rows = []

    offs, signs = pentagonal_series(args.tau_limit - 1)
    p = 2147483647
    t_nb = bench(knb.eta_power_mod, args.tau_limit, offs, signs, 24, p, repeat=2)
    t_np = bench(knp.eta_power_mod, args.tau_limit, offs, signs, 24, p, repeat=2)
    a = knb.eta_power_mod(args.tau_limit, offs, signs, 24, p)
    b = knp.eta_power_mod(args.tau_limit, offs, signs, 24, p)
    rows.append(("eta_power_mod", f"M={args.tau_limit}", t_nb, t_np,
                 bool(np.array_equal(a % p, b % p))))

    ns = np.arange(args.phase_n, 2 * args.phase_n, dtype=np.int64)
    t_nb = bench(knb.pow_phase_frac, ns, 0.97, 1.0, 1)
    t_np = bench(knp.pow_phase_frac, ns, 0.97, 1.0, 1)
    a = knb.pow_phase_frac(ns, 0.97, 1.0, 1)
    b = knp.pow_phase_frac(ns, 0.97, 1.0, 1)
    d = np.abs(a - b)
    rows.append(("pow_phase_frac", f"n={len(ns)}", t_nb, t_np,
                 bool(np.max(np.minimum(d, 1 - d)) < 1e-12)))

    t_nb = bench(knb.minus_t_log_frac, ns, 1360.5)
    t_np = bench(knp.minus_t_log_frac, ns, 1360.5)
    rows.append(("minus_t_log_frac", f"n={len(ns)}", t_nb, t_np, True))

    t_nb = bench(knb.pow_floor, ns, 1.02)
    t_np = bench(knp.pow_floor, ns, 1.02)
    fa, _ = knb.pow_floor(ns, 1.02)
    fb, _ = knp.pow_floor(ns, 1.02)
    rows.append(("pow_floor", f"n={len(ns)}", t_nb, t_np,
                 bool(np.array_equal(fa, fb))))

    print(f"{'kernel':<18} {'size':<12} {'numba':>9} {'numpy':>9} "
          f"{'speedup':>8}  agree")
    for name, size, t_nb, t_np, agree in rows:
        print(f"{name:<18} {size:<12} {t_nb:>8.3f}s {t_np:>8.3f}s "
              f"{t_np / t_nb:>7.2f}x  {agree}")


if __name__ == "__main__":
    main()
