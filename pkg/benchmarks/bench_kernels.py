"""Compare the compiled kernel backend against the numpy fallback.

Runs both hot kernels (batched polynomial evaluation and the Gauss
linking double sum) on identical inputs, checks agreement, and reports
timings.

Usage: python3 benchmarks/bench_kernels.py [--points N] [--terms T]
"""

import argparse
import time

import numpy as np

from crknots._kernels import available_backends, get_backend


def bench(fn, *args, repeat=5):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--terms", type=int, default=40)
    ap.add_argument("--segments", type=int, default=600)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    exps = rng.integers(0, 5, size=(args.terms, 4)).astype(np.int64)
    coeffs = (rng.normal(size=args.terms)
              + 1j * rng.normal(size=args.terms)).astype(np.complex128)
    zs = (rng.normal(size=args.points)
          + 1j * rng.normal(size=args.points)).astype(np.complex128)
    ws = (rng.normal(size=args.points)
          + 1j * rng.normal(size=args.points)).astype(np.complex128)

    t = np.linspace(0, 2 * np.pi, args.segments, endpoint=False)
    c1 = np.stack([np.cos(t), np.sin(t), 0 * t], axis=1)
    c2 = np.stack([1 + np.cos(t), 0 * t, np.sin(t)], axis=1)

    def segs(c):
        d = np.roll(c, -1, axis=0) - c
        return c + 0.5 * d, d

    m1, s1 = segs(c1)
    m2, s2 = segs(c2)

    names = available_backends()
    print(f"available backends: {', '.join(names)}")
    results = {}
    for name in names:
        mod = get_backend(name)
        tp, vp = bench(mod.poly_eval_batch, exps, coeffs, zs, ws)
        tl, vl = bench(mod.linking_sum, m1, s1, m2, s2)
        results[name] = (tp, vp, tl, vl)
        print(f"{name:>5}  poly_eval_batch({args.points} pts, "
              f"{args.terms} terms): {tp * 1e3:8.2f} ms   "
              f"linking_sum({args.segments}^2 pairs): {tl * 1e3:8.2f} ms   "
              f"lk={vl / (4 * np.pi):+.6f}")

    if len(results) == 2:
        (tp_f, vp_f, tl_f, vl_f) = results["fast"]
        (tp_p, vp_p, tl_p, vl_p) = results["pure"]
        dp = np.max(np.abs(vp_f - vp_p)) / max(np.max(np.abs(vp_p)), 1.0)
        dl = abs(vl_f - vl_p) / max(abs(vl_p), 1.0)
        print(f"agreement: poly max rel diff = {dp:.3e}, "
              f"linking rel diff = {dl:.3e}")
        print(f"speedup: poly {tp_p / tp_f:.2f}x, linking {tl_p / tl_f:.2f}x")
        assert dp < 1e-12 and dl < 1e-12, "backend disagreement"


if __name__ == "__main__":
    main()
