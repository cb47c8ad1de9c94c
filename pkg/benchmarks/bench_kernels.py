"""Timing comparison of the numba kernels against the numpy fallback.

Run:  python benchmarks/bench_kernels.py [--sizes 256,512,1024] [--repeats 5]
"""

import argparse
import time

import numpy as np

from hdrssl import kernels
from hdrssl.flow import estimate_flow
from hdrssl.imgcore import LdrImage


def _texture(size, seed=0):
    import cv2
    rng = np.random.default_rng(seed)
    img = cv2.GaussianBlur(rng.random((size, size, 3)).astype(np.float32),
                           (0, 0), 4.0)
    img -= img.min()
    img /= max(img.max(), 1e-9)
    return 0.05 + 0.9 * img


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(size, repeats):
    img = _texture(size)
    rng = np.random.default_rng(1)
    xs = (rng.random((size, size)) * (size - 1)).astype(np.float64)
    ys = (rng.random((size, size)) * (size - 1)).astype(np.float64)
    gray = img.mean(axis=2)
    a = LdrImage(_texture(size, seed=2))
    b = LdrImage(np.roll(a.data, 3, axis=1).copy())

    rows = {}
    for backend in ("numba", "numpy"):
        try:
            kernels.set_backend(backend)
        except RuntimeError:
            print(f"  {backend}: unavailable, skipped")
            continue
        kernels.warm_up()
        rows[backend] = (
            _time(lambda: kernels.bilinear_sample(img, xs, ys), repeats),
            _time(lambda: kernels.box_sum(gray, 10), repeats),
            _time(lambda: estimate_flow(a, b), repeats),
        )
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="256,512,1024")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    header = f"{'size':>6} {'backend':>8} {'bilinear':>10} {'box_sum':>10} {'flow':>10}"
    print(header)
    print("-" * len(header))
    for size in sizes:
        rows = bench(size, args.repeats)
        for backend, (tb, ts, tf) in rows.items():
            print(f"{size:>6} {backend:>8} {tb * 1e3:>8.2f}ms {ts * 1e3:>8.2f}ms "
                  f"{tf * 1e3:>8.2f}ms")
        if len(rows) == 2:
            speedup = rows["numpy"][2] / max(rows["numba"][2], 1e-12)
            print(f"{'':>6} {'':>8} flow speedup numba vs numpy: {speedup:.2f}x")


if __name__ == "__main__":
    main()
