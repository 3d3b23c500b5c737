"""Compare the compiled and numpy kernel backends on realistic shapes.

Times each hot kernel in isolation plus the composed feature path
(resize -> Haar analysis -> directional codes) that dominates enrollment
and identification.  Run from anywhere after installing the package:

    python3 benchmarks/bench_kernels.py --repeats 50
"""

import argparse
import time

import numpy as np

from dbcfr.kernels import available_backends


def best_of(fn, repeats):
    """Best wall time over several runs (seconds per call)."""
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def build_cases(rng):
    img = rng.uniform(0.0, 255.0, (231, 198))  # a typical crop before resizing
    grid = rng.uniform(0.0, 255.0, (100, 100))
    subbands = [rng.uniform(-255.0, 255.0, (50, 50)) for _ in range(4)]
    band = rng.uniform(0.0, 400.0, (50, 50))

    def feature_path(mod):
        resized = np.asarray(mod.resize_bilinear(img, 100, 100))
        ll = np.asarray(mod.haar_dwt2(resized)[0])
        mod.dbc_features(ll, 5, 1)

    return [
        ("resize_bilinear 231x198 -> 100x100",
         lambda mod: mod.resize_bilinear(img, 100, 100)),
        ("haar_dwt2 100x100", lambda mod: mod.haar_dwt2(grid)),
        ("haar_idwt2 4x 50x50", lambda mod: mod.haar_idwt2(*subbands)),
        ("dbc_features 50x50", lambda mod: mod.dbc_features(band, 5, 1)),
        ("feature path (resize+dwt+dbc)", feature_path),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=30,
                        help="runs per measurement, best time wins (default 30)")
    args = parser.parse_args()

    backends = available_backends()
    names = list(backends)
    print(f"backends: {', '.join(names)}   (best of {args.repeats} runs)\n")

    rng = np.random.default_rng(99)
    header = f"{'kernel':38s}" + "".join(f"{n:>12s}" for n in names)
    if len(names) > 1:
        header += f"{'speedup':>10s}"
    print(header)
    for label, call in build_cases(rng):
        times = [best_of(lambda m=backends[n]: call(m), args.repeats)
                 for n in names]
        row = f"{label:38s}" + "".join(f"{t * 1e6:10.1f}us" for t in times)
        if len(times) > 1:
            row += f"{times[0] / times[-1]:9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
