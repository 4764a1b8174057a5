"""Throughput comparison of the compiled and pure-Python geometry kernels.

Times the two hot batch operations behind the Monte Carlo estimator --
fundamental-domain reduction and the diagonal-flow transport of frames --
on identical random inputs, checks bit-level parity between backends, and
prints points/second for each along with the speedup. Run it directly:

    python bench/benchmark_backends.py [--size N] [--repeats R] [--seed S]

The sampled inputs mirror production use: base points from the surface
sampler (already reduced, exercising the fast path) plus a scaled copy
pushed far outside the fundamental domain (exercising the reduction loop),
and Iwasawa frames over uniform fiber angles for the flow kernel.
"""

import argparse
import math
import time

import numpy as np

from ratner_decay._kernels import COMPILED, backend_name, flow_points, reduce_points
from ratner_decay.mixing import sample_base_points


def _build_inputs(size, seed):
    rng = np.random.default_rng(seed)
    x, y = sample_base_points(rng, size)
    # Second copy translated and shrunk so every point needs several
    # inversion/translation rounds; keeps the reduction loop honest.
    far_x = x + rng.integers(-40, 41, size=size)
    far_y = y * rng.uniform(0.02, 0.2, size=size)
    theta = rng.uniform(0.0, 2.0 * math.pi, size=size)
    sq = np.sqrt(y)
    inv = 1.0 / sq
    xs = x * inv
    cf = np.cos(theta)
    sf = np.sin(theta)
    nsf = -sf
    frames = (sq * cf + xs * nsf, sq * sf + xs * cf, inv * nsf, inv * cf)
    return (x, y), (far_x, far_y), frames


def _time(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _row(label, size, seconds_by_backend):
    cells = [f"{label:<28}"]
    for backend in ("compiled", "python"):
        seconds = seconds_by_backend.get(backend)
        if seconds is None:
            cells.append(f"{'-':>14}")
        else:
            cells.append(f"{size / seconds / 1e6:>10.2f} M/s")
    if len(seconds_by_backend) == 2:
        cells.append(f"{seconds_by_backend['python'] / seconds_by_backend['compiled']:>7.1f}x")
    print("  ".join(cells))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=2_000_000, help="points per batch")
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats (best is kept)")
    parser.add_argument("--seed", type=int, default=1, help="input sampling seed")
    args = parser.parse_args(argv)

    backends = ["compiled", "python"] if COMPILED else ["python"]
    print(f"default backend: {backend_name()}; comparing: {', '.join(backends)}")
    print(f"batch size {args.size:,}, best of {args.repeats} runs\n")

    (x, y), (far_x, far_y), frames = _build_inputs(args.size, args.seed)
    cases = (
        ("reduce (in domain)", lambda b: reduce_points(x, y, backend=b)),
        ("reduce (deep orbit)", lambda b: reduce_points(far_x, far_y, backend=b)),
        ("flow t=2 (reduce+mobius)", lambda b: flow_points(*frames, 2.0, backend=b)),
    )

    header = [f"{'kernel':<28}", f"{'compiled':>14}", f"{'python':>14}"]
    if len(backends) == 2:
        header.append(f"{'speedup':>8}")
    print("  ".join(header))
    mismatches = 0
    for label, call in cases:
        results = {}
        seconds = {}
        for backend in backends:
            seconds[backend] = _time(lambda: call(backend), args.repeats)
            results[backend] = call(backend)
        if len(backends) == 2:
            for a, b in zip(results["compiled"], results["python"]):
                if not np.array_equal(a, b):
                    mismatches += 1
        _row(label, args.size, seconds)

    if len(backends) == 2:
        verdict = "bit-identical" if mismatches == 0 else f"{mismatches} MISMATCHED ARRAYS"
        print(f"\nbackend parity: {verdict}")
        return 1 if mismatches else 0
    print("\ncompiled backend unavailable; timed the fallback only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
