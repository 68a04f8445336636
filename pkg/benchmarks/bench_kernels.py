"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--seed S]
"""
import argparse
import random
import timeit

import numpy as np

from flowercode import gf256, kernels
from flowercode.core import build_code
from flowercode.repair import analyze


def cover_case(rng, helpers=18, bits=24):
    target = (1 << bits) - 1
    masks = [sum(1 << b for b in rng.sample(range(bits), 6)) for _ in range(helpers)]
    return target & _union(masks), masks


def _union(masks):
    u = 0
    for m in masks:
        u |= m
    return u


def union_case(rng, n=20, theta=40):
    nodes = [rng.sample(range(theta), 5) for _ in range(n)]
    # answer is k=5 for seed 0, so every 5-subset gets checked
    return [sum(1 << p for p in node) for node in nodes], 14


def matmul_case(rng, theta=32, B=24, stripes=4096):
    a = rng.integers(0, 256, (theta, B), dtype=np.uint8)
    x = rng.integers(0, 256, (B, stripes), dtype=np.uint8)
    return a, x


def analyze_case(rng, n=14, theta=20, rho=3):
    nodes = [[] for _ in range(n)]
    for p in range(1, theta + 1):
        for i in rng.sample(range(n), rho):
            nodes[i].append(p)
    return build_code(nodes, theta, strict=False)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    nrng = np.random.default_rng(args.seed)
    target, masks = cover_case(rng)
    umasks, need = union_case(rng)
    a, x = matmul_case(nrng)
    code = analyze_case(rng)

    cases = {
        "minimal_covers": lambda b: kernels.minimal_covers(target, masks, backend=b),
        "min_union_degree": lambda b: kernels.min_union_degree(umasks, need, backend=b),
        "gf_matmul": lambda b: kernels.gf_matmul(a, x, gf256.MUL, backend=b),
    }
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (default {kernels.BACKEND})")
    print(f"{'kernel':<18}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases.items():
        results = [fn(b) for b in backends]
        assert all(_same(results[0], r) for r in results[1:]), name
        times = [min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat)) for b in backends]
        row = f"{name:<18}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[0] / times[1]:>11.1f}x"
        print(row)

    t = min(timeit.repeat(lambda: analyze(code), number=1, repeat=args.repeat))
    print(f"analyze (n={code.n}, theta={code.theta}) with default backend: {t * 1e3:.2f}ms")


def _same(x, y):
    if isinstance(x, np.ndarray):
        return np.array_equal(x, y)
    if isinstance(x, list):
        return sorted(x) == sorted(y)
    return x == y


if __name__ == "__main__":
    main()
