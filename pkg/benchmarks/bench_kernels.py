"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Each kernel runs on the same seeded programs under every importable
backend; results are checked for agreement before timings are printed.
"""

from __future__ import annotations

import argparse
import random
import timeit

from stratasolve import kernels
from stratasolve.generators import RandomSpec, layered_stratified_kb, random_kb


def workloads(seed: int):
    rng = random.Random(seed)
    big = layered_stratified_kb(20000, seed=seed)
    small = [random_kb(rng, RandomSpec(n=14, rules=28, neg_density=0.4)) for _ in range(3)]
    blocked = bytearray(big.n)
    neg = bytearray(big.n)
    for a in rng.sample(range(big.n), big.n // 10):
        neg[a] = 1
    truth = bytearray(b"\x01") * big.n  # satisfies every rule, so the scan is full
    return [
        ("reduct_fixpoint  l=20000", "reduct_fixpoint", [(big.compiled(), blocked)]),
        ("neg_propagate    l=20000", "neg_propagate", [(big.compiled(), neg)]),
        ("satisfies_all    l=20000", "satisfies_all", [(big.compiled(), truth)]),
        ("brute_force      n=14 x3", "brute_force", [(kb.compiled(),) for kb in small]),
    ]


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    found = kernels.backends()
    print(f"backends: {', '.join(found)} (default {kernels.BACKEND})")
    print(f"{'kernel':<26}" + "".join(f"{name:>12}" for name in found) + f"{'speedup':>10}")
    for label, fn, calls in workloads(args.seed):
        results = {name: [getattr(mod, fn)(*c) for c in calls] for name, mod in found.items()}
        first = next(iter(results.values()))
        assert all(r == first for r in results.values()), f"backends disagree on {fn}"
        best = {}
        for name, mod in found.items():
            f = getattr(mod, fn)
            best[name] = min(timeit.repeat(lambda: [f(*c) for c in calls], number=1, repeat=args.repeat))
        cells = "".join(f"{best[name] * 1e3:10.2f}ms" for name in found)
        ratio = best["python"] / best["cython"] if "cython" in best else float("nan")
        print(f"{label:<26}{cells}{ratio:>9.1f}x")


if __name__ == "__main__":
    main()
