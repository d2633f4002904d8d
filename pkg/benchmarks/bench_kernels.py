#!/usr/bin/env python3
"""Benchmark: compiled comparator kernel vs the pure-Python twin.

Builds a synthetic registry with many releases per package and times the two
hot operations a large scan spends its life in: range evaluation over every
release (satisfies) and best-release selection under a time cutoff
(resolution). Run after `pip install -e .`:

    python benchmarks/bench_kernels.py [--releases 2000] [--rounds 200]
"""

import argparse
import random
import time

from depthreat.semver import Version, parse_range
from depthreat.semver import _kernel_py

try:
    from depthreat.semver import _kernel_cy
except ImportError:
    _kernel_cy = None

RANGES = [
    "^1.2.0",
    "~4.3.0",
    ">=2.0.0 <6.0.0",
    ">3.1.4",
    "1.x || >=5.0.0",
    "*",
]


def build_timeline(releases, seed=1657):
    rng = random.Random(seed)
    versions = set()
    while len(versions) < releases:
        versions.add(
            Version(
                rng.randint(0, 9),
                rng.randint(0, 20),
                rng.randint(0, 20),
                prerelease=(("rc", rng.randint(0, 5)) if rng.random() < 0.1 else ()),
            )
        )
    ordered = sorted(versions, key=lambda v: v.key)
    return {
        "keys": [v.key for v in ordered],
        "has_pres": [bool(v.prerelease) for v in ordered],
        "triples": [v.triple for v in ordered],
        "released": [float(rng.randint(0, 10**9)) for _ in ordered],
    }


def bench_satisfies(kernel, timeline, encoded_ranges, rounds):
    start = time.perf_counter()
    hits = 0
    for _ in range(rounds):
        for encoded in encoded_ranges:
            for key, has_pre, triple in zip(
                timeline["keys"], timeline["has_pres"], timeline["triples"]
            ):
                if kernel.satisfies_key(key, has_pre, triple, encoded):
                    hits += 1
    return time.perf_counter() - start, hits


def bench_resolve(kernel, timeline, encoded_ranges, rounds):
    rng = random.Random(11)
    cutoffs = [float(rng.randint(0, 10**9)) for _ in range(rounds)]
    start = time.perf_counter()
    found = 0
    for cutoff in cutoffs:
        for encoded in encoded_ranges:
            if (
                kernel.best_match(
                    timeline["keys"],
                    timeline["has_pres"],
                    timeline["triples"],
                    timeline["released"],
                    cutoff,
                    encoded,
                )
                >= 0
            ):
                found += 1
    return time.perf_counter() - start, found


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--releases", type=int, default=2000)
    parser.add_argument("--rounds", type=int, default=200)
    args = parser.parse_args()

    timeline = build_timeline(args.releases)
    encoded_ranges = [parse_range(text)._encoded for text in RANGES]
    backends = [("python", _kernel_py)]
    if _kernel_cy is not None:
        backends.append(("cython", _kernel_cy))
    else:
        print("compiled kernel not built; benchmarking pure Python only")

    results = {}
    for name, kernel in backends:
        sat_time, sat_hits = bench_satisfies(
            kernel, timeline, encoded_ranges, max(1, args.rounds // 20)
        )
        res_time, res_found = bench_resolve(
            kernel, timeline, encoded_ranges, args.rounds
        )
        results[name] = (sat_time, res_time)
        print(
            f"{name:>7}: satisfies {sat_time:8.4f}s ({sat_hits} hits)   "
            f"resolve {res_time:8.4f}s ({res_found} resolved)"
        )

    if len(results) == 2:
        py_sat, py_res = results["python"]
        cy_sat, cy_res = results["cython"]
        print(
            f"speedup: satisfies x{py_sat / cy_sat:.2f}, "
            f"resolve x{py_res / cy_res:.2f}"
        )


if __name__ == "__main__":
    main()
