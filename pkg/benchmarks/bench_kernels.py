#!/usr/bin/env python3
"""Compare the compiled search kernel against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))
sys.path.insert(0, str(REPO / "tests"))

from helpers import random_instance  # noqa: E402

from splitchip.model import load_constraints, load_system  # noqa: E402
from splitchip.optimize import branch_and_bound, brute_force  # noqa: E402


def timeit(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    try:
        from splitchip.optimize import _kernel  # noqa: F401
    except ImportError:
        print("compiled kernel not built; run pip install -e . --no-build-isolation")
        return

    text = (REPO / "data" / "example_soc" / "system.json").read_text()
    spec16 = load_system(text)
    cs16 = load_constraints(text, spec16)
    relaxed = cs16
    for path, value in (
        ("domain_f_min.crypto", cs16.domain_f_min["crypto"] / 3.2),
        ("p_total_max", cs16.p_total_max * 1.5),
        ("latency_max.fix_to_crypto", 50e-9),
        ("domain_f_min.cpu", cs16.domain_f_min["cpu"] / 1.1),
    ):
        relaxed = relaxed.with_override(path, value)

    cases = [
        (
            "branch&bound  example SoC (16 modules, relaxed)",
            lambda backend: branch_and_bound(spec16, relaxed, backend=backend),
        ),
    ]
    for seed, n in ((17, 8), (23, 9), (31, 10)):
        spec, cs = random_instance(seed, max_modules=n)
        while len(spec.modules) != n:
            seed += 100
            spec, cs = random_instance(seed, max_modules=n)
        cases.append(
            (
                f"brute force   random instance (n={n}, 4^{n}={4 ** n} assignments)",
                lambda backend, s=spec, c=cs: brute_force(s, c, backend=backend),
            )
        )
        cases.append(
            (
                f"branch&bound  random instance (n={n})",
                lambda backend, s=spec, c=cs: branch_and_bound(s, c, backend=backend),
            )
        )

    print(f"{'case':55s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, fn in cases:
        t_py = timeit(lambda: fn("python"), args.repeat)
        t_cy = timeit(lambda: fn("cython"), args.repeat)
        print(f"{name:55s} {t_py * 1e3:9.2f}ms {t_cy * 1e3:9.2f}ms {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
