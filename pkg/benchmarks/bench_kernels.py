"""Time the compiled and pure-Python kernel backends side by side.

    python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from cloudgdm import kernels
from cloudgdm.lp import solve_lp
from cloudgdm.weights import build_weight_lp


def _with_backend(module, fn):
    saved = (kernels.simplex_iterate, kernels.pivot, kernels.certainty, kernels.iaa_sweep)
    kernels.simplex_iterate, kernels.pivot = module.simplex_iterate, module.pivot
    kernels.certainty, kernels.iaa_sweep = module.certainty, module.iaa_sweep
    try:
        return fn()
    finally:
        kernels.simplex_iterate, kernels.pivot, kernels.certainty, kernels.iaa_sweep = saved


def cases():
    rng = np.random.default_rng(0)
    x = rng.normal(size=1_000_000)
    en = np.abs(rng.normal(1.0, 0.2, x.size))
    panels = []
    for _ in range(2000):
        d = int(rng.integers(2, 11))
        ends = np.sort(rng.uniform(0, 100, (d, 2)), axis=1)
        panels.append((ends[:, 0].copy(), ends[:, 1].copy()))
    lp = build_weight_lp(rng.uniform(0.1, 10, (14, 7)))

    def certainty(mod):
        return lambda: mod.certainty(x, 0.0, en)

    def sweep(mod):
        return lambda: [mod.iaa_sweep(lo, hi) for lo, hi in panels]

    def weight_lp(mod):
        return lambda: _with_backend(mod, lambda: solve_lp(lp))

    return {
        "certainty, 1e6 drops": certainty,
        "IAA sweep, 2000 panels": sweep,
        "weight LP, 14x7": weight_lp,
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = kernels.available_backends()
    names = sorted(backends)
    print(f"{'kernel':<26}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, make in cases().items():
        best = {}
        for n in names:
            fn = make(backends[n])
            fn()
            best[n] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
        row = f"{label:<26}" + "".join(f"{best[n] * 1e3:>10.2f}ms" for n in names)
        if "cython" in best:
            row += f"{best['python'] / best['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
