"""Time the numba kernels against their numpy counterparts.

    python3 benchmarks/bench_kernels.py --sizes 4,8,16 --repeat 20
"""

from __future__ import annotations

import argparse
import json
import timeit

import numpy as np

from resgrass import _kernels as K
from resgrass.sampling import ginibre


def _skew(rng, n):
    g = ginibre(rng, n, n)
    return np.ascontiguousarray((g - g.conj().T) / 2)


def cases(n: int, rng: np.random.Generator):
    c = _skew(rng, n)
    v = K.skew_coords_numpy(c)
    lam = 1j * rng.uniform(0.7, 1.3, n)
    mu = -1j * rng.uniform(0.7, 1.3, n)
    rhs = np.ascontiguousarray(ginibre(rng, n, n))
    absr = np.abs(c) * (0.3 ** np.arange(n))[:, None]
    return {
        "ad_matrix": ((K.ad_matrix_jit, K.ad_matrix_numpy), (c,)),
        "skew_coords": ((K.skew_coords_jit, K.skew_coords_numpy), (c,)),
        "skew_from_coords": ((K.skew_from_coords_jit, K.skew_from_coords_numpy), (v, n)),
        "sylvester_divide": ((K.sylvester_divide_jit, K.sylvester_divide_numpy), (rhs, lam, mu)),
        "min_pair_distance": ((K.min_pair_distance_jit, K.min_pair_distance_numpy), (lam, mu)),
        "hinkkanen_scan": ((K.hinkkanen_scan_jit, K.hinkkanen_scan_numpy), (absr, 0.5, 0.01)),
    }


def best_time(fn, args, repeat: int) -> float:
    fn(*args)  # compile / warm up
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--sizes", default="4,8,16,32")
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    rows = []
    for n in (int(s) for s in args.sizes.split(",")):
        for name, ((jit, ref), call_args) in cases(n, rng).items():
            t_jit = best_time(jit, call_args, args.repeat) if K.HAVE_NUMBA else float("nan")
            t_np = best_time(ref, call_args, args.repeat)
            rows.append({"kernel": name, "N": n, "numba_s": t_jit, "numpy_s": t_np, "speedup": t_np / t_jit})

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"numba available: {K.HAVE_NUMBA}, selected: {'numba' if K.USE_NUMBA else 'numpy'}")
    print(f"{'kernel':<30}{'N':>4}{'numba [us]':>14}{'numpy [us]':>14}{'speedup':>10}")
    for r in rows:
        print(f"{r['kernel']:<30}{r['N']:>4}{1e6 * r['numba_s']:>14.1f}{1e6 * r['numpy_s']:>14.1f}{r['speedup']:>10.2f}")


if __name__ == "__main__":
    main()
