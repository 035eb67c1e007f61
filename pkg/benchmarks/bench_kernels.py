"""Time the numba kernels against the pure-numpy fallbacks on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Both backends are imported in one process (kernels.NUMPY_KERNELS and
kernels.NUMBA_KERNELS), outputs are checked for equality, and the best of
``--repeat`` wall-clock runs is reported after one untimed warm-up call.
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from posetdyn import kernels
from posetdyn.catalog import load_fixture
from posetdyn.gamma import build_gamma_q
from posetdyn.labelings import csr, induced_restriction
from posetdyn.poset import ideal_masks, product_of_chains
from posetdyn.promotion import _bk_tables, promotion_levels
from posetdyn.toggles import togpro_letters


def workloads():
    """(name, kernel, args) triples; args are shared by both backends."""
    fig11 = load_fixture("fig11").poset
    R = induced_restriction(fig11, 8)
    vals, lens = R.padded(fig11)
    lo = csr(fig11.lower_idx)
    up = csr(fig11.upper_idx)
    topo = np.array(fig11.topo, dtype=np.int64)
    rows, _ = kernels.NUMPY_KERNELS["labelings"](topo, *lo, vals, lens, True, 10**7)
    lv, nxt, has = _bk_tables(fig11, R, promotion_levels(fig11, R))

    grid = product_of_chains(5, 6, 2)
    gtopo = np.array(grid.topo, dtype=np.int64)
    gmasks = np.sort(ideal_masks(grid))

    G = build_gamma_q(fig11, 8)
    gm = np.sort(ideal_masks(G.poset))
    letters = np.array(togpro_letters(G.poset, G.levels), dtype=np.int64)
    perm = np.searchsorted(gm, kernels.NUMPY_KERNELS["apply_toggles"](gm, letters, G.poset.lower_masks,
                                                                       G.poset.upper_masks))

    return [
        ("ideals [5]x[6]x[2]", "ideals", (grid.lower_masks, gtopo, 10**7)),
        ("ideals Gamma(fig11,8)", "ideals", (G.poset.lower_masks, np.array(G.poset.topo, dtype=np.int64), 10**7)),
        ("rowmotion J([5]x[6]x[2])", "rowmotion", (gmasks, grid.lower_masks, grid.down_masks, grid.full_mask)),
        ("togpro J(Gamma(fig11,8))", "apply_toggles", (gm, letters, G.poset.lower_masks, G.poset.upper_masks)),
        ("cycles TogPro on 150332", "cycles", (perm,)),
        ("labelings Inc^8(fig11)", "labelings", (topo, *lo, vals, lens, True, 10**7)),
        ("IncPro on Inc^8(fig11)", "bk_sweep", (rows, lv, nxt, has, *up, *lo)),
    ]


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def best_time(fn, args, repeat):
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", metavar="PATH", help="also write results as JSON")
    args = ap.parse_args(argv)
    if not kernels.NUMBA_KERNELS:
        raise SystemExit("numba is not installed; nothing to compare")
    results = []
    print(f"{'workload':<28}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}  same")
    for name, kernel, kargs in workloads():
        t_np, out_np = best_time(kernels.NUMPY_KERNELS[kernel], kargs, args.repeat)
        t_nb, out_nb = best_time(kernels.NUMBA_KERNELS[kernel], kargs, args.repeat)
        same = _same(out_np, out_nb)
        results.append({"workload": name, "kernel": kernel, "numpy_s": t_np, "numba_s": t_nb, "same": bool(same)})
        print(f"{name:<28}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>9.1f}x  {same}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2)
    return 0 if all(r["same"] for r in results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
