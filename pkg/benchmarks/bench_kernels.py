"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat N] [--json PATH]

Both paths are called directly, so the TOPRO_DISABLE_NUMBA flag does not
matter here. Numba compile time is excluded by a warm-up call.
"""

from __future__ import annotations

import argparse
import json
import platform
import timeit

import numpy as np

from topro import _accel, kernels

SIZES = {
    "small": dict(n=64, nf=12, d=4096, v=17),
    "medium": dict(n=1024, nf=12, d=1 << 16, v=17),
    "large": dict(n=8192, nf=16, d=1 << 18, v=17),
}


def _problem(n, nf, d, v, seed=0):
    rng = np.random.default_rng(seed)
    feat = rng.integers(0, d, size=(n, nf), dtype=np.int64)
    w = rng.normal(size=(d, v)) * 0.1
    cols = np.arange(v, dtype=np.int64)
    gold = rng.integers(0, v, size=n, dtype=np.int64)
    return feat, w, cols, gold


def _best(fn, repeat):
    fn()  # warm-up, triggers compilation on the numba side
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def run(repeat: int = 5) -> list[dict]:
    rows = []
    for size, dims in SIZES.items():
        feat, w, cols, gold = _problem(**dims)
        g = gold % 7
        p = (gold * 3) % 7
        cases = {
            "softmax_rows": (
                lambda: kernels._softmax_rows_nb(feat, w, cols),
                lambda: kernels._softmax_rows_np(feat, w, cols),
            ),
            "loss_grad": (
                lambda: kernels._loss_grad_nb(feat, w, cols, gold, 1e-12),
                lambda: kernels._loss_grad_np(feat, w, cols, gold, 1e-12),
            ),
            "confusion": (
                lambda: kernels._confusion_nb(g, p, 7),
                lambda: kernels._confusion_np(g, p, 7),
            ),
        }
        for name, (nb, npy) in cases.items():
            t_np = _best(npy, repeat)
            t_nb = _best(nb, repeat) if _accel.HAVE_NUMBA else float("nan")
            rows.append({"kernel": name, "size": size, **dims, "numba_s": t_nb, "numpy_s": t_np, "speedup": t_np / t_nb})
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write the rows to this file")
    args = ap.parse_args(argv)
    rows = run(args.repeat)
    print(f"numba available: {_accel.HAVE_NUMBA}; python {platform.python_version()}; numpy {np.__version__}")
    print(f"{'kernel':<14}{'size':<8}{'n':>6}{'numba ms':>11}{'numpy ms':>11}{'speedup':>9}")
    for r in rows:
        print(f"{r['kernel']:<14}{r['size']:<8}{r['n']:>6}{r['numba_s'] * 1e3:>11.3f}{r['numpy_s'] * 1e3:>11.3f}{r['speedup']:>8.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
