"""Time the compiled and numpy point-counting kernels on the same models.

    python3 benchmarks/bench_core.py --p 13 --n 20000 --repeat 3
"""
import argparse
import time

import numpy as np

from usptrace import _core
from usptrace.frobenius import decode_models, model_counts


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, nargs="+", default=[5, 13, 31])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    try:
        from usptrace._core import _ccore  # noqa: F401
        have_c = True
    except ImportError:
        have_c = False
        print("compiled kernel not built; timing the numpy kernel only")

    print(f"{'p':>4} {'models':>8} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    rng = np.random.default_rng(args.seed)
    for p in args.p:
        total = sum(model_counts(p))
        rows = decode_models(rng.integers(0, total, size=args.n), p)
        _core.field_tables(p)
        t_py, ref = best_of(lambda: _core.count_models(rows, p, backend="python"), args.repeat)
        if have_c:
            t_c, got = best_of(lambda: _core.count_models(rows, p, backend="cython"), args.repeat)
            for a, b in zip(ref, got):
                if not np.array_equal(a, b):
                    raise SystemExit(f"kernels disagree at p={p}")
            print(f"{p:>4} {args.n:>8} {t_py:>10.3f} {t_c:>10.3f} {t_py / t_c:>8.1f}")
        else:
            print(f"{p:>4} {args.n:>8} {t_py:>10.3f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
