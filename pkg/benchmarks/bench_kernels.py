"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row times one kernel call on both backends and checks that the
results are identical.
"""

import argparse
import time

import numpy as np

from fflseries import FieldSpec, get_field
from fflseries import _pykernels

try:
    from fflseries import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(rng):
    for q, n in [(2, 64), (3, 256), (4, 1024), (9, 2048)]:
        f = get_field(FieldSpec.from_q(q))
        a = rng.integers(0, q, n).astype(np.int64)
        b = rng.integers(0, q, n).astype(np.int64)
        yield f"conv q={q} len={n}", (lambda m, f=f, a=a, b=b, n=n: m.conv(a, b, n, f.add_table, f.mul_table))
    for q, e, beta, j in [(2, 10, 1, 3), (3, 6, 2, 4), (4, 5, 1, 2), (5, 4, 3, 3)]:
        f = get_field(FieldSpec.from_q(q))
        yield (
            f"outer_sum q={q} e={e} β={beta} j={j}",
            lambda m, f=f, q=q, e=e, beta=beta, j=j: m.monic_outer_sum(q, e, beta, j, 0, q**e, f.add_table, f.mul_table),
        )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels are not built; nothing to compare")
        return
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':34s} {'cython ms':>10s} {'python ms':>10s} {'speedup':>8s}  same")
    for name, call in cases(rng):
        tc, rc = best_of(lambda: call(_ckernels), args.repeat)
        tp, rp = best_of(lambda: call(_pykernels), args.repeat)
        same = np.array_equal(np.asarray(rc), np.asarray(rp))
        print(f"{name:34s} {tc * 1e3:10.3f} {tp * 1e3:10.3f} {tp / tc:8.1f}x  {same}")


if __name__ == "__main__":
    main()
