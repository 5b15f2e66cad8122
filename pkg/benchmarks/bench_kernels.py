"""Benchmark the compiled kernel backend against the numpy reference.

Runs each hot kernel on representative problem sizes with both backends
and prints a timing table. Invoke as a script:

    python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from quantobs._kernels import _ref

try:
    from quantobs._kernels import _speedups
except ImportError:
    _speedups = None


def _time(fn, args, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(rng):
    # lti_recursion: long horizon, small state
    n = 8
    A = rng.normal(size=(n, n)) * 0.2
    x0 = rng.normal(size=n)
    bu = np.ascontiguousarray(rng.normal(size=(200_000, n)))
    yield "lti_recursion (n=8, L=2e5)", "lti_recursion", (
        np.ascontiguousarray(A), np.ascontiguousarray(x0), bu)

    # forced_sums: deep tuple enumeration
    tables = np.ascontiguousarray(rng.normal(size=(12, 3, 2)))
    yield "forced_sums (3^12 tuples, p=2)", "forced_sums", (tables,)

    # hyperplane_distances: wide point cloud
    values = np.ascontiguousarray(rng.normal(size=(500_000, 2)))
    bps = np.ascontiguousarray(np.sort(rng.normal(size=(2, 11)), axis=1))
    lengths = np.full(2, 11, dtype=np.int64)
    yield "hyperplane_distances (5e5 x 2)", "hyperplane_distances", (
        values, bps, lengths)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats per case (best is reported)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    if _speedups is None:
        print("compiled backend not available; showing python timings only")
    rows = []
    for label, name, data in _cases(rng):
        t_py = _time(getattr(_ref, name), data, args.repeats)
        if _speedups is not None:
            ref_out = getattr(_ref, name)(*data)
            fast_out = getattr(_speedups, name)(*data)
            # backends may order float additions differently (BLAS vs loop)
            if isinstance(ref_out, tuple):
                assert ref_out[1] == fast_out[1]
                np.testing.assert_allclose(ref_out[0], fast_out[0],
                                           rtol=1e-9, atol=1e-12)
            else:
                np.testing.assert_allclose(ref_out, fast_out,
                                           rtol=1e-9, atol=1e-12)
            t_c = _time(getattr(_speedups, name), data, args.repeats)
            rows.append((label, t_py, t_c, t_py / t_c))
        else:
            rows.append((label, t_py, None, None))

    print()
    print("%-34s %12s %12s %8s" % ("kernel", "python [s]", "compiled [s]", "speedup"))
    print("-" * 70)
    for label, t_py, t_c, ratio in rows:
        if t_c is None:
            print("%-34s %12.4f %12s %8s" % (label, t_py, "-", "-"))
        else:
            print("%-34s %12.4f %12.4f %7.1fx" % (label, t_py, t_c, ratio))


if __name__ == "__main__":
    main()
