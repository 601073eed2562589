"""Time the subset eigenvalue kernels on a GRIP enumeration.

Compares the compiled Jacobi kernel, the numpy fallback and LAPACK
(``numpy.linalg.eigvalsh`` per subset), and checks that all three agree.

    python3 benchmarks/bench_kernels.py --n 48 --group-size 3 --k 9 --repeat 3
"""
import argparse
import time

import numpy as np

from groupcs.grip import gks_family
from groupcs.group_model import uniform_partition
from groupcs.kernels import available_backends, get_backend
from groupcs.sampling import generate_matrix


def lapack_extreme_eigs(gram, sets):
    lo = np.empty(len(sets))
    hi = np.empty(len(sets))
    for i, T in enumerate(sets):
        w = np.linalg.eigvalsh(gram[np.ix_(T, T)])
        lo[i], hi[i] = w[0], w[-1]
    return lo, hi


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=48)
    ap.add_argument("--group-size", type=int, default=3)
    ap.add_argument("--k", type=int, default=9)
    ap.add_argument("--m", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    p = uniform_partition(args.n, args.group_size, args.k)
    sets = [s.indices for s in gks_family(p, 2 * p.k)]
    A = generate_matrix(args.m, args.n, args.seed)
    gram = A.T @ A
    print(f"{len(sets)} column subsets of size <= {2 * p.k} (n={args.n}, m={args.m})")

    runners = {name: get_backend(name).subset_extreme_eigs for name in available_backends()}
    runners["lapack"] = lapack_extreme_eigs
    ref = None
    base = None
    for name, fn in runners.items():
        t, (lo, hi) = best_of(lambda: fn(gram, sets), args.repeat)
        if ref is None:
            ref, base = (lo, hi), t
        err = max(np.abs(lo - ref[0]).max(), np.abs(hi - ref[1]).max())
        print(f"{name:>8}: {t * 1e3:9.2f} ms  ({t / base:5.2f}x first)  max |diff| {err:.2e}")


if __name__ == "__main__":
    main()
