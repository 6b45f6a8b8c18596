"""Compare the compiled and pure-numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times quaternion matmul, the quaternion SVD behind pinv, the complex SVD
(compiled Jacobi against LAPACK) and a full solve_main on random instances,
once per available backend.  The matmul
and SVD cutoffs in ``quatsylv.kernels`` were picked from these numbers.
"""

import argparse
import timeit

import numpy as np

from quatsylv import kernels
from quatsylv.decomp import pinv
from quatsylv.genval import GenSpec, gen_consistent
from quatsylv.qmatrix import QMatrix
from quatsylv.solvers import solve_main


def best(fn, repeat):
    number = max(1, int(0.05 / max(timeit.timeit(fn, number=1), 1e-7)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def cases(gen):
    for n in (4, 8, 16, 24, 48):
        a, b = QMatrix(gen.normal(size=(n, n, 4))), QMatrix(gen.normal(size=(n, n, 4)))
        yield f"matmul {n}x{n}", lambda a=a, b=b: a @ b
    for n in (3, 6, 12, 24):
        a = QMatrix(gen.normal(size=(n, n, 4)))
        yield f"pinv {n}x{n}", lambda a=a: pinv(a)
    for n in (8, 24):
        m = gen.normal(size=(n, n)) + 1j * gen.normal(size=(n, n))
        if kernels.backend() == "cython":
            yield f"complex svd {n}", lambda m=m: kernels.jacobi_svd(m, 100 * n)
        else:
            yield f"complex svd {n}", lambda m=m: kernels.svd(m, 100 * n)
    for d in (2, 4):
        inst, _ = gen_consistent(GenSpec.square(d, seed=d, mixed_rank=True))
        yield f"solve_main d={d}", lambda inst=inst: solve_main(inst)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    names = list(kernels.AVAILABLE)
    rows = {}
    for name in names:
        with kernels.use_backend(name):
            for label, fn in cases(np.random.default_rng(0)):
                rows.setdefault(label, {})[name] = best(fn, args.repeat)
    header = f"{'case':<18}" + "".join(f"{n:>14}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, t in rows.items():
        line = f"{label:<18}" + "".join(f"{t[n] * 1e6:>12.1f}us" for n in names)
        if len(names) == 2:
            line += f"{t['python'] / t['cython']:>9.2f}x"
        print(line)


if __name__ == "__main__":
    main()
