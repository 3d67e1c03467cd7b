"""Compare the compiled and pure-numpy resolvent kernels.

Usage: python benchmarks/bench_kernels.py [--points M] [--repeat R]

Times ``transfer_eval`` (characteristic-function evaluation on a batch of
points) for several state dimensions and reports the speedup of the
compiled backend together with the maximum disagreement.
"""
import argparse
import timeit

import numpy as np

from aip.circle import disk_grid
from aip.kernels import compiled_available, get_backend


def random_unitary_blocks(rng, h, k):
    n = h + k
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return Q[:h, :h], Q[:h, h:], Q[h:, :h], Q[h:, h:]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not compiled_available():
        raise SystemExit("compiled kernels are not built; run `pip install --no-build-isolation -e .`")
    rng = np.random.default_rng(0)
    z = disk_grid(args.points, 0.95)
    py, cy = get_backend("python"), get_backend("compiled")
    print(f"{'dimH':>5} {'points':>7} {'python ms':>10} {'compiled ms':>12} {'speedup':>8} {'max diff':>9}")
    for h in (1, 2, 4, 8, 16, 32):
        A, B, C, D = random_unitary_blocks(rng, h, 2)
        tp = min(timeit.repeat(lambda: py.transfer_eval(A, B, C, D, z), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: cy.transfer_eval(A, B, C, D, z), number=1, repeat=args.repeat))
        diff = np.max(np.abs(py.transfer_eval(A, B, C, D, z) - cy.transfer_eval(A, B, C, D, z)))
        print(f"{h:>5} {z.size:>7} {1e3 * tp:>10.2f} {1e3 * tc:>12.2f} {tp / tc:>8.2f} {diff:>9.1e}")


if __name__ == "__main__":
    main()
