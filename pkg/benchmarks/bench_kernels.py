"""Compare the numba kernels with their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--mb 4] [--seed 0]

Set UHFSEC_PURE_NUMPY=1 to make the library itself use the numpy path; the
bench always times both regardless.
"""

import argparse

from uhfsec import _kernels
from uhfsec.bench import bench_hash

CASES = [("field", 12), ("field", 60), ("toeplitz", 32), ("toeplitz", 64)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mb", type=float, default=4.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"numba available: {_kernels.HAVE_NUMBA}, library backend: {_kernels.BACKEND}")
    header = f"{'kind':<10}{'l':>4}  {'backend':<8}{'MB/s':>12}{'x scalar':>12}"
    print(header)
    print("-" * len(header))
    for kind, l in CASES:
        res = bench_hash(l, args.mb, kind, master_seed=args.seed)
        for name, rec in res["backends"].items():
            print(f"{kind:<10}{l:>4}  {name:<8}{rec['mb_per_s']:>12.1f}{rec['speedup_vs_scalar']:>12.1f}")
        if "numba_over_numpy" in res:
            print(f"{'':<16}numba / numpy: {res['numba_over_numpy']:.2f}x"
                  f"  (outputs agree: {res['backends_agree']})")


if __name__ == "__main__":
    main()
