"""Compare the compiled kernels against the pure-NumPy fallback.

Times the three hot kernels on a mid-sized tensor, then a full projection
with each backend swapped in. Run from the repository root:

    python benchmarks/bench_backends.py [--dims 14,14,14,14] [--repeat 5]
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import manybody.kernels as kernels  # noqa: E402
from manybody.kernels import _fallback  # noqa: E402
from manybody.interactions import cyclic_set, enumerate_basis  # noqa: E402
from manybody.projection import SolverOptions, project  # noqa: E402

try:
    from manybody.kernels import _native
except ImportError:
    _native = None


def best_of(repeat, fn, *args):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def bench_kernels(dims, repeat):
    rng = np.random.default_rng(0)
    tensor = rng.random(dims)
    tensor /= tensor.sum()
    basis = enumerate_basis(cyclic_set(len(dims)), dims)
    eta = _fallback.suffix_cumsum(tensor)
    eta_b = eta.ravel()[np.ravel_multi_index(basis.T, dims)]

    backends = [("python", _fallback)] + ([("native", _native)] if _native else [])
    rows = []
    for label, mod in backends:
        rows.append((label,
                     best_of(repeat, mod.suffix_cumsum, tensor),
                     best_of(repeat, mod.prefix_cumsum, tensor),
                     best_of(repeat, mod.fisher_matrix, eta, basis, eta_b)))
    print(f"kernels on dims={dims}, |basis|={basis.shape[0]} (best of {repeat}):")
    print(f"  {'backend':<8} {'suffix_cumsum':>14} {'prefix_cumsum':>14} {'fisher_matrix':>14}")
    for label, t_s, t_p, t_f in rows:
        print(f"  {label:<8} {t_s * 1e3:>12.3f}ms {t_p * 1e3:>12.3f}ms {t_f * 1e3:>12.3f}ms")
    if len(rows) == 2:
        (_, s0, p0, f0), (_, s1, p1, f1) = rows
        print(f"  {'speedup':<8} {s0 / s1:>13.2f}x {p0 / p1:>13.2f}x {f0 / f1:>13.2f}x")
    return backends


def bench_projection(dims, repeat, backends):
    rng = np.random.default_rng(1)
    tensor = rng.random(dims) + 0.05
    iset = cyclic_set(len(dims))
    opts = SolverOptions(tolerance=1e-7, max_iterations=200)
    originals = (kernels.suffix_cumsum, kernels.prefix_cumsum, kernels.fisher_matrix)
    print(f"\nfull cyclic projection on dims={dims} (best of {repeat}):")
    try:
        for label, mod in backends:
            kernels.suffix_cumsum = mod.suffix_cumsum
            kernels.prefix_cumsum = mod.prefix_cumsum
            kernels.fisher_matrix = mod.fisher_matrix
            elapsed = best_of(repeat, project, tensor, iset, opts)
            print(f"  {label:<8} {elapsed * 1e3:>12.3f}ms")
    finally:
        kernels.suffix_cumsum, kernels.prefix_cumsum, kernels.fisher_matrix = originals


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", default="14,14,14,14",
                        help="comma-separated tensor dims (default 14,14,14,14)")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    dims = tuple(int(tok) for tok in args.dims.split(","))

    if _native is None:
        print("note: compiled kernels not built; timing the fallback only "
              "(run 'python setup.py build_ext --inplace' first)\n")
    backends = bench_kernels(dims, args.repeat)
    bench_projection(dims, args.repeat, backends)


if __name__ == "__main__":
    main()
