"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times the Jacobi eigensolver on Floquet matrices of the sizes a resonance
search uses, the RK4 propagator, and one full resonance search per backend.
"""
import argparse
import time

import numpy as np

from blochsiegert import kernels
from blochsiegert.approx import RabiParams
from blochsiegert.floquet import FloquetConfig, build_floquet_matrix, find_resonance


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = ["python"] + (["cython"] if kernels.HAVE_COMPILED else [])
    if len(backends) == 1:
        print("compiled kernels not built; only the fallback is timed")

    rows = []
    for n_photon in (6, 12, 18):
        m = build_floquet_matrix(RabiParams(1.0, 21.0), 8.77, n_photon)
        label = f"jacobi_eigh  dim={m.shape[0]}"
        rows.append((label, {b: best_of(lambda: kernels.get_backend(b).jacobi_eigh(m), args.repeat)
                             for b in backends}))
    rows.append(("numpy eigh   dim=74", {"lapack": best_of(lambda: np.linalg.eigh(m), args.repeat)}))

    for periods in (100, 500):
        label = f"rk4_average  {periods} periods x 256"
        rows.append((label, {b: best_of(
            lambda: kernels.get_backend(b).rk4_average(1.0, 1.0, 1.0632, periods, 256, 0.0), args.repeat)
            for b in backends}))

    # full search: compiled Jacobi vs the fallback's default (LAPACK)
    search = {}
    for solver in ("jacobi", "lapack") if kernels.HAVE_COMPILED else ("lapack",):
        search[solver] = best_of(lambda: find_resonance(RabiParams(1.0, 21.0), FloquetConfig(solver=solver)),
                                 args.repeat)
    rows.append(("find_resonance A=21", search))

    print(f"{'kernel':<34}{'backend':>10}{'seconds':>12}{'speedup':>10}")
    for label, timings in rows:
        ref = timings.get("python")
        for backend, t in timings.items():
            speed = f"{ref / t:8.1f}x" if ref and backend != "python" else ""
            print(f"{label:<34}{backend:>10}{t:12.5f}{speed:>10}")


if __name__ == "__main__":
    main()
