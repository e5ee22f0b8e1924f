"""Time the numba and numpy kernel backends side by side.

Each backend runs in its own interpreter since the choice is made at import:

    python benchmarks/bench_kernels.py            # both backends
    python benchmarks/bench_kernels.py --child    # current backend only
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

CASES = [(1, 4096), (2, 64), (3, 32), (2, 256), (3, 64)]


def measure(repeat):
    import numpy as np

    from speeduplab import _kernels
    from speeduplab.eigensolver import inverse_iterate
    from speeduplab.grid import GridHamiltonian, GridSpec
    from speeduplab.potential import PotentialOracle, PotentialSpec

    rows = []
    for d, m in CASES:
        grid = GridSpec(d, m)
        Hm = GridHamiltonian(grid, PotentialOracle(PotentialSpec("sep-sin", (), d)))
        v = np.random.default_rng(0).standard_normal(grid.size)
        psi = np.ones((4, grid.size), dtype=complex)
        Hm.apply(v)
        _kernels.diag_phase(psi, Hm.diagonal, 0.1)
        apply_t = min(timeit.repeat(lambda: Hm.apply(v), number=10, repeat=repeat)) / 10
        phase_t = min(timeit.repeat(lambda: _kernels.diag_phase(psi, Hm.diagonal, 0.1), number=10, repeat=repeat)) / 10
        row = {"d": d, "m": m, "size": grid.size, "apply_ms": apply_t * 1e3, "phase_ms": phase_t * 1e3}
        if grid.size <= 2 ** 16:
            row["inverse_iter_s"] = min(timeit.repeat(lambda: inverse_iterate(Hm), number=1, repeat=max(1, repeat // 2)))
        rows.append(row)
    return {"backend": _kernels.BACKEND, "rows": rows}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--child", action="store_true")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(measure(args.repeat)))
        return
    results = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, SPEEDUPLAB_BACKEND=backend)
        out = subprocess.run([sys.executable, __file__, "--child", "--repeat", str(args.repeat)],
                             env=env, capture_output=True, text=True, check=True)
        results[backend] = json.loads(out.stdout.strip().splitlines()[-1])
    print(f"{'grid':>10} {'size':>8} | {'apply numba':>11} {'numpy':>9} | {'phase numba':>11} {'numpy':>9} | "
          f"{'inv-iter numba':>14} {'numpy':>8}")
    for a, b in zip(results["numba"]["rows"], results["numpy"]["rows"]):
        inv = (f"{a['inverse_iter_s']:13.3f}s {b['inverse_iter_s']:7.3f}s" if "inverse_iter_s" in a else f"{'-':>14} {'-':>8}")
        print(f"{'d=%d m=%d' % (a['d'], a['m']):>10} {a['size']:>8} | {a['apply_ms']:9.3f}ms {b['apply_ms']:7.3f}ms | "
              f"{a['phase_ms']:9.3f}ms {b['phase_ms']:7.3f}ms | {inv}")
    if results["numba"]["backend"] != "numba":
        print("note: numba is not installed, both columns used numpy")


if __name__ == "__main__":
    main()
