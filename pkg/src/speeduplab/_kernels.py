"""Hot inner loops, compiled with numba when available.

Backend selection happens once at import:

* ``SPEEDUPLAB_BACKEND=numpy`` forces the pure-numpy path.
* ``SPEEDUPLAB_BACKEND=numba`` (default) uses numba if it imports, else
  falls back to numpy silently.
* ``SPEEDUPLAB_WORKERS`` caps the numba thread count. Every kernel here
  writes each output element independently, so results do not depend on it.

Both implementations of each kernel stay importable (``*_numpy`` and
``*_numba``) so tests and the benchmark can compare them directly.
"""
import os

import numpy as np

_requested = os.environ.get("SPEEDUPLAB_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"SPEEDUPLAB_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

try:
    import numba
    from numba import njit, prange

    HAS_NUMBA = True
    # skip the TBB layer: older system TBB builds only produce a warning
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

BACKEND = "numba" if (HAS_NUMBA and _requested == "numba") else "numpy"


def _configure_workers():
    raw = os.environ.get("SPEEDUPLAB_WORKERS")
    if raw is None or not HAS_NUMBA:
        return
    workers = int(raw)
    if workers < 1:
        raise ValueError("SPEEDUPLAB_WORKERS must be >= 1")
    numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))


_configure_workers()


# --- discrete Laplacian + diagonal ------------------------------------------

def laplacian_apply_numpy(v, diag, out, d, m, scale):
    """out = scale * (2d v - sum of neighbours) + diag * v, zero outside the grid.

    ``v`` is the flattened grid vector (dimension 1 fastest).
    """
    u = v.reshape((m,) * d)
    acc = (2.0 * d) * u
    for ax in range(d):
        a = np.moveaxis(acc, ax, 0)
        b = np.moveaxis(u, ax, 0)
        a[1:] -= b[:-1]
        a[:-1] -= b[1:]
    np.multiply(acc.reshape(-1), scale, out=out)
    out += diag * v
    return out


def diag_phase_numpy(psi, diag, t):
    """psi[..., i] *= exp(-i t diag[i]) in place."""
    psi *= np.exp(-1j * t * diag)
    return psi


if HAS_NUMBA:

    @njit(parallel=True, cache=True)
    def laplacian_apply_numba(v, diag, out, d, m, scale):
        # one task per grid line along dimension 1, so the inner loop is contiguous
        lines = v.shape[0] // m
        for line in prange(lines):
            base = line * m
            for j in range(m):
                i = base + j
                acc = (2.0 * d) * v[i]
                if j > 0:
                    acc -= v[i - 1]
                if j < m - 1:
                    acc -= v[i + 1]
                out[i] = acc
            rest = line
            stride = m
            for _ in range(1, d):
                c = rest % m
                rest //= m
                if c > 0:
                    for j in range(m):
                        out[base + j] -= v[base + j - stride]
                if c < m - 1:
                    for j in range(m):
                        out[base + j] -= v[base + j + stride]
                stride *= m
            for j in range(m):
                i = base + j
                out[i] = scale * out[i] + diag[i] * v[i]
        return out

    @njit(parallel=True, cache=True)
    def _diag_phase_2d(psi, diag, t):
        rows, n = psi.shape
        for i in prange(n):
            ang = -t * diag[i]
            ph = complex(np.cos(ang), np.sin(ang))
            for r in range(rows):
                psi[r, i] *= ph
        return psi

    def diag_phase_numba(psi, diag, t):
        flat = psi.reshape(-1, psi.shape[-1])
        if not flat.flags.c_contiguous or not np.shares_memory(flat, psi):
            return diag_phase_numpy(psi, diag, t)
        _diag_phase_2d(flat, diag, float(t))
        return psi

else:  # pragma: no cover
    laplacian_apply_numba = None
    diag_phase_numba = None


if BACKEND == "numba":
    laplacian_apply = laplacian_apply_numba
    diag_phase = diag_phase_numba
else:
    laplacian_apply = laplacian_apply_numpy
    diag_phase = diag_phase_numpy
