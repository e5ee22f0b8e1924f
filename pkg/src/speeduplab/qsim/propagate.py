"""Split-operator propagation of a GridHamiltonian in the discrete sine basis."""
from __future__ import annotations

import functools

import numpy as np
import scipy.fft

from .. import _kernels
from ..grid import mode_energies_1d

DIRECT_DST_MAX = 64


@functools.lru_cache(maxsize=32)
def dst_matrix(m):
    """Orthonormal DST-I matrix; symmetric and its own inverse."""
    j = np.arange(1, m + 1)
    return np.sqrt(2.0 / (m + 1)) * np.sin(np.outer(j, j) * np.pi / (m + 1))


def dst_apply(v, axis=-1):
    """Orthonormal type-I DST along ``axis``. Applying it twice is the identity."""
    v = np.asarray(v)
    m = v.shape[axis]
    if m > DIRECT_DST_MAX:
        return scipy.fft.dst(v, type=1, norm="ortho", axis=axis)
    S = dst_matrix(m)
    moved = np.moveaxis(v, axis, -1)
    return np.moveaxis(moved @ S, -1, axis)


def _to_grid(psi, grid):
    return psi.reshape(psi.shape[:-1] + grid.shape)


def dst_grid(psi, grid):
    """DST-I along every grid axis of flat vectors ``psi`` (shape (..., m^d))."""
    u = _to_grid(np.asarray(psi), grid)
    for ax in range(-grid.d, 0):
        u = dst_apply(u, axis=ax)
    return u.reshape(psi.shape)


@functools.lru_cache(maxsize=32)
def _mode_energy_table(grid):
    e1 = grid.kappa * mode_energies_1d(grid)
    total = np.zeros(grid.shape)
    for ax in range(grid.d):
        shape = [1] * grid.d
        shape[ax] = grid.m
        total = total + e1.reshape(shape)
    return total.reshape(-1)


def kinetic_propagator(psi, grid, t_frac):
    """exp(-i t kappa(-Laplacian_h)) applied exactly through the sine basis."""
    coeffs = dst_grid(np.asarray(psi, dtype=complex), grid)
    coeffs = np.ascontiguousarray(coeffs)
    _kernels.diag_phase(coeffs, _mode_energy_table(grid), t_frac)
    return dst_grid(coeffs, grid)


def potential_phase(psi, Hm, t_frac, ledger=None):
    """Multiply each grid amplitude by exp(-i V~(x) t) using the oracle's
    truncated values; one query on the whole register."""
    out = np.array(psi, dtype=complex, order="C")
    _kernels.diag_phase(out, Hm.diagonal, t_frac)
    if ledger is not None:
        ledger.add_v(1)
    return out


def trotter_evolve(psi, Hm, t_step, n_steps, ledger=None):
    """``n_steps`` Strang steps K(t/2) P(t) K(t/2), adjacent kinetic halves merged."""
    grid = Hm.grid
    if n_steps == 0:
        return np.array(psi, dtype=complex)
    out = kinetic_propagator(psi, grid, t_step / 2)
    for i in range(n_steps):
        out = potential_phase(out, Hm, t_step, ledger)
        out = kinetic_propagator(out, grid, t_step if i < n_steps - 1 else t_step / 2)
    return out


def strang_step(psi, Hm, t_step, ledger=None):
    return trotter_evolve(psi, Hm, t_step, 1, ledger)


def dense_propagator(Hm, t):
    """exp(-i H t) from a dense symmetric eigendecomposition (reference only)."""
    w, U = np.linalg.eigh(Hm.dense_matrix())
    return (U * np.exp(-1j * w * t)) @ U.T


def trotter_matrix(Hm, t, n_steps):
    """Dense matrix of the n-step Strang propagator for total time t."""
    eye = np.eye(Hm.size, dtype=complex)
    # rows are basis states; transpose to get columns = images
    return trotter_evolve(eye, Hm, t / n_steps, n_steps).T
