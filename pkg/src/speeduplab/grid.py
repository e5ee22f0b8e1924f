"""Matrix-free finite-difference Hamiltonian on the interior grid of (0,1)^d.

Flat grid vectors are ordered row-major with dimension 1 varying fastest,
so a C-order reshape to ``(m,) * d`` puts dimension 1 on the last axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .errors import CapacityError, InputError

DEFAULT_GRID_CAP = 2 ** 24


@dataclass(frozen=True)
class GridSpec:
    d: int
    m: int
    kappa: float = 1.0
    cap: int = DEFAULT_GRID_CAP

    def __post_init__(self):
        if self.d < 1 or self.m < 1:
            raise InputError("grid needs d >= 1 and m >= 1")
        if not self.kappa > 0:
            raise InputError("kappa must be positive")
        if self.m ** self.d > self.cap:
            raise CapacityError(
                f"grid has m^d = {self.m ** self.d} points, cap is {self.cap}",
                size=self.m ** self.d,
            )

    @property
    def h(self):
        return 1.0 / (self.m + 1)

    @property
    def size(self):
        return self.m ** self.d

    @property
    def shape(self):
        return (self.m,) * self.d

    @classmethod
    def from_eps(cls, d, eps, **kw):
        """Grid with mesh width h <= eps."""
        if not 0 < eps:
            raise InputError("eps must be positive")
        return cls(d, max(1, math.ceil(1.0 / eps) - 1), **kw)


def grid_points(grid):
    """Interior grid coordinates, shape (m^d, d); column j is x_{j+1}."""
    idx = np.indices(grid.shape).reshape(grid.d, -1)
    # C axis d-1-j carries dimension j
    return (idx[::-1].T + 1) * grid.h


def mode_energies_1d(grid):
    """Eigenvalues of the 1D Dirichlet stencil, k = 1..m, without kappa."""
    k = np.arange(1, grid.m + 1)
    return (4.0 / grid.h ** 2) * np.sin(k * np.pi * grid.h / 2) ** 2


def laplacian_mode_energy(grid, k):
    """kappa * sum_j (4/h^2) sin^2(k_j pi h / 2) for the sine mode with multi-index k."""
    k = np.atleast_1d(np.asarray(k))
    if k.shape != (grid.d,):
        raise InputError(f"multi-index needs {grid.d} entries")
    if np.any(k < 1) or np.any(k > grid.m):
        raise InputError(f"mode index out of range 1..{grid.m}")
    return grid.kappa * float(
        np.sum((4.0 / grid.h ** 2) * np.sin(k * np.pi * grid.h / 2) ** 2)
    )


def continuum_ground_energy_V0(d, kappa=1.0):
    if d < 1:
        raise InputError("d must be >= 1")
    return d * math.pi ** 2 * kappa


def spectral_upper_bound(grid):
    """Certified bound on the largest eigenvalue when 0 <= V <= 1."""
    return grid.kappa * 4 * grid.d / grid.h ** 2 + 1.0


def sine_mode(grid, k):
    """Normalised discrete sine mode with multi-index k (flat vector)."""
    k = np.atleast_1d(np.asarray(k))
    j = np.arange(1, grid.m + 1)
    out = np.ones(1)
    # build from the slowest dimension inward so dimension 1 ends up fastest
    for kj in k[::-1]:
        out = np.kron(out, np.sin(kj * j * np.pi * grid.h))
    return out / np.linalg.norm(out)


def laplacian_ground_mode(grid):
    return sine_mode(grid, np.ones(grid.d, dtype=int))


class GridHamiltonian:
    """H = kappa * (-Laplacian_h) + diag(V) with zero Dirichlet data.

    With ``cache=True`` (default) V is sampled once at construction, which
    costs exactly m^d oracle calls; later applies are free of oracle use.
    """

    def __init__(self, grid, oracle, cache=True):
        if oracle.dimension != grid.d:
            raise InputError(f"oracle dimension {oracle.dimension} != grid dimension {grid.d}")
        self.grid = grid
        self.oracle = oracle
        self.cached_diagonal = None
        if cache:
            self.cached_diagonal = oracle.evaluate_many(grid_points(grid))

    @property
    def size(self):
        return self.grid.size

    @property
    def diagonal(self):
        """V at the grid points (queries the oracle again if not cached)."""
        if self.cached_diagonal is not None:
            return self.cached_diagonal
        return self.oracle.evaluate_many(grid_points(self.grid))

    def apply(self, v):
        v = np.asarray(v)
        if v.shape != (self.size,):
            raise InputError(f"vector length {v.shape} does not match grid size {self.size}")
        dtype = np.result_type(v.dtype, np.float64)
        v = np.ascontiguousarray(v, dtype=dtype)
        out = np.empty_like(v)
        g = self.grid
        _kernels.laplacian_apply(v, self.diagonal, out, g.d, g.m, g.kappa / g.h ** 2)
        return out

    __matmul__ = apply

    def sparse_matrix(self):
        """Explicit CSR matrix built from Kronecker sums (independent of :meth:`apply`)."""
        g = self.grid
        t1 = sp.diags([-np.ones(g.m - 1), 2 * np.ones(g.m), -np.ones(g.m - 1)], [-1, 0, 1]) / g.h ** 2
        eye = sp.identity(g.m, format="csr")
        lap = sp.csr_matrix((g.size, g.size))
        for j in range(g.d):
            term = sp.identity(1, format="csr")
            # kron order: slowest dimension first, dimension 1 last
            for i in range(g.d - 1, -1, -1):
                term = sp.kron(term, t1 if i == j else eye, format="csr")
            lap = lap + term
        return (g.kappa * lap + sp.diags(self.diagonal)).tocsr()

    def dense_matrix(self):
        return self.sparse_matrix().toarray()
