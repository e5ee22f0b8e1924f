"""Classical ground-state path: inverse iteration with CG inner solves."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg

from .errors import CapacityError, ConvergenceError, InputError
from .grid import laplacian_ground_mode, laplacian_mode_energy

DENSE_CAP = 4096


class CGResult(NamedTuple):
    x: np.ndarray
    iterations: int
    residual: float  # relative, ||(H - shift) x - b|| / ||b||


def cg_solve(Hm, b, shift=0.0, tol=1e-10, max_iter=None):
    """Conjugate gradients on (H - shift I) x = b.

    Raises :class:`ConvergenceError` carrying the best iterate when
    ``max_iter`` runs out before the relative residual reaches ``tol``.
    """
    b = np.asarray(b)
    if b.shape != (Hm.size,):
        raise InputError("right-hand side length does not match the grid")
    if max_iter is None:
        max_iter = max(10 * Hm.size, 1000)
    x = np.zeros_like(b, dtype=np.result_type(b.dtype, np.float64))
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return CGResult(x, 0, 0.0)
    r = b.astype(x.dtype, copy=True)
    p = r.copy()
    rr = np.vdot(r, r).real
    target = (tol * bnorm) ** 2
    for it in range(1, max_iter + 1):
        Ap = Hm.apply(p) - shift * p
        alpha = rr / np.vdot(p, Ap).real
        x += alpha * p
        r -= alpha * Ap
        rr_new = np.vdot(r, r).real
        if rr_new <= target:
            return CGResult(x, it, math.sqrt(rr_new) / bnorm)
        p *= rr_new / rr
        p += r
        rr = rr_new
    raise ConvergenceError(
        f"CG did not reach tol={tol:g} in {max_iter} iterations",
        best=x, residual=math.sqrt(rr) / bnorm, iterations=max_iter,
    )


@dataclass(frozen=True)
class InverseIterConfig:
    shift: float = 0.0
    max_outer: int = 200
    residual_tol: Optional[float] = None  # None: 1e-8 times the Laplacian ground energy
    cg_tol: float = 1e-10
    cg_max_iter: Optional[int] = None
    start: str = "laplacian"  # or "random"

    def __post_init__(self):
        if self.max_outer < 1 or self.cg_tol <= 0:
            raise InputError("max_outer and cg_tol must be positive")
        if self.residual_tol is not None and self.residual_tol <= 0:
            raise InputError("residual_tol must be positive")
        if self.start not in ("laplacian", "random"):
            raise InputError("start must be 'laplacian' or 'random'")


@dataclass
class EigenResult:
    lambda_est: float
    outer_iters: int
    total_cg_iters: int
    oracle_calls: int
    residual: float
    vector: np.ndarray = None


def analytic_shift(grid, margin=0.5):
    """A shift strictly below the spectrum: V >= 0 puts every eigenvalue above
    the discrete Laplacian ground energy."""
    if margin <= 0:
        raise InputError("margin must be positive")
    ones = np.ones(grid.d, dtype=int)
    return laplacian_mode_energy(grid, ones) - grid.kappa * 3 * math.pi ** 2 * margin


def inverse_iterate(Hm, cfg=InverseIterConfig(), seed=0):
    grid = Hm.grid
    e0 = laplacian_mode_energy(grid, np.ones(grid.d, dtype=int))
    if cfg.shift >= e0:
        raise InputError(f"shift {cfg.shift} is not below the spectrum lower bound {e0}")
    tol = cfg.residual_tol if cfg.residual_tol is not None else 1e-8 * e0
    if cfg.start == "laplacian":
        v = laplacian_ground_mode(grid)
    else:
        v = np.random.default_rng(seed).standard_normal(Hm.size)
        v /= np.linalg.norm(v)
    total_cg = 0
    lam = res = float("nan")
    for outer in range(1, cfg.max_outer + 1):
        sol = cg_solve(Hm, v, cfg.shift, cfg.cg_tol, cfg.cg_max_iter)
        total_cg += sol.iterations
        v = sol.x / np.linalg.norm(sol.x)
        Hv = Hm.apply(v)
        lam = float(np.vdot(v, Hv).real)
        res = float(np.linalg.norm(Hv - lam * v))
        if res <= tol:
            return EigenResult(lam, outer, total_cg, Hm.oracle.call_count, res, v)
    raise ConvergenceError(
        f"inverse iteration stalled at residual {res:.3e} (tol {tol:.3e})",
        best=lam, residual=res, iterations=cfg.max_outer,
    )


def dense_smallest_eigenvalue(Hm):
    """Brute-force reference: assemble H and run a direct symmetric eigensolve."""
    if Hm.size > DENSE_CAP:
        raise CapacityError(f"dense reference limited to {DENSE_CAP} points, grid has {Hm.size}", size=Hm.size)
    return float(scipy.linalg.eigh(Hm.dense_matrix(), eigvals_only=True, subset_by_index=[0, 0])[0])


def trivial_estimate(d, eps):
    """d pi^2 + 1/2 when eps >= 1/d (no oracle calls), otherwise None."""
    if d < 1 or not eps > 0:
        raise InputError("need d >= 1 and eps > 0")
    if eps >= 1.0 / d:
        return d * math.pi ** 2 + 0.5
    return None
