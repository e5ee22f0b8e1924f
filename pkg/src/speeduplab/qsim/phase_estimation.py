"""Phase estimation of the Strang-split propagator W = exp(-i H t)."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import ConfigError
from ..grid import laplacian_ground_mode, spectral_upper_bound
from .propagate import trotter_evolve, trotter_matrix
from .state import QueryLedger, StateVector, qft_readout, report_qubits

MODES = ("exact", "sampled")


@dataclass(frozen=True)
class PhaseEstimationConfig:
    phase_bits: int = 8
    trotter_steps_per_W: int = 16
    evolution_time: Optional[float] = None  # None: 2 pi 0.9 / Lambda_max
    mode: str = "exact"
    seed: int = 0
    repetitions: int = 1  # sampled mode: median of this many runs

    def __post_init__(self):
        if self.phase_bits < 1 or self.trotter_steps_per_W < 1 or self.repetitions < 1:
            raise ConfigError("phase_bits, trotter_steps_per_W and repetitions must be >= 1")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.evolution_time is not None and not self.evolution_time > 0:
            raise ConfigError("evolution_time must be positive")


def default_evolution_time(grid):
    return 2 * math.pi * 0.9 / spectral_upper_bound(grid)


@dataclass
class PhaseEstimationResult:
    lambda_est: float
    outcome: int
    evolution_time: float
    bin_width: float  # energy units, 2 pi / (t 2^b)
    v_queries: int
    qubits: int
    distribution: Optional[np.ndarray] = None
    state: Optional[StateVector] = None

    def phase_of(self, energy):
        return (energy * self.evolution_time / (2 * math.pi)) % 1.0


def phase_estimation(Hm, cfg=PhaseEstimationConfig(), ledger=None, keep_state=False):
    """Estimate the smallest eigenvalue of ``Hm``.

    The grid register starts in the discrete Laplacian ground mode and the
    phase register in uniform superposition. Phase qubit j controls
    W^(2^j), where W is ``trotter_steps_per_W`` Strang steps of total time t;
    each controlled step is one potential query, so the ladder costs
    (2^b - 1) * s queries per run.
    """
    grid = Hm.grid
    ledger = ledger if ledger is not None else QueryLedger()
    t = cfg.evolution_time if cfg.evolution_time is not None else default_evolution_time(grid)
    if t * spectral_upper_bound(grid) >= 2 * math.pi:
        raise ConfigError(
            f"evolution time {t:g} lets eigenphases wrap (t * Lambda_max >= 2 pi)"
        )
    b, s = cfg.phase_bits, cfg.trotter_steps_per_W
    M = 2 ** b
    tau = t / s
    start = ledger.v_queries

    psi0 = laplacian_ground_mode(grid).astype(complex)
    amps = np.tile(psi0 / math.sqrt(M), (M, 1))
    register = np.arange(M)
    for j in range(b):
        rows = ((register >> j) & 1).astype(bool)
        amps[rows] = trotter_evolve(amps[rows], Hm, tau, (2 ** j) * s, ledger)
    amps = qft_readout(amps)
    state = StateVector(amps, (grid.d, grid.m), b)
    dist = state.phase_distribution()
    dist /= dist.sum()

    if cfg.mode == "exact":
        outcome = int(np.argmax(dist))
    else:
        rng = np.random.default_rng(cfg.seed)
        draws = rng.choice(M, size=cfg.repetitions, p=dist)
        outcome = int(np.sort(draws)[(cfg.repetitions - 1) // 2])
        # later repetitions rerun the same circuit
        ledger.add_v((cfg.repetitions - 1) * (M - 1) * s)

    return PhaseEstimationResult(
        lambda_est=2 * math.pi * outcome / (M * t),
        outcome=outcome,
        evolution_time=t,
        bin_width=2 * math.pi / (M * t),
        v_queries=ledger.v_queries - start,
        qubits=report_qubits(grid.d, grid.m, b),
        distribution=dist if cfg.mode == "exact" else None,
        state=state if keep_state else None,
    )


def trotter_ground_energy(Hm, t, n_steps):
    """Energy read off the split propagator's eigenphase that overlaps the
    true ground state most. Dense, for bias measurement on small grids."""
    w, U = np.linalg.eigh(Hm.dense_matrix())
    ground = U[:, 0]
    mu, X = np.linalg.eig(trotter_matrix(Hm, t, n_steps))
    k = int(np.argmax(np.abs(X.conj().T @ ground)))
    # exp(-i E t) = mu; pick the branch nearest the exact eigenvalue
    base = -np.angle(mu[k]) / t
    period = 2 * math.pi / t
    return float(base + period * round((w[0] - base) / period))
