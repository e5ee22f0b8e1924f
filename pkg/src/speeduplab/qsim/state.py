"""Register containers and query accounting for the simulator."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np


@dataclass
class QueryLedger:
    """Monotone counters for quantum oracle applications.

    One controlled application of the potential phase (or of the Boolean
    marking oracle) on the whole superposition counts as one query.
    """

    v_queries: int = 0
    f_queries: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def add_v(self, n=1):
        if n < 0:
            raise ValueError("query counts only grow")
        with self._lock:
            self.v_queries += n

    def add_f(self, n=1):
        if n < 0:
            raise ValueError("query counts only grow")
        with self._lock:
            self.f_queries += n

    def snapshot(self):
        return {"v_queries": self.v_queries, "f_queries": self.f_queries}


@dataclass
class StateVector:
    """Amplitudes over phase register (rows) times system register (columns)."""

    amplitudes: np.ndarray
    grid_dims: tuple
    phase_bits: int

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def phase_distribution(self):
        """Exact outcome probabilities of measuring the phase register."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)


def qft_readout(rows):
    """Fourier readout of a phase register holding sum_k |k> (x) U^k |psi> / sqrt(M).

    For U |psi> = exp(-2 pi i phi) |psi> the outcome j = M phi is
    reinforced. ``rows`` has the register index on axis 0.
    """
    M = rows.shape[0]
    return math.sqrt(M) * np.fft.ifft(rows, axis=0)


def report_qubits(d, m, b):
    """Grid register d*ceil(log2(m+1)) plus b phase qubits."""
    return d * math.ceil(math.log2(m + 1)) + b


def mass_within(distribution, phase, bins=1.0):
    """Probability of outcomes within ``bins`` bins (circularly) of ``phase`` in [0, 1)."""
    p = np.asarray(distribution)
    M = p.size
    j = np.arange(M)
    dist = np.abs(j - M * (phase % 1.0))
    dist = np.minimum(dist, M - dist)
    return float(p[dist <= bins + 1e-9].sum())
