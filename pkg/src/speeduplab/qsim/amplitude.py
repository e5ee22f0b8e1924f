"""Amplitude estimation for the mean of a Boolean function."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import InputError
from .state import QueryLedger, qft_readout

MINUS = np.array([1.0, -1.0]) / math.sqrt(2.0)


class BooleanOracle:
    """Truth-table oracle f: {0,1}^n -> {0,1} acting as |x>|y> -> |x>|y xor f(x)>."""

    def __init__(self, n, table):
        table = np.asarray(table).astype(np.int8).ravel()
        if n < 1:
            raise InputError("n must be >= 1")
        if table.size != 2 ** n:
            raise InputError(f"truth table has {table.size} entries, expected {2 ** n}")
        if np.any((table != 0) & (table != 1)):
            raise InputError("truth table entries must be 0 or 1")
        self.n = n
        self.table = table
        self._good = table.astype(bool)
        self.calls = 0
        self._lock = threading.Lock()

    @classmethod
    def from_predicate(cls, n, predicate):
        return cls(n, [1 if predicate(x) else 0 for x in range(2 ** n)])

    @classmethod
    def parity(cls, n):
        return cls.from_predicate(n, lambda x: bin(x).count("1") % 2 == 1)

    @classmethod
    def majority(cls, n):
        return cls.from_predicate(n, lambda x: 2 * bin(x).count("1") > n)

    @classmethod
    def constant(cls, n, value):
        return cls(n, np.full(2 ** n, int(bool(value))))

    @property
    def mean(self):
        return float(self.table.mean())

    def apply(self, state):
        """U_f on states shaped (..., 2^(n+1)) with the output qubit last."""
        out = np.array(state, dtype=complex)
        view = out.reshape(out.shape[:-1] + (2 ** self.n, 2))
        good = view[..., self._good, :]
        view[..., self._good, :] = good[..., ::-1]
        with self._lock:
            self.calls += 1
        return out


def prepared_state(oracle, weights=None):
    """A|0>: sum_x sqrt(w_x) |x> (x) |->, uniform weights by default."""
    N = 2 ** oracle.n
    if weights is None:
        amp = np.full(N, 1.0 / math.sqrt(N))
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (N,) or np.any(w < 0) or not math.isclose(w.sum(), 1.0, rel_tol=1e-12):
            raise InputError("weights must be a probability vector over the 2^n inputs")
        amp = np.sqrt(w)
    return np.kron(amp, MINUS).astype(complex)


def reflect_about(state, psi):
    """(2 |psi><psi| - I) applied to the last axis of ``state``."""
    overlap = state @ psi.conj()
    return 2.0 * overlap[..., None] * psi - state


def grover_iterate(state, oracle, ledger=None, prepared=None):
    """Q = R_psi U_f: one marking query then reflection about the prepared state."""
    psi = prepared if prepared is not None else prepared_state(oracle)
    out = reflect_about(oracle.apply(state), psi)
    if ledger is not None:
        ledger.add_f(1)
    return out


def good_probability(state, oracle):
    """Probability that the input register holds an x with f(x) = 1."""
    view = np.asarray(state).reshape(-1, 2 ** oracle.n, 2)
    return float(np.sum(np.abs(view[:, oracle._good, :]) ** 2))


@dataclass
class AmplitudeEstimate:
    estimate: float
    outcome: int
    M: int
    f_queries: int
    distribution: Optional[np.ndarray] = None

    def outcome_values(self):
        return np.sin(np.pi * np.arange(self.M) / self.M) ** 2

    def expected_abs_error(self, truth):
        """Exact-mode mean of |sin^2(pi k / M) - truth| over the outcome distribution."""
        if self.distribution is None:
            raise ValueError("expected error needs the exact distribution")
        return float(self.distribution @ np.abs(self.outcome_values() - truth))


def estimate_amplitude(prepared, mark, M, ledger=None, mode="exact", seed=0):
    """Phase estimation over Q = R_prepared * mark with M outcomes.

    ``mark`` applies the good-state sign flip to a batch of states; each
    controlled application of Q on the register is one query, M - 1 in total.
    """
    if M < 2 or M & (M - 1):
        raise InputError("M must be a power of two >= 2")
    if mode not in ("exact", "sampled"):
        raise InputError("mode must be 'exact' or 'sampled'")
    ledger = ledger if ledger is not None else QueryLedger()
    start = ledger.f_queries
    bits = M.bit_length() - 1
    rows = np.tile(prepared / math.sqrt(M), (M, 1))
    register = np.arange(M)
    for j in range(bits):
        sel = ((register >> j) & 1).astype(bool)
        block = rows[sel]
        for _ in range(2 ** j):
            block = reflect_about(mark(block), prepared)
            ledger.add_f(1)
        rows[sel] = block
    dist = np.sum(np.abs(qft_readout(rows)) ** 2, axis=1)
    dist /= dist.sum()
    if mode == "exact":
        k = int(np.argmax(dist))
    else:
        k = int(np.random.default_rng(seed).choice(M, p=dist))
    return AmplitudeEstimate(
        estimate=float(np.sin(np.pi * k / M) ** 2),
        outcome=k,
        M=M,
        f_queries=ledger.f_queries - start,
        distribution=dist if mode == "exact" else None,
    )


def amplitude_estimate_mean(oracle, M, ledger=None, mode="exact", seed=0, weights=None):
    """Estimate mean(f) as sin^2(pi k / M) using M - 1 oracle queries."""
    return estimate_amplitude(prepared_state(oracle, weights), oracle.apply, M, ledger, mode, seed)


def outcome_count_for(eps):
    """Smallest power-of-two M with pi / M <= eps.

    An outcome within one bin of the true phase has |theta_hat - theta| <=
    pi / M, and |sin^2 a - sin^2 b| <= |a - b|, so such outcomes are
    eps-accurate; they occur with probability >= 8 / pi^2.
    """
    if not 0 < eps < 1:
        raise InputError("eps must lie in (0, 1)")
    return 2 ** max(1, math.ceil(math.log2(math.pi / eps)))
