"""Complexity formulas, speedup ratios and the integration demonstrations.

Closed forms are evaluated through natural logarithms so that d up to 50
and eps down to 1e-12 never overflow; linear values saturate to ``inf``.
"""
from __future__ import annotations

import math
import threading
import warnings
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import CapacityError, InputError
from .qsim.amplitude import estimate_amplitude
from .qsim.state import QueryLedger


class RegimeWarning(UserWarning):
    """Formula evaluated outside the asymptotic regime d*eps -> 0."""


def _exp(x):
    return math.exp(x) if x < 709.0 else math.inf


@dataclass(frozen=True)
class ComplexityModel:
    d: int
    eps: float
    c: float = 2.0
    delta: float = 0.5

    def __post_init__(self):
        if not self.c > 1:
            raise InputError("c must exceed 1")
        if not self.delta > 0:
            raise InputError("delta must be positive")
        if not 0 < self.eps < 1:
            raise InputError("eps must lie in (0, 1)")
        if self.d < 1:
            raise InputError("d must be >= 1")

    @property
    def regime_ok(self):
        return self.d * self.eps < 1

    @property
    def trivial_applies(self):
        """eps >= 1/d: the constant answer d pi^2 + 1/2 already suffices."""
        return self.eps >= 1.0 / self.d


def log_classical_lb(model):
    return -model.d * math.log(model.c * model.d * model.eps)


def classical_lb(model):
    """(c d eps)^(-d)."""
    if model.c * model.d * model.eps >= 1:
        warnings.warn(
            f"c*d*eps = {model.c * model.d * model.eps:g} >= 1; bound is outside its regime",
            RegimeWarning, stacklevel=2,
        )
    return _exp(log_classical_lb(model))


def log_quantum_bounds(model):
    lower = -0.5 * math.log(model.d * model.eps)
    upper = math.log(model.d) - (3 + model.delta) * math.log(model.eps)
    return lower, upper


def quantum_bounds(model):
    """(lower, upper) = ((d eps)^(-1/2), d eps^(-(3 + delta)))."""
    lo, up = log_quantum_bounds(model)
    return _exp(lo), _exp(up)


def log_s2_range(model):
    cl = log_classical_lb(model)
    lo, up = log_quantum_bounds(model)
    return cl - up, cl - lo


def s2_range(model):
    """(s2_lower, s2_upper): classical bound over the quantum upper / lower bound."""
    lo, up = log_s2_range(model)
    return _exp(lo), _exp(up)


@dataclass
class CostLedger:
    oracle_calls: int = 0
    quantum_queries: int = 0
    arithmetic_ops: int = 0
    qubits: int = 0

    def classical_cost(self, include_arithmetic=False):
        return self.oracle_calls + (self.arithmetic_ops if include_arithmetic else 0)

    def quantum_cost(self, include_arithmetic=False):
        return self.quantum_queries + (self.arithmetic_ops if include_arithmetic else 0)


def s1_empirical(classical_cost, quantum_cost, include_arithmetic=False):
    """Measured classical cost over measured quantum cost.

    Accepts plain numbers or :class:`CostLedger` instances; ledgers count
    oracle calls / queries only unless ``include_arithmetic`` is set.
    """
    if isinstance(classical_cost, CostLedger):
        classical_cost = classical_cost.classical_cost(include_arithmetic)
    if isinstance(quantum_cost, CostLedger):
        quantum_cost = quantum_cost.quantum_cost(include_arithmetic)
    if quantum_cost <= 0:
        raise InputError("quantum cost must be positive")
    if classical_cost <= 0:
        raise InputError("classical cost must be positive")
    return classical_cost / quantum_cost


def boolean_mean_classical_lb(n, eps):
    """Worst-case evaluations 2^(n-1) (1 - eps) any classical method needs."""
    if n < 1 or not 0 < eps < 1:
        raise InputError("need n >= 1 and eps in (0, 1)")
    return 2.0 ** (n - 1) * (1.0 - eps)


@dataclass
class SpeedupReport:
    model: ComplexityModel
    classical_lb: float
    quantum_lb: float
    quantum_ub: float
    s2_lower: float
    s2_upper: float
    regime_ok: bool
    log10: dict
    s1_empirical: Optional[float] = None
    ledgers: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self):
        out = asdict(self)
        out["model"] = {"c": self.model.c, "delta": self.model.delta, "d": self.model.d, "eps": self.model.eps}
        return out


def speedup_report(model, classical=None, quantum=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        cl = classical_lb(model)
    qlo, qup = quantum_bounds(model)
    slo, sup = s2_range(model)
    ln10 = math.log(10)
    log10 = {
        "classical_lb": log_classical_lb(model) / ln10,
        "quantum_lb": log_quantum_bounds(model)[0] / ln10,
        "quantum_ub": log_quantum_bounds(model)[1] / ln10,
        "s2_lower": log_s2_range(model)[0] / ln10,
        "s2_upper": log_s2_range(model)[1] / ln10,
    }
    notes = [f"evaluated with c={model.c:g}, delta={model.delta:g}; quantum_lb is an order, constant taken as 1"]
    if not model.regime_ok:
        notes.append("d*eps >= 1: outside the asymptotic regime d*eps -> 0")
    if model.trivial_applies:
        notes.append("eps >= 1/d: the zero-query answer d*pi^2 + 1/2 already meets the target")
    report = SpeedupReport(model, cl, qlo, qup, slo, sup, model.regime_ok, log10, notes=notes)
    if classical is not None and quantum is not None:
        report.s1_empirical = s1_empirical(classical, quantum)
        report.ledgers = {"classical": asdict(classical), "quantum": asdict(quantum)}
    return report


# --- integration demonstrations -----------------------------------------------

class CountingFunction:
    """Wrap a vectorised integrand and count point evaluations."""

    def __init__(self, fn):
        self.fn = fn
        self.calls = 0
        self._lock = threading.Lock()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with self._lock:
            self.calls += x.shape[0]
        return np.asarray(self.fn(x), dtype=float)


@dataclass
class IntegrationResult:
    estimate: float
    calls: int


def midpoints(n):
    return (np.arange(n) + 0.5) / n


def integrate_classical_1d(f, n_points):
    """Composite midpoint rule; exactly ``n_points`` evaluations."""
    if n_points < 1:
        raise InputError("n_points must be >= 1")
    f = f if isinstance(f, CountingFunction) else CountingFunction(f)
    before = f.calls
    est = float(np.mean(f(midpoints(n_points))))
    return IntegrationResult(est, f.calls - before)


def sawtooth_for_midpoints(n):
    """Slope-1 integrand vanishing at all n midpoint nodes.

    Its integral is 1/(4n) while the midpoint rule returns 0.
    """
    def f(x):
        x = np.asarray(x, dtype=float)
        return np.abs(x * n - np.floor(x * n) - 0.5) / n

    return f


def integrate_classical_product(d, f, m_per_dim, cap=2 ** 24, chunk=2 ** 18):
    """Tensor-product midpoint rule; exactly m^d evaluations of ``f`` on (k, d) arrays."""
    if m_per_dim < 1 or d < 1:
        raise InputError("need d >= 1 and m_per_dim >= 1")
    total = m_per_dim ** d
    if total > cap:
        raise CapacityError(f"product rule needs {total} points, cap is {cap}", size=total)
    f = f if isinstance(f, CountingFunction) else CountingFunction(f)
    before = f.calls
    nodes = midpoints(m_per_dim)
    acc = 0.0
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        digits = (idx[:, None] // (m_per_dim ** np.arange(d))) % m_per_dim
        acc += float(np.sum(f(nodes[digits])))
    return IntegrationResult(acc / total, f.calls - before)


@dataclass
class QuantumIntegrationResult:
    estimate: float
    discretized_mean: float
    M: int
    n_points: int
    f_queries: int
    discretization_bound: float
    estimation_bound: float
    distribution: Optional[np.ndarray] = None

    def expected_abs_error(self, truth):
        vals = np.sin(np.pi * np.arange(self.M) / self.M) ** 2
        return float(self.distribution @ np.abs(vals - truth))


def integrate_quantum_1d(f, M, n_points, ledger=None, mode="exact", seed=0):
    """Amplitude estimation of the midpoint-sample mean of f (values in [0, 1]).

    The prepared state is sum_i |i> (sqrt(1 - f_i)|0> + sqrt(f_i)|1>) / sqrt(n);
    its good (ancilla 1) probability is the sample mean. Each Grover iterate
    counts as one query, M - 1 in total.
    """
    if n_points < 1:
        raise InputError("n_points must be >= 1")
    vals = np.asarray(f(midpoints(n_points)), dtype=float)
    if np.any(vals < 0) or np.any(vals > 1):
        raise InputError("integrand values must be rescaled into [0, 1]")
    amp = np.stack([np.sqrt(1 - vals), np.sqrt(vals)], axis=1) / math.sqrt(n_points)
    prepared = amp.reshape(-1).astype(complex)
    good = np.tile([1.0, -1.0], n_points)

    def mark(batch):
        return batch * good

    ledger = ledger if ledger is not None else QueryLedger()
    res = estimate_amplitude(prepared, mark, M, ledger, mode, seed)
    a = res.estimate
    return QuantumIntegrationResult(
        estimate=a,
        discretized_mean=float(vals.mean()),
        M=M,
        n_points=n_points,
        f_queries=res.f_queries,
        discretization_bound=1.0 / (4 * n_points),
        estimation_bound=2 * math.pi * math.sqrt(a * (1 - a)) / M + math.pi ** 2 / M ** 2,
        distribution=res.distribution,
    )
