"""Admissible potentials on the open unit cube and their counting oracle.

Every family satisfies ``0 <= V <= 1`` and ``|dV/dx_j| <= 1``. Analytic
families are checked at construction; tabulated data is only checked for
shape, and :func:`validate_class` is the way to screen it.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import DataError, DomainError, InputError

KINDS = ("zero", "const", "sep-sin", "cos-mix", "tabulated")

DEFAULT_TRUNCATION_BITS = 52
GRADIENT_STEP = 1e-4
GRADIENT_SLACK = 1e-6


def truncation_bits_for(eps):
    """Bits kept in oracle answers for a run targeting accuracy ``eps``."""
    if not eps > 0:
        raise InputError("eps must be positive")
    return max(1, math.ceil(math.log2(1.0 / eps))) + 10


@dataclass(frozen=True)
class PotentialSpec:
    """A member of the admissible potential class.

    ``params`` by kind:

    * zero: ()
    * const: (c,) with 0 <= c <= 1
    * sep-sin: () -- V(x) = mean_j sin(x_j)
    * cos-mix: (a, w) -- V(x) = a (1 - cos(w x_1 ... x_d)); needs a*w <= 1
      and a (1 - cos(min(w, pi))) <= 1
    * tabulated: flattened interior-grid values, dimension 1 fastest
    """

    kind: str
    params: tuple = ()
    dimension: int = 1
    _interp: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.kind not in KINDS:
            raise InputError(f"unknown potential kind {self.kind!r}")
        if not isinstance(self.dimension, (int, np.integer)) or self.dimension < 1:
            raise InputError("dimension must be a positive integer")
        p = self.params
        if self.kind in ("zero", "sep-sin") and p:
            raise InputError(f"{self.kind} takes no parameters")
        if self.kind == "const":
            if len(p) != 1 or not 0.0 <= p[0] <= 1.0:
                raise DomainError("const potential needs one value in [0, 1]")
        elif self.kind == "cos-mix":
            if len(p) != 2:
                raise InputError("cos-mix takes (a, w)")
            a, w = p
            if a < 0 or w <= 0 or a * w > 1.0 or a * (1.0 - math.cos(min(w, math.pi))) > 1.0:
                raise DomainError(f"cos-mix({a}, {w}) is outside the admissible class")
        elif self.kind == "tabulated":
            if not p:
                raise DataError("tabulated potential has no data")
            m = round(len(p) ** (1.0 / self.dimension))
            if m ** self.dimension != len(p):
                raise DataError(
                    f"{len(p)} tabulated values is not m^d for d={self.dimension}"
                )
            object.__setattr__(self, "_interp", _build_interpolator(np.asarray(p), self.dimension, m))

    @property
    def table_m(self):
        if self.kind != "tabulated":
            return None
        return round(len(self.params) ** (1.0 / self.dimension))

    def values(self, x):
        """Exact V at the rows of ``x`` (shape (k, d)); no accounting, no rounding."""
        x = np.asarray(x, dtype=float)
        k = x.shape[0]
        if self.kind == "zero":
            return np.zeros(k)
        if self.kind == "const":
            return np.full(k, self.params[0])
        if self.kind == "sep-sin":
            return np.sin(x).mean(axis=1)
        if self.kind == "cos-mix":
            a, w = self.params
            return a * (1.0 - np.cos(w * np.prod(x, axis=1)))
        return self._interp(x)


def _build_interpolator(table, d, m):
    h = 1.0 / (m + 1)
    if m == 1:
        const = float(table[0])
        return lambda x: np.full(np.asarray(x).shape[0], const)
    nodes = h * np.arange(1, m + 1)
    # flat order has dimension 1 fastest, i.e. the last C axis
    grid_vals = table.reshape((m,) * d).transpose(tuple(range(d - 1, -1, -1)))
    interp = RegularGridInterpolator((nodes,) * d, grid_vals, method="linear")

    def evaluate(x):
        # constant extension between the outermost nodes and the boundary
        return interp(np.clip(x, nodes[0], nodes[-1]))

    return evaluate


class PotentialOracle:
    """Black-box access to V with call counting and fixed-point answers.

    Each point evaluated costs one call. Answers are V rounded to
    ``truncation_bits`` fractional bits. The counter is guarded by a lock so
    concurrent callers never lose counts.
    """

    def __init__(self, spec, truncation_bits=DEFAULT_TRUNCATION_BITS):
        if int(truncation_bits) < 1:
            raise InputError("truncation_bits must be positive")
        self.spec = spec
        self.truncation_bits = int(truncation_bits)
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def call_count(self):
        return self._calls

    @property
    def dimension(self):
        return self.spec.dimension

    def _check_points(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.spec.dimension:
            raise InputError(
                f"expected points of dimension {self.spec.dimension}, got shape {x.shape}"
            )
        if np.any(x <= 0.0) or np.any(x >= 1.0):
            raise DomainError("evaluation points must lie strictly inside (0, 1)^d")
        return x

    def _round(self, v):
        scale = 2.0 ** self.truncation_bits
        return np.round(v * scale) / scale

    def evaluate_many(self, x):
        x = self._check_points(x)
        out = self._round(self.spec.values(x))
        with self._lock:
            self._calls += x.shape[0]
        return out

    def evaluate(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.ndim != 1:
            raise InputError("evaluate takes a single point; use evaluate_many")
        return float(self.evaluate_many(x[None, :])[0])


@dataclass(frozen=True)
class ValidationReport:
    bounds_ok: bool
    max_abs_value: float
    min_value: float
    max_abs_gradient: float
    samples: int


def validate_class(spec, samples_per_dim=16, *, step=GRADIENT_STEP, slack=GRADIENT_SLACK):
    """Sample V and central-difference gradients on a tensor grid.

    The sample grid stays ``step`` away from the boundary so every difference
    quotient uses interior points.
    """
    if samples_per_dim < 2:
        raise InputError("samples_per_dim must be >= 2")
    if spec.kind == "tabulated" and not spec.params:
        raise DataError("tabulated potential has no data")
    d = spec.dimension
    axis = np.linspace(2 * step, 1 - 2 * step, samples_per_dim)
    pts = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    vals = spec.values(pts)
    worst_grad = 0.0
    for j in range(d):
        e = np.zeros(d)
        e[j] = step
        g = (spec.values(pts + e) - spec.values(pts - e)) / (2 * step)
        worst_grad = max(worst_grad, float(np.max(np.abs(g))))
    max_abs = float(np.max(np.abs(vals)))
    min_val = float(np.min(vals))
    ok = max_abs <= 1.0 and min_val >= 0.0 and worst_grad <= 1.0 + slack
    return ValidationReport(ok, max_abs, min_val, worst_grad, pts.shape[0])


# --- tabulated files and the CLI mini-language ------------------------------

def save_tabulated(path, d, m, values):
    values = np.asarray(values, dtype=float).ravel()
    if values.size != m ** d:
        raise DataError(f"expected {m ** d} values, got {values.size}")
    lines = ["d,m", f"{d},{m}"] + [repr(float(v)) for v in values]
    Path(path).write_text("\n".join(lines) + "\n")


def load_tabulated(path):
    """Read a tabulated potential file into a :class:`PotentialSpec`.

    Layout: a ``d,m`` header row, a row with the two integers, then one
    value per interior grid point. The literal header row may be omitted.
    """
    try:
        rows = [r.strip() for r in Path(path).read_text().splitlines() if r.strip()]
    except OSError as exc:
        raise DataError(f"cannot read tabulated potential {path}: {exc}") from exc
    if rows and rows[0].replace(" ", "").lower() == "d,m":
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: missing d,m header")
    try:
        d, m = (int(s) for s in rows[0].split(","))
        values = [float(r) for r in rows[1:]]
    except ValueError as exc:
        raise DataError(f"{path}: malformed tabulated potential ({exc})") from exc
    if len(values) != m ** d:
        raise DataError(f"{path}: expected {m ** d} values for d={d}, m={m}, got {len(values)}")
    return PotentialSpec("tabulated", values, d)


def parse_potential(text, d):
    """Parse ``zero``, ``const:<c>``, ``sep-sin``, ``cos-mix[:a,w]`` or ``tab:<path>``."""
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    try:
        if name == "zero" and not arg:
            return PotentialSpec("zero", (), d)
        if name == "const":
            return PotentialSpec("const", (float(arg),), d)
        if name == "sep-sin" and not arg:
            return PotentialSpec("sep-sin", (), d)
        if name == "cos-mix":
            params = tuple(float(s) for s in arg.split(",")) if arg else (0.5, 1.0)
            return PotentialSpec("cos-mix", params, d)
    except ValueError as exc:
        raise InputError(f"bad potential {text!r}: {exc}") from exc
    if name == "tab":
        spec = load_tabulated(arg)
        if spec.dimension != d:
            raise InputError(f"tabulated potential has d={spec.dimension}, run has d={d}")
        return spec
    raise InputError(f"unrecognised potential {text!r}")
