"""Command-line front end; prints one JSON record per run."""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
import uuid
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .eigensolver import (
    DENSE_CAP,
    InverseIterConfig,
    analytic_shift,
    dense_smallest_eigenvalue,
    inverse_iterate,
    trivial_estimate,
)
from .errors import CapacityError, InputError, RunLookupError, SpeedupLabError
from .grid import GridHamiltonian, GridSpec
from .potential import DEFAULT_TRUNCATION_BITS, PotentialOracle, parse_potential, truncation_bits_for
from .qsim import (
    BooleanOracle,
    PhaseEstimationConfig,
    QueryLedger,
    amplitude_estimate_mean,
    outcome_count_for,
    phase_estimation,
    report_qubits,
)
from .speedup import (
    ComplexityModel,
    CostLedger,
    boolean_mean_classical_lb,
    integrate_classical_1d,
    integrate_classical_product,
    integrate_quantum_1d,
    sawtooth_for_midpoints,
    speedup_report,
)

STATE_CAP = 2 ** 26


@dataclass
class RunRecord:
    run_id: str
    command: str
    params: dict
    estimate: Optional[float]
    reference: Optional[float]
    oracle_calls: int
    quantum_queries: int
    qubits: int
    wall_ms: int
    seed: int
    extras: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)


# --- argument validation ------------------------------------------------------

def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if v < 1:
        raise argparse.ArgumentTypeError(f"{v} must be >= 1")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"{v} must be >= 0")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number")
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"{v} must be a positive finite number")
    return v


def _unit_float(text):
    v = _positive_float(text)
    if v >= 1:
        raise argparse.ArgumentTypeError(f"{v} must lie in (0, 1)")
    return v


def _power_of_two(text):
    v = _positive_int(text)
    if v < 2 or v & (v - 1):
        raise argparse.ArgumentTypeError(f"{v} is not a power of two >= 2")
    return v


# --- ground-energy ------------------------------------------------------------

def _build_hamiltonian(args):
    if args.m is not None:
        grid = GridSpec(args.d, args.m, kappa=args.kappa)
    elif args.eps is not None:
        grid = GridSpec.from_eps(args.d, args.eps, kappa=args.kappa)
    else:
        raise InputError("give --m or --eps")
    bits = args.truncation_bits
    if bits is None:
        bits = truncation_bits_for(args.eps) if args.eps is not None else DEFAULT_TRUNCATION_BITS
    spec = parse_potential(args.potential, args.d)
    return GridHamiltonian(grid, PotentialOracle(spec, bits))


def _dense_reference(Hm):
    if Hm.size > DENSE_CAP:
        return None
    return dense_smallest_eigenvalue(Hm)


def _relative(est, ref):
    if est is None or ref is None:
        return None
    return abs(est - ref) / abs(ref)


def run_ground_energy(args):
    params = {"d": args.d, "m": args.m, "eps": args.eps, "potential": args.potential, "kappa": args.kappa}
    if args.method == "trivial":
        if args.eps is None:
            raise InputError("trivial needs --eps")
        est = trivial_estimate(args.d, args.eps)
        return dict(command="ground-energy trivial", params={"d": args.d, "eps": args.eps},
                    estimate=est, reference=None, oracle_calls=0, quantum_queries=0, qubits=0,
                    extras={"applicable": est is not None})

    Hm = _build_hamiltonian(args)
    grid = Hm.grid
    params.update(m=grid.m, truncation_bits=Hm.oracle.truncation_bits)
    extras = {"grid_points": grid.size}
    if args.method == "dense":
        est = dense_smallest_eigenvalue(Hm)
        ref, calls, queries, qubits = est, Hm.oracle.call_count, 0, 0
    elif args.method == "classical":
        shift = analytic_shift(grid, args.shift_margin) if args.shift_margin else 0.0
        cfg = InverseIterConfig(shift=shift, max_outer=args.max_outer,
                                residual_tol=args.residual_tol, cg_tol=args.cg_tol,
                                start=args.start)
        params.update(shift=shift, max_outer=args.max_outer, residual_tol=args.residual_tol,
                      cg_tol=args.cg_tol, start=args.start)
        res = inverse_iterate(Hm, cfg, seed=args.seed)
        calls_after_solve = Hm.oracle.call_count
        est, calls, queries, qubits = res.lambda_est, calls_after_solve, 0, 0
        extras.update(outer_iters=res.outer_iters, total_cg_iters=res.total_cg_iters, residual=res.residual)
        ref = _dense_reference(Hm)
    else:
        cells = (2 ** args.phase_bits) * grid.size
        if cells > STATE_CAP:
            raise CapacityError(f"state vector needs {cells} amplitudes, cap is {STATE_CAP}", size=cells)
        cfg = PhaseEstimationConfig(phase_bits=args.phase_bits, trotter_steps_per_W=args.trotter_steps,
                                    evolution_time=args.evolution_time, mode=args.mode,
                                    seed=args.seed, repetitions=args.repetitions)
        params.update(phase_bits=args.phase_bits, trotter_steps=args.trotter_steps,
                      evolution_time=args.evolution_time, mode=args.mode, repetitions=args.repetitions)
        ledger = QueryLedger()
        res = phase_estimation(Hm, cfg, ledger)
        est, calls, queries, qubits = res.lambda_est, 0, ledger.v_queries, res.qubits
        extras.update(outcome=res.outcome, bin_width=res.bin_width, evolution_time=res.evolution_time,
                      simulator_v_evaluations=Hm.oracle.call_count)
        if args.dump_dist and res.distribution is not None:
            _dump_distribution(args.dump_dist, res.distribution)
        ref = _dense_reference(Hm)
    extras["relative_error"] = _relative(est, ref)
    return dict(command=f"ground-energy {args.method}", params=params, estimate=est, reference=ref,
                oracle_calls=calls, quantum_queries=queries, qubits=qubits, extras=extras)


# --- mean-boolean -------------------------------------------------------------

def _boolean_oracle(args):
    n = args.n
    if n > 20:
        raise CapacityError(f"truth tables are limited to n <= 20, got n={n}", size=2 ** n)
    fn = args.function
    if fn == "parity":
        return BooleanOracle.parity(n)
    if fn == "majority":
        return BooleanOracle.majority(n)
    if fn == "zeros":
        return BooleanOracle.constant(n, 0)
    if fn == "ones":
        return BooleanOracle.constant(n, 1)
    if fn == "quarter":
        return BooleanOracle.from_predicate(n, lambda x: x % 4 == 0)
    if args.table is None:
        raise InputError("--function table needs --table")
    text = args.table
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise InputError(f"cannot read truth table: {exc}") from exc
    bits = [c for c in text if c in "01"]
    return BooleanOracle(n, [int(c) for c in bits])


def run_mean_boolean(args):
    oracle = _boolean_oracle(args)
    M = args.M if args.M is not None else outcome_count_for(args.eps)
    ledger = QueryLedger()
    res = amplitude_estimate_mean(oracle, M, ledger, mode=args.mode, seed=args.seed)
    truth = oracle.mean
    extras = {
        "M": M,
        "classical_lb": boolean_mean_classical_lb(args.n, args.eps),
        "eps": args.eps,
        "outcome": res.outcome,
        "abs_error": abs(res.estimate - truth),
    }
    if res.distribution is not None:
        extras["expected_abs_error"] = res.expected_abs_error(truth)
        if args.dump_dist:
            _dump_distribution(args.dump_dist, res.distribution)
    return dict(command="mean-boolean",
                params={"n": args.n, "function": args.function, "M": M, "mode": args.mode, "eps": args.eps},
                estimate=res.estimate, reference=truth, oracle_calls=0,
                quantum_queries=ledger.f_queries, qubits=args.n + 1 + (M.bit_length() - 1),
                extras=extras)


# --- integrate ----------------------------------------------------------------

_INTEGRANDS_1D = {
    "x": (lambda x: x, 0.5),
    "x2": (lambda x: x ** 2, 1.0 / 3.0),
    "sin": (np.sin, 1.0 - math.cos(1.0)),
}

_INTEGRANDS_ND = {
    "one": (lambda x: np.ones(x.shape[0]), lambda d: 1.0),
    "mean": (lambda x: x.mean(axis=1), lambda d: 0.5),
    "sep-sin": (lambda x: np.sin(x).mean(axis=1), lambda d: 1.0 - math.cos(1.0)),
}


def _integrand_1d(name, n_points):
    if name == "sawtooth":
        return sawtooth_for_midpoints(n_points), 1.0 / (4 * n_points)
    try:
        return _INTEGRANDS_1D[name]
    except KeyError:
        raise InputError(f"unknown 1D integrand {name!r}; choose from x, x2, sin, sawtooth")


def run_integrate(args):
    kind = args.method
    if kind == "product":
        try:
            f, exact = _INTEGRANDS_ND[args.function]
        except KeyError:
            raise InputError(f"unknown integrand {args.function!r}; choose from one, mean, sep-sin")
        res = integrate_classical_product(args.d, f, args.m)
        return dict(command="integrate product", params={"d": args.d, "m": args.m, "function": args.function},
                    estimate=res.estimate, reference=exact(args.d), oracle_calls=res.calls,
                    quantum_queries=0, qubits=0, extras={})
    f, exact = _integrand_1d(args.function, args.n_points)
    if kind == "classical-1d":
        res = integrate_classical_1d(f, args.n_points)
        return dict(command="integrate classical-1d",
                    params={"n_points": args.n_points, "function": args.function},
                    estimate=res.estimate, reference=exact, oracle_calls=res.calls,
                    quantum_queries=0, qubits=0, extras={"abs_error": abs(res.estimate - exact)})
    ledger = QueryLedger()
    res = integrate_quantum_1d(f, args.M, args.n_points, ledger, mode=args.mode, seed=args.seed)
    extras = {"discretized_mean": res.discretized_mean, "discretization_bound": res.discretization_bound,
              "estimation_bound": res.estimation_bound, "abs_error": abs(res.estimate - exact)}
    if res.distribution is not None and args.dump_dist:
        _dump_distribution(args.dump_dist, res.distribution)
    n_index = max(1, math.ceil(math.log2(args.n_points)))
    return dict(command="integrate quantum-1d",
                params={"n_points": args.n_points, "function": args.function, "M": args.M, "mode": args.mode},
                estimate=res.estimate, reference=exact, oracle_calls=0,
                quantum_queries=ledger.f_queries, qubits=n_index + 1 + (args.M.bit_length() - 1),
                extras=extras)


# --- speedup-report -----------------------------------------------------------

def _load_runs(path):
    runs = {}
    if path is None:
        return runs
    try:
        for line in Path(path).read_text().splitlines():
            if line.strip():
                rec = json.loads(line)
                runs[rec["run_id"]] = rec
    except OSError as exc:
        raise RunLookupError(f"cannot read runs file {path}: {exc}") from exc
    return runs


def run_speedup_report(args):
    model = ComplexityModel(d=args.d, eps=args.eps, c=args.c, delta=args.delta)
    classical = quantum = None
    if args.classical_run or args.quantum_run:
        if not (args.classical_run and args.quantum_run):
            raise InputError("empirical S1 needs both --classical-run and --quantum-run")
        runs = _load_runs(args.runs_file)
        for rid in (args.classical_run, args.quantum_run):
            if rid not in runs:
                raise RunLookupError(f"unknown run id {rid!r}")
        c_rec, q_rec = runs[args.classical_run], runs[args.quantum_run]
        classical = CostLedger(oracle_calls=c_rec["oracle_calls"])
        quantum = CostLedger(quantum_queries=q_rec["quantum_queries"], qubits=q_rec["qubits"])
    report = speedup_report(model, classical, quantum)
    return dict(command="speedup-report",
                params={"c": args.c, "delta": args.delta, "d": args.d, "eps": args.eps,
                        "classical_run": args.classical_run, "quantum_run": args.quantum_run},
                estimate=report.s2_upper, reference=None, oracle_calls=0, quantum_queries=0,
                qubits=0, extras={"report": report.to_dict()})


# --- plumbing -----------------------------------------------------------------

def _dump_distribution(path, dist):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["outcome_index", "probability"])
        for i, p in enumerate(dist):
            w.writerow([i, repr(float(p))])


def build_parser():
    p = argparse.ArgumentParser(prog="speeduplab", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_nonneg_int, default=0)
    common.add_argument("--record-file", help="append the JSON record to this file")
    common.add_argument("--dump-dist", help="write the outcome distribution as CSV")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("ground-energy", parents=[common], help="smallest eigenvalue of -kappa Lap + V")
    g.add_argument("method", choices=["classical", "quantum", "trivial", "dense"])
    g.add_argument("--d", type=_positive_int, required=True)
    size = g.add_mutually_exclusive_group()
    size.add_argument("--m", type=_positive_int)
    size.add_argument("--eps", type=_positive_float)
    g.add_argument("--potential", default="zero")
    g.add_argument("--kappa", type=_positive_float, default=1.0)
    g.add_argument("--truncation-bits", type=_positive_int)
    g.add_argument("--shift-margin", type=_positive_float, help="use the analytic shift with this margin")
    g.add_argument("--max-outer", type=_positive_int, default=200)
    g.add_argument("--residual-tol", type=_positive_float)
    g.add_argument("--cg-tol", type=_positive_float, default=1e-10)
    g.add_argument("--start", choices=["laplacian", "random"], default="laplacian")
    g.add_argument("--phase-bits", type=_positive_int, default=8)
    g.add_argument("--trotter-steps", type=_positive_int, default=16)
    g.add_argument("--evolution-time", type=_positive_float)
    g.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    g.add_argument("--repetitions", type=_positive_int, default=1)
    g.set_defaults(func=run_ground_energy)

    b = sub.add_parser("mean-boolean", parents=[common], help="amplitude estimation of a Boolean mean")
    b.add_argument("--n", type=_positive_int, required=True)
    b.add_argument("--function", choices=["parity", "majority", "zeros", "ones", "quarter", "table"],
                   default="parity")
    b.add_argument("--table", help="bitstring, or @path to a file of bits")
    b.add_argument("--M", type=_power_of_two)
    b.add_argument("--eps", type=_unit_float, default=0.05)
    b.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    b.set_defaults(func=run_mean_boolean)

    i = sub.add_parser("integrate", parents=[common], help="integration demonstrations")
    i.add_argument("method", choices=["classical-1d", "product", "quantum-1d"])
    i.add_argument("--function", default=None)
    i.add_argument("--n-points", type=_positive_int, default=256)
    i.add_argument("--d", type=_positive_int, default=2)
    i.add_argument("--m", type=_positive_int, default=10)
    i.add_argument("--M", type=_power_of_two, default=64)
    i.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    i.set_defaults(func=run_integrate)

    s = sub.add_parser("speedup-report", parents=[common], help="S2 bounds and optional empirical S1")
    s.add_argument("--c", type=float, default=2.0)
    s.add_argument("--delta", type=_positive_float, default=0.5)
    s.add_argument("--d", type=_positive_int, required=True)
    s.add_argument("--eps", type=_unit_float, required=True)
    s.add_argument("--runs-file")
    s.add_argument("--classical-run")
    s.add_argument("--quantum-run")
    s.set_defaults(func=run_speedup_report)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cmd == "integrate" and args.function is None:
        args.function = "one" if args.method == "product" else "x"
    t0 = time.perf_counter()
    try:
        fields = args.func(args)
    except SpeedupLabError as exc:
        print(f"speeduplab: error: {exc}", file=sys.stderr)
        return exc.exit_code
    record = RunRecord(run_id=uuid.uuid4().hex, wall_ms=int(1000 * (time.perf_counter() - t0)),
                       seed=args.seed, **fields)
    line = record.to_json()
    print(line)
    if args.record_file:
        with open(args.record_file, "a") as fh:
            fh.write(line + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
