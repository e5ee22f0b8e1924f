import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from speeduplab.eigensolver import inverse_iterate
from speeduplab.errors import CapacityError, InputError
from speeduplab.qsim import PhaseEstimationConfig, QueryLedger, phase_estimation
from speeduplab.speedup import (
    ComplexityModel,
    CostLedger,
    CountingFunction,
    RegimeWarning,
    boolean_mean_classical_lb,
    classical_lb,
    integrate_classical_1d,
    integrate_classical_product,
    integrate_quantum_1d,
    log_classical_lb,
    log_quantum_bounds,
    log_s2_range,
    quantum_bounds,
    s1_empirical,
    s2_range,
    sawtooth_for_midpoints,
    speedup_report,
)

from conftest import make_hamiltonian

ONE_MINUS_COS1 = 0.459697694131860282599063392557


def test_classical_lb_examples():
    assert classical_lb(ComplexityModel(2, 0.05)) == pytest.approx(25.0, rel=1e-12)
    assert classical_lb(ComplexityModel(10, 0.01)) == pytest.approx(9765625.0, rel=1e-12)


def test_classical_lb_grows_with_d():
    vals = [classical_lb(ComplexityModel(d, 0.001)) for d in range(1, 30)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_classical_lb_regime_warning():
    with pytest.warns(RegimeWarning):
        classical_lb(ComplexityModel(5, 0.2))


def test_quantum_bounds_examples():
    lo, up = quantum_bounds(ComplexityModel(2, 0.05, delta=0.5))
    assert lo == pytest.approx(math.sqrt(10), rel=1e-12)
    assert up == pytest.approx(71554.1752799932563829022992147, rel=1e-12)
    assert quantum_bounds(ComplexityModel(1, 0.5))[0] == pytest.approx(math.sqrt(2), rel=1e-14)


def test_quantum_lower_scales_with_root_two():
    a = quantum_bounds(ComplexityModel(3, 0.02))[0]
    b = quantum_bounds(ComplexityModel(3, 0.01))[0]
    assert b / a == pytest.approx(math.sqrt(2), rel=1e-13)


def test_unit_case_lower_bound():
    # eps = 1 is outside the model's open interval; check the formula directly
    assert math.exp(-0.5 * math.log(1 * 1.0)) == 1.0


def test_s2_worked_example():
    lo, up = s2_range(ComplexityModel(2, 0.05, c=2, delta=0.5))
    assert up == pytest.approx(25 / math.sqrt(10), rel=1e-12)
    assert lo == pytest.approx(25 / 71554.1752799932563829022992147, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 50), st.floats(1e-12, 0.999), st.floats(1.0001, 10), st.floats(1e-3, 5))
def test_s2_order_and_log_totality(d, eps, c, delta):
    model = ComplexityModel(d, eps, c, delta)
    lo, up = log_s2_range(model)
    assert math.isfinite(lo) and math.isfinite(up) and math.isfinite(log_classical_lb(model))
    assert all(math.isfinite(v) for v in log_quantum_bounds(model))
    assert lo <= up
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        a, b = s2_range(model)
    assert a <= b


def test_s2_upper_exponential_in_d():
    # fixed c * eps = 0.002; each unit of d multiplies S2 by at least 1 / (e c eps (d+1))
    c, eps = 2.0, 0.001
    ds = np.arange(2, 13)
    logs = np.array([log_s2_range(ComplexityModel(int(d), eps, c=c))[1] for d in ds])
    incs = np.diff(logs)
    floor = -np.log(c * eps * (ds[1:])) - 1
    assert np.all(incs >= floor)
    assert np.all(floor > 2.0)


@pytest.mark.parametrize("kw", [dict(c=1.0), dict(delta=0.0), dict(eps=1.0), dict(eps=0.0), dict(d=0)])
def test_model_validation(kw):
    args = dict(d=2, eps=0.05)
    args.update(kw)
    with pytest.raises(InputError):
        ComplexityModel(**args)


def test_report_flags():
    rep = speedup_report(ComplexityModel(20, 0.06))
    assert not rep.regime_ok
    assert any("1/d" in n for n in rep.notes)
    assert speedup_report(ComplexityModel(2, 0.05)).regime_ok


def test_report_dict_schema():
    d = speedup_report(ComplexityModel(2, 0.05)).to_dict()
    for key in ("model", "classical_lb", "quantum_lb", "quantum_ub", "s2_lower", "s2_upper", "regime_ok", "ledgers"):
        assert key in d
    assert d["model"] == {"c": 2.0, "delta": 0.5, "d": 2, "eps": 0.05}


def test_s1_examples():
    assert s1_empirical(1000, 10) == 100
    assert s1_empirical(7, 7) == 1
    with pytest.raises(InputError):
        s1_empirical(10, 0)


def test_s1_from_ground_state_runs():
    Hc = make_hamiltonian("sep-sin", 2, 15)
    res = inverse_iterate(Hc)
    Hq = make_hamiltonian("sep-sin", 2, 15)
    ledger = QueryLedger()
    phase_estimation(Hq, PhaseEstimationConfig(phase_bits=4, trotter_steps_per_W=2), ledger)
    classical = CostLedger(oracle_calls=res.oracle_calls)
    quantum = CostLedger(quantum_queries=ledger.v_queries)
    assert res.oracle_calls == 225
    assert ledger.v_queries == 15 * 2
    assert s1_empirical(classical, quantum) == pytest.approx(225 / 30, rel=1e-15)


def test_s1_arithmetic_optional():
    c = CostLedger(oracle_calls=100, arithmetic_ops=900)
    q = CostLedger(quantum_queries=10, arithmetic_ops=40)
    assert s1_empirical(c, q) == 10
    assert s1_empirical(c, q, include_arithmetic=True) == 20


@pytest.mark.parametrize("n,eps,expected", [(10, 0.25, 384.0), (1, 0.5, 0.5), (6, 1e-12, 32.0)])
def test_boolean_classical_lb(n, eps, expected):
    assert boolean_mean_classical_lb(n, eps) == pytest.approx(expected, rel=1e-11)


@pytest.mark.parametrize("n", [1, 3, 16, 101])
def test_midpoint_exact_on_linear(n):
    res = integrate_classical_1d(lambda x: x, n)
    assert res.estimate == pytest.approx(0.5, abs=1e-15)
    assert res.calls == n


def test_midpoint_sin():
    res = integrate_classical_1d(np.sin, 16)
    assert abs(res.estimate - ONE_MINUS_COS1) <= 1 / (24 * 16 ** 2)


def test_sawtooth_worst_case():
    ns = [4, 8, 16, 32, 64, 128]
    errs = []
    for n in ns:
        f = sawtooth_for_midpoints(n)
        exact = 1 / (4 * n)
        res = integrate_classical_1d(f, n)
        assert res.estimate == pytest.approx(0.0, abs=1e-15)
        errs.append(abs(res.estimate - exact))
        # slope bounded by one
        x = np.linspace(0, 1, 2001)
        assert np.max(np.abs(np.diff(f(x)) / np.diff(x))) <= 1 + 1e-9
    slope = np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert -1.3 <= slope <= -0.7


def test_product_rule_counts():
    f = CountingFunction(lambda x: np.ones(x.shape[0]))
    res = integrate_classical_product(3, f, 10)
    assert res.calls == 1000 and f.calls == 1000
    assert res.estimate == 1.0


def test_product_rule_linear_exact():
    res = integrate_classical_product(2, lambda x: x.mean(axis=1), 7)
    assert res.estimate == pytest.approx(0.5, abs=1e-15)


def test_product_rule_chunks_consistently():
    f = lambda x: np.sin(x).prod(axis=1)
    a = integrate_classical_product(3, f, 9, chunk=50)
    b = integrate_classical_product(3, f, 9)
    assert a.estimate == pytest.approx(b.estimate, rel=1e-13)
    assert a.estimate == pytest.approx(ONE_MINUS_COS1 ** 3, rel=1e-2)


def test_product_rule_cap():
    with pytest.raises(CapacityError):
        integrate_classical_product(5, lambda x: x[:, 0], 40, cap=10 ** 6)


def test_empirical_curse_slope():
    m = 4
    ds = [1, 2, 3, 4, 5]
    calls = [integrate_classical_product(d, lambda x: x[:, 0], m).calls for d in ds]
    slope = np.polyfit(ds, np.log(calls), 1)[0]
    assert slope == pytest.approx(math.log(m), rel=1e-12)


def test_quantum_integration_constants():
    ledger = QueryLedger()
    z = integrate_quantum_1d(lambda x: np.zeros_like(x), 16, 32, ledger)
    o = integrate_quantum_1d(lambda x: np.ones_like(x), 16, 32, ledger)
    assert z.estimate == 0.0
    assert o.estimate == pytest.approx(1.0, abs=1e-15)
    assert ledger.f_queries == 30


def test_quantum_integration_linear_is_exact():
    # midpoint samples of x average to exactly 1/2, which sits on an outcome bin
    for M in (8, 64, 256):
        res = integrate_quantum_1d(lambda x: x, M, 256)
        assert res.expected_abs_error(0.5) <= 1e-12


def test_quantum_integration_error_law():
    Ms = [8, 16, 32, 64, 128, 256, 512]
    errs = []
    for M in Ms:
        res = integrate_quantum_1d(lambda x: x ** 2, M, 256)
        assert res.f_queries == M - 1
        errs.append(res.expected_abs_error(res.discretized_mean))
    slope = np.polyfit(np.log(Ms), np.log(errs), 1)[0]
    assert -1.25 <= slope <= -0.75


def test_quantum_integration_rejects_unscaled():
    with pytest.raises(InputError):
        integrate_quantum_1d(lambda x: 2 * x, 8, 16)
