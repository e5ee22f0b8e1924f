import math

import numpy as np
import pytest

from speeduplab.errors import InputError
from speeduplab.qsim import (
    BooleanOracle,
    QueryLedger,
    amplitude_estimate_mean,
    good_probability,
    grover_iterate,
    outcome_count_for,
    prepared_state,
)


def dense_oracle_matrix(oracle):
    n = oracle.n
    U = np.zeros((2 ** (n + 1),) * 2)
    for x in range(2 ** n):
        for y in range(2):
            U[2 * x + (y ^ oracle.table[x]), 2 * x + y] = 1
    return U


def test_constant_oracles_do_not_move():
    for value in (0, 1):
        o = BooleanOracle.constant(3, value)
        psi = prepared_state(o)
        out = grover_iterate(psi, o)
        assert good_probability(out, o) == pytest.approx(value, abs=1e-14)


def test_grover_iterate_matches_dense_matrix():
    o = BooleanOracle.parity(2)
    psi = prepared_state(o)
    R = 2 * np.outer(psi, psi.conj()) - np.eye(8)
    Q = R @ dense_oracle_matrix(o)
    ledger = QueryLedger()
    np.testing.assert_allclose(grover_iterate(psi, o, ledger), Q @ psi, atol=1e-14)
    assert ledger.f_queries == 1


@pytest.mark.parametrize("n,good", [(2, [1]), (3, [0]), (3, [1, 4, 6])])
def test_grover_angle_advances_by_two_theta(n, good):
    o = BooleanOracle.from_predicate(n, lambda x: x in good)
    theta = math.asin(math.sqrt(o.mean))
    state = prepared_state(o)
    for k in range(1, 4):
        state = grover_iterate(state, o)
        assert good_probability(state, o) == pytest.approx(math.sin((2 * k + 1) * theta) ** 2, abs=1e-12)


def test_zero_function_estimate():
    res = amplitude_estimate_mean(BooleanOracle.constant(4, 0), 32)
    assert res.estimate == 0.0
    assert res.distribution[0] == pytest.approx(1.0, abs=1e-12)


def test_one_function_estimate():
    res = amplitude_estimate_mean(BooleanOracle.constant(4, 1), 32)
    assert res.estimate == pytest.approx(1.0, abs=1e-15)


def test_exact_grid_amplitude():
    a = math.sin(3 * math.pi / 16) ** 2
    o = BooleanOracle(1, [0, 1])
    res = amplitude_estimate_mean(o, 16, weights=[1 - a, a])
    assert res.distribution[[3, 13]].sum() == pytest.approx(1.0, abs=1e-12)
    assert res.estimate == pytest.approx(a, abs=1e-14)


def test_parity_bounds():
    o = BooleanOracle.parity(2)
    r8 = amplitude_estimate_mean(o, 8)
    worst = math.sin(math.pi * 3 / 8) ** 2 - 0.5
    assert abs(r8.estimate - 0.5) <= worst
    r64 = amplitude_estimate_mean(o, 64)
    near = np.abs(r64.outcome_values() - 0.5) <= 0.0245
    assert r64.distribution[near].sum() >= 8 / math.pi ** 2


def brute_force_ae(oracle, M):
    psi = prepared_state(oracle)
    D = psi.size
    Q = (2 * np.outer(psi, psi.conj()) - np.eye(D)) @ dense_oracle_matrix(oracle)
    rows = np.array([np.linalg.matrix_power(Q, k) @ psi for k in range(M)]) / math.sqrt(M)
    F = np.exp(2j * np.pi * np.outer(np.arange(M), np.arange(M)) / M) / math.sqrt(M)
    return np.sum(np.abs(F @ rows) ** 2, axis=1)


@pytest.mark.parametrize("n,M", [(2, 8), (3, 16), (4, 32)])
def test_ladder_matches_brute_force(n, M):
    o = BooleanOracle.from_predicate(n, lambda x: x % 3 == 0)
    res = amplitude_estimate_mean(o, M)
    np.testing.assert_allclose(res.distribution, brute_force_ae(o, M), atol=1e-12)


@pytest.mark.parametrize("M", [2, 8, 64, 256])
def test_query_count(M):
    o = BooleanOracle.majority(5)
    ledger = QueryLedger()
    res = amplitude_estimate_mean(o, M, ledger)
    assert ledger.f_queries == res.f_queries == M - 1
    assert o.calls == M - 1


def test_sampled_mode_reproducible():
    o = BooleanOracle.majority(4)
    a = amplitude_estimate_mean(o, 32, mode="sampled", seed=3)
    b = amplitude_estimate_mean(o, 32, mode="sampled", seed=3)
    assert a.outcome == b.outcome and a.distribution is None


def test_error_shrinks_like_one_over_M():
    # a = 1/4: theta/pi = 1/6 never lands on an outcome bin
    o = BooleanOracle.from_predicate(6, lambda x: x % 4 == 0)
    Ms = [8, 16, 32, 64, 128, 256]
    errs = [amplitude_estimate_mean(o, M).expected_abs_error(o.mean) for M in Ms]
    slope = np.polyfit(np.log(Ms), np.log(errs), 1)[0]
    assert -1.25 <= slope <= -0.75


def test_outcome_count_for():
    assert outcome_count_for(0.05) == 64
    assert outcome_count_for(0.5) == 8


@pytest.mark.parametrize("bad", [
    dict(n=2, table=[0, 1, 1]), dict(n=2, table=[0, 1, 2, 0]), dict(n=0, table=[1]),
])
def test_bad_tables(bad):
    with pytest.raises(InputError):
        BooleanOracle(**bad)


def test_bad_outcome_count():
    with pytest.raises(InputError):
        amplitude_estimate_mean(BooleanOracle.parity(2), 12)
