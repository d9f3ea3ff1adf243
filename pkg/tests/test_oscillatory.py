"""Phase reduction, sawtooth approximation, and the oscillatory integral."""

import math

import mpmath
import numpy as np
import pytest

from bdhvar import (ExpWeightParams, ParameterError, build_prime_table,
                    main_term_integral, oscillatory_integral,
                    phase_frac_array, prime_exp_sum, reduced_phase, saw_psi,
                    unit_exp, vaaler_eval, vaaler_expansion)
from bdhvar.errors import ResourceError


def circ_dist(x, y):
    d = abs(x - y) % 1.0
    return min(d, 1.0 - d)


def mp_frac(t, n, c, extra_digits=60):
    mag = abs(t) * float(n) ** c
    with mpmath.workdps(extra_digits + int(math.log10(mag + 10.0))):
        v = mpmath.mpf(t) * mpmath.power(n, c)
        return float(v - mpmath.floor(v))


# ---------------------------------------------------------------------------
# elementary maps
# ---------------------------------------------------------------------------

def test_unit_exp_values():
    assert unit_exp(0.0) == 1.0 + 0j
    assert unit_exp(0.25) == pytest.approx(1j)
    assert unit_exp(17.0) == pytest.approx(1.0)
    assert unit_exp(-0.75) == pytest.approx(unit_exp(0.25))
    arr = unit_exp(np.array([0.0, 0.5, 1.25]))
    assert np.allclose(arr, [1.0, -1.0, 1j])
    assert np.allclose(np.abs(unit_exp(np.linspace(-3, 3, 101))), 1.0)
    with pytest.raises(ParameterError):
        unit_exp(float("inf"))


def test_saw_psi_values():
    assert saw_psi(0.0) == -0.5
    assert saw_psi(5.0) == -0.5
    assert saw_psi(0.75) == 0.25
    assert saw_psi(-2.5) == 0.0
    arr = saw_psi(np.array([0.1, 1.9]))
    assert np.allclose(arr, [-0.4, 0.4])
    with pytest.raises(ParameterError):
        saw_psi(float("nan"))


# ---------------------------------------------------------------------------
# tiered phase reduction vs. an mpmath oracle
# ---------------------------------------------------------------------------

def test_reduced_phase_exact_case():
    # t n^c = 10^6 up to the binary rounding of 1e-3
    f = reduced_phase(1e-3, 1e6, 1.5)
    assert circ_dist(f, 0.0) <= 1e-10


def test_reduced_phase_random_triples_all_tiers():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        t = float(rng.choice([-1, 1])) * 10.0 ** float(rng.uniform(-6, 6))
        n = int(rng.integers(1, 10**6))
        c = float(rng.uniform(1.01, 2.99))
        got = reduced_phase(t, n, c)
        assert 0.0 <= got < 1.0
        assert circ_dist(got, mp_frac(t, n, c)) <= 1e-10, (t, n, c)


def test_reduced_phase_tier_boundaries():
    # magnitudes straddling the float64 / long-double / mpmath switchovers
    cases = [(1e-3, 100, 1.5), (1.0, 10**4, 1.5), (1e3, 10**6, 1.5),
             (1e8, 10**6, 2.5)]
    for t, n, c in cases:
        assert circ_dist(reduced_phase(t, n, c), mp_frac(t, n, c)) <= 1e-10


def test_phase_frac_array_matches_scalar():
    rng = np.random.default_rng(5)
    ns = rng.integers(1, 10**6, size=200)
    for t, c in [(3e-4, 1.5), (2.0, 1.2), (1e4, 2.5)]:
        arr = phase_frac_array(t, ns, c)
        for i, n in enumerate(ns.tolist()):
            assert circ_dist(arr[i], reduced_phase(t, n, c)) <= 1e-10


def test_reduced_phase_validation_and_budget():
    with pytest.raises(ParameterError):
        reduced_phase(1.0, 0, 1.5)
    with pytest.raises(ParameterError):
        reduced_phase(float("inf"), 3, 1.5)
    with pytest.raises(ResourceError):
        reduced_phase(1e50, 1e6, 2.5)


# ---------------------------------------------------------------------------
# sawtooth approximation
# ---------------------------------------------------------------------------

def test_vaaler_h1_frozen_coefficients():
    exp = vaaler_expansion(1)
    assert exp.b.tolist() == [0.25, 0.125]
    assert exp.a[0] == pytest.approx(1j / (4 * np.pi))
    approx, major = vaaler_eval(0.0, exp)
    assert approx == pytest.approx(0.0, abs=1e-15)
    assert major == pytest.approx(0.5)


def test_vaaler_coefficient_invariants():
    for H in (1, 5, 20, 100):
        exp = vaaler_expansion(H)
        # symmetric b-sum telescopes to exactly 1/2
        total = exp.b[0] + 2.0 * math.fsum(exp.b[1:])
        assert total == pytest.approx(0.5, abs=1e-14)
        assert np.all(exp.b >= 0)
        assert np.all(exp.b * (H + 1) <= 1.0 + 1e-12)
        h = np.arange(1, H + 1)
        assert np.all(np.abs(exp.a) * h <= 1.0 + 1e-12)


def test_vaaler_error_majorised():
    xs = np.sort(np.concatenate([np.linspace(-2.0, 3.0, 4001),
                                 np.arange(-2.0, 4.0)]))
    for H in (1, 5):
        exp = vaaler_expansion(H)
        approx, major = vaaler_eval(xs, exp)
        assert np.all(major >= -1e-12)
        assert np.all(np.abs(saw_psi(xs) - approx) <= major + 1e-12)
        # the majorant peaks at integers, where it must still be <= 1/2ish
        assert np.max(major) == pytest.approx(0.5, abs=1e-9)


def test_vaaler_eval_scalar_array_agree():
    exp = vaaler_expansion(7)
    xs = np.linspace(0.0, 1.0, 11)
    a_arr, m_arr = vaaler_eval(xs, exp)
    for i, x in enumerate(xs.tolist()):
        a_s, m_s = vaaler_eval(x, exp)
        assert a_s == pytest.approx(a_arr[i], abs=1e-14)
        assert m_s == pytest.approx(m_arr[i], abs=1e-14)


def test_vaaler_degree_validation():
    for bad in (0, -3, 2.0, "5"):
        with pytest.raises(ParameterError):
            vaaler_expansion(bad)


# ---------------------------------------------------------------------------
# oscillatory integral
# ---------------------------------------------------------------------------

def test_integral_zero_frequency_exact():
    assert oscillatory_integral(3.0, 10.0, 0.0, 1.5) == 7.0 + 0j
    p = ExpWeightParams(X=1000.0, mu=0.25, c=1.5, t=0.0)
    assert main_term_integral(p) == 750.0 + 0j


def test_integral_against_mpmath():
    t, c, a, b = 1e-3, 1.5, 500.0, 1000.0
    got = oscillatory_integral(a, b, t, c)
    with mpmath.workdps(30):
        f = lambda y: mpmath.e ** (2j * mpmath.pi * t * y ** c)
        want = mpmath.quad(f, np.linspace(a, b, 80).tolist())
        want = complex(want)
    assert abs(got - want) <= 1e-9 * (b - a)


def test_integral_additivity():
    t, c = 7e-4, 1.3
    a, m, b = 100.0, 617.0, 1500.0
    whole = oscillatory_integral(a, b, t, c)
    parts = oscillatory_integral(a, m, t, c) + oscillatory_integral(m, b, t, c)
    assert abs(whole - parts) <= 1e-9 * (b - a)


def test_integral_small_t_near_length():
    # t -> 0 limit: the integral approaches b - a
    a, b = 10.0, 20.0
    got = oscillatory_integral(a, b, 1e-9, 1.5)
    assert abs(got - (b - a)) <= 2 * np.pi * 1e-9 * (20.0 ** 1.5) * (b - a)


def test_integral_validation():
    with pytest.raises(ParameterError):
        oscillatory_integral(-1.0, 5.0, 1.0, 1.5)
    with pytest.raises(ParameterError):
        oscillatory_integral(5.0, 4.0, 1.0, 1.5)
    with pytest.raises(ResourceError):
        oscillatory_integral(10.0, 2000.0, 1.0, 2.9)


def test_params_validation():
    with pytest.raises(ParameterError):
        ExpWeightParams(X=1.0, mu=0.5, c=1.5, t=0.0)
    with pytest.raises(ParameterError):
        ExpWeightParams(X=100.0, mu=0.0, c=1.5, t=0.0)
    with pytest.raises(ParameterError):
        ExpWeightParams(X=100.0, mu=0.5, c=2.0, t=0.0)
    with pytest.raises(ParameterError):
        ExpWeightParams(X=100.0, mu=0.5, c=3.0, t=0.0)
    with pytest.raises(ParameterError):
        ExpWeightParams(X=100.0, mu=0.5, c=1.5, t=float("nan"))


# ---------------------------------------------------------------------------
# prime exponential sum
# ---------------------------------------------------------------------------

def test_prime_exp_sum_zero_frequency_is_theta_difference():
    table = build_prime_table(10**4)
    p = ExpWeightParams(X=10**4, mu=0.5, c=1.5, t=0.0)
    got = prime_exp_sum(p, table.primes)
    ps = table.primes[(table.primes > 5000) & (table.primes <= 10**4)]
    assert got.imag == 0.0
    assert got.real == pytest.approx(math.fsum(np.log(ps)), rel=1e-14)


def test_prime_exp_sum_matches_elementwise_route():
    table = build_prime_table(2000)
    p = ExpWeightParams(X=2000.0, mu=0.25, c=1.5, t=3e-4)
    got = prime_exp_sum(p, table.primes)
    acc = 0j
    for q in table.primes.tolist():
        if 500 < q <= 2000:
            acc += math.log(q) * unit_exp(reduced_phase(p.t, q, p.c))
    assert abs(got - acc) <= 1e-9


def test_prime_exp_sum_empty_window():
    table = build_prime_table(100)
    p = ExpWeightParams(X=4.0, mu=0.8, c=1.5, t=0.1)
    assert prime_exp_sum(p, table.primes) == 0j
