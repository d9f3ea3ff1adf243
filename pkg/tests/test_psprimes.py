"""Floor-of-k^(1/gamma) index sets: two library routes vs. exact oracles."""

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from bdhvar import (ParameterError, enumerate_ps, ps_array, ps_config,
                    ps_count_main_term, ps_indicator, ps_indicator_array)


def int_root(m, k):
    """Largest r with r**k <= m, exact integer arithmetic."""
    if m < 0 or k < 1:
        raise ValueError
    if m == 0:
        return 0
    r = 1 << ((m.bit_length() + k - 1) // k)  # upper bound on the root
    while True:
        nr = ((k - 1) * r + m // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > m:
        r -= 1
    while (r + 1) ** k <= m:
        r += 1
    return r


def oracle_members_rational(lo, hi, gamma):
    """Exact big-integer generator for gamma = u/v: n = [k^(v/u)]."""
    u, v = gamma.numerator, gamma.denominator
    out = set()
    k = 1
    while True:
        n = int_root(k ** v, u)
        if n > hi:
            break
        if n >= lo:
            out.add(n)
        k += 1
    return sorted(out)


def oracle_members_float(lo, hi, gamma):
    """High-precision membership via the ceil-difference form."""
    out = []
    with mpmath.workdps(80):
        g = mpmath.mpf(gamma)
        for n in range(lo, hi + 1):
            lo_pow = mpmath.power(n, g)
            hi_pow = mpmath.power(n + 1, g)
            for y in (lo_pow, hi_pow):
                # oracle only trusts comfortably non-integer powers
                assert abs(y - mpmath.nint(y)) > mpmath.mpf('1e-60') or y == mpmath.nint(y)
            if mpmath.ceil(hi_pow) - mpmath.ceil(lo_pow) == 1:
                out.append(n)
    return out


RATIONAL_GAMMAS = [Fraction(1, 2), Fraction(3, 4), Fraction(43, 50),
                   Fraction(9, 10), Fraction(2426, 2817)]


@pytest.mark.parametrize("gamma", RATIONAL_GAMMAS, ids=str)
def test_both_routes_match_exact_oracle(gamma):
    cfg = ps_config(gamma)
    lo, hi = 1, 2000
    expect = oracle_members_rational(lo, hi, gamma)
    assert ps_array(lo, hi, cfg).tolist() == expect
    mask = ps_indicator_array(lo, hi, cfg)
    assert np.flatnonzero(mask).tolist() == [n - lo for n in expect]


def test_unsnapped_float_gamma_matches_mpmath_oracle():
    gamma = 0.837  # no small-denominator rational nearby: float path
    cfg = ps_config(gamma)
    assert cfg.gamma_exact is None
    expect = oracle_members_float(1, 1500, gamma)
    assert ps_array(1, 1500, cfg).tolist() == expect
    mask = ps_indicator_array(1, 1500, cfg)
    assert np.flatnonzero(mask).tolist() == [n - 1 for n in expect]


def test_square_set_frozen():
    cfg = ps_config(Fraction(1, 2))
    assert ps_array(1, 10, cfg).tolist() == [1, 4, 9]
    assert ps_indicator(3, cfg) == 0
    assert ps_indicator(4, cfg) == 1
    assert ps_indicator(9, cfg) == 1
    assert list(enumerate_ps(1, 30, cfg)) == [1, 4, 9, 16, 25]


def test_indicator_agrees_pointwise_with_array_route():
    cfg = ps_config(Fraction(9, 10))
    mask = ps_indicator_array(1, 500, cfg)
    for n in range(1, 501):
        assert ps_indicator(n, cfg) == int(mask[n - 1])


def test_member_count_tracks_power_law():
    # members <= X correspond to k < (X+1)^gamma, so the count is within
    # one unit of (X+1)^gamma - 1
    for gamma in (Fraction(1, 2), Fraction(9, 10), 0.837):
        cfg = ps_config(gamma)
        for X in (10, 1000, 50000):
            count = len(ps_array(1, X, cfg))
            y = float(X + 1) ** cfg.gamma - 1.0
            assert -1e-6 <= count - y < 1 + 1e-6, (gamma, X)


def test_gamma_parsing_and_snapping():
    assert ps_config("9/10").gamma_exact == Fraction(9, 10)
    assert ps_config(0.86).gamma_exact == Fraction(43, 50)
    assert ps_config(0.9).gamma_exact == Fraction(9, 10)
    assert ps_config(Fraction(2426, 2817)).gamma_exact == Fraction(2426, 2817)
    assert ps_config(0.837).gamma_exact is None


def test_gamma_validation():
    for bad in ("5/4", 1.0, 0.0, -0.3, float("nan"), "abc"):
        with pytest.raises(ParameterError):
            ps_config(bad)
    with pytest.raises(ParameterError):
        ps_config(0.5, guard_epsilon=0.0)


def test_range_validation():
    cfg = ps_config(0.5)
    with pytest.raises(ParameterError):
        ps_array(0, 10, cfg)
    with pytest.raises(ParameterError):
        ps_array(5, 4, cfg)
    with pytest.raises(ParameterError):
        ps_indicator(0, cfg)


def test_count_main_term():
    cfg = ps_config(Fraction(9, 10))
    assert ps_count_main_term(math.e, cfg) == pytest.approx(math.e ** 0.9)
    assert ps_count_main_term(1e5, cfg) == pytest.approx(
        1e5 ** 0.9 / math.log(1e5))
    for bad in (1.0, 0.5, -3.0):
        with pytest.raises(ParameterError):
            ps_count_main_term(bad, cfg)
