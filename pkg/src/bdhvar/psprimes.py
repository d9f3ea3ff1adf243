"""Membership and counting for Piatetski-Shapiro index sets.

For 0 < gamma < 1 the index set is { [k^(1/gamma)] : k = 1, 2, ... }.
Membership of a single n is decided by the floor identity

    [-n^gamma] - [-(n+1)^gamma]  =  #{ integers k in [n^gamma, (n+1)^gamma) },

which is 1 exactly when n = [k^(1/gamma)] for some integer k (floors are
mathematical: [-2.5] = -3).  Enumeration over a range iterates k directly,
which touches only O(X^gamma) values.

Float boundary decisions are guarded: whenever a power sits within
guard_epsilon (widened by the a-priori float64 error bound) of an integer,
the decision escalates either to exact big-integer comparisons (rational
gamma = u/v: integer k lies in [n^(u/v), (n+1)^(u/v)) iff k^v in [n^u-ish
ranges, decided via integer v-th roots) or to mpmath at
high_precision_digits.  No floating-point logs decide a boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import ParameterError, ResourceError

# Rational thresholds that recur as gamma values in the scaling experiments.
GAMMA_THRESHOLDS = (Fraction(11, 12), Fraction(2426, 2817), Fraction(205, 243))

_F64_EPS = float(np.finfo(np.float64).eps)
_SNAP_DENOMINATOR = 64
_SNAP_TOL = 1e-15


@dataclass(frozen=True)
class PSConfig:
    """Exponent gamma plus the boundary-escalation policy.

    Attributes:
        gamma: float value of the exponent, 0 < gamma < 1.
        gamma_exact: exact Fraction when gamma is rational, else None.
        guard_epsilon: float distance to integrality below which decisions
            escalate to exact/high-precision arithmetic.
        high_precision_digits: mpmath working digits for irrational gamma.
    """

    gamma: float
    gamma_exact: Fraction | None
    guard_epsilon: float = 1e-9
    high_precision_digits: int = 50


def ps_config(gamma, guard_epsilon: float = 1e-9,
              high_precision_digits: int = 50) -> PSConfig:
    """Build a PSConfig from a float, Fraction, or 'u/v' string.

    Floats within 1e-15 of a rational with denominator <= 64 are snapped to
    that rational so the exact path applies to the common grid values
    (1/2, 3/4, 43/50, 9/10, 19/20, ...).
    """
    exact: Fraction | None = None
    if isinstance(gamma, str):
        try:
            exact = Fraction(gamma)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"cannot parse gamma {gamma!r}") from exc
    elif isinstance(gamma, Fraction):
        exact = gamma
    elif isinstance(gamma, int):
        exact = Fraction(gamma)
    else:
        g = float(gamma)
        if not math.isfinite(g):
            raise ParameterError(f"gamma must be finite, got {gamma}")
        cand = Fraction(g).limit_denominator(_SNAP_DENOMINATOR)
        if abs(g - float(cand)) <= _SNAP_TOL:
            exact = cand
    value = float(exact) if exact is not None else float(gamma)
    if not 0.0 < value < 1.0:
        raise ParameterError(
            f"gamma must lie strictly inside (0, 1), got {gamma}")
    if guard_epsilon <= 0:
        raise ParameterError("guard_epsilon must be positive")
    return PSConfig(gamma=value, gamma_exact=exact,
                    guard_epsilon=guard_epsilon,
                    high_precision_digits=high_precision_digits)


def _iroot(m: int, k: int) -> tuple[int, bool]:
    """Floor integer k-th root of m >= 0, plus exactness flag.

    Pure integer Newton iteration; no floating point in the decision.
    """
    if m < 0:
        raise ParameterError("negative radicand")
    if m in (0, 1) or k == 1:
        return m, True
    x = 1 << -(-m.bit_length() // k)  # >= true root
    while True:
        y = ((k - 1) * x + m // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > m:
        x -= 1
    while (x + 1) ** k <= m:
        x += 1
    return x, x ** k == m


def _ceil_pow_exact(n: int, frac: Fraction) -> int:
    """ceil(n^(u/v)) by integer arithmetic (frac = u/v in lowest terms)."""
    u, v = frac.numerator, frac.denominator
    r, exact = _iroot(n**u, v)
    return r if exact else r + 1


def _floor_pow_exact(n: int, frac: Fraction) -> int:
    """floor(n^(u/v)) by integer arithmetic."""
    u, v = frac.numerator, frac.denominator
    r, _ = _iroot(n**u, v)
    return r


def _guard(x: float, cfg: PSConfig, cond: float) -> float:
    """Effective escalation band: configured epsilon or the float error bound,
    whichever is larger (cond ~ |d(x^gamma)| per ulp, i.e. x*log-ish)."""
    return max(cfg.guard_epsilon, 8.0 * _F64_EPS * cond)


def _ceil_pow(n: int, cfg: PSConfig) -> int:
    """ceil(n^gamma) with guarded escalation."""
    if n == 1:
        return 1  # 1^gamma is exactly 1 for every gamma
    x = float(n) ** cfg.gamma
    band = _guard(x, cfg, x * (1.0 + math.log(max(n, 2))))
    nearest = round(x)
    if abs(x - nearest) <= band:
        if cfg.gamma_exact is not None:
            return _ceil_pow_exact(n, cfg.gamma_exact)
        return _ceil_pow_mp(n, cfg)
    return math.ceil(x)


def _ceil_pow_mp(n: int, cfg: PSConfig) -> int:
    with mpmath.workdps(cfg.high_precision_digits):
        x = mpmath.power(n, cfg.gamma)
        nearest = mpmath.nint(x)
        if abs(x - nearest) < mpmath.mpf(10) ** (-(cfg.high_precision_digits - 10)):
            raise ResourceError(
                f"{n}^{cfg.gamma} indistinguishable from an integer at "
                f"{cfg.high_precision_digits} digits")
        return int(mpmath.ceil(x))


def ps_indicator(n: int, cfg: PSConfig) -> int:
    """1 if n belongs to the index set for cfg.gamma, else 0.

    Evaluates [-n^gamma] - [-(n+1)^gamma] (equivalently
    ceil((n+1)^gamma) - ceil(n^gamma)).
    """
    if n < 1:
        raise ParameterError(f"ps_indicator needs n >= 1, got {n}")
    hit = _ceil_pow(n + 1, cfg) - _ceil_pow(n, cfg)
    if hit not in (0, 1):
        raise AssertionError(f"indicator out of range at n={n}: {hit}")
    return hit


def _floor_root_scalar(k: int, cfg: PSConfig) -> int:
    """[k^(1/gamma)] with guarded escalation."""
    if k == 1:
        return 1  # 1^(1/gamma) is exactly 1 for every gamma
    inv = 1.0 / cfg.gamma
    x = float(k) ** inv
    band = _guard(x, cfg, x * (1.0 + inv * math.log(max(k, 2))))
    nearest = round(x)
    if abs(x - nearest) <= band:
        if cfg.gamma_exact is not None:
            return _floor_pow_exact(k, 1 / cfg.gamma_exact)
        with mpmath.workdps(cfg.high_precision_digits):
            y = mpmath.power(k, 1.0 / cfg.gamma)
            if abs(y - mpmath.nint(y)) < mpmath.mpf(10) ** (
                    -(cfg.high_precision_digits - 10)):
                raise ResourceError(
                    f"{k}^(1/{cfg.gamma}) indistinguishable from an integer")
            return int(mpmath.floor(y))
    return math.floor(x)


def ps_array(lo: int, hi: int, cfg: PSConfig) -> np.ndarray:
    """All PS indices in [lo, hi], ascending, as an int64 array.

    Generator route: walks k and emits [k^(1/gamma)].  The bulk is done in
    vectorised float64; only k whose root lands inside the guard band are
    re-decided by the scalar escalation path.
    """
    if lo < 1 or hi < lo:
        raise ParameterError(f"bad PS range [{lo}, {hi}]")
    inv = 1.0 / cfg.gamma
    # n >= lo needs k >= lo^gamma; pad both ends to absorb float slop.
    k_lo = max(1, math.floor(float(lo) ** cfg.gamma) - 2)
    k_hi = math.ceil(float(hi + 1) ** cfg.gamma) + 2
    ks = np.arange(k_lo, k_hi + 1, dtype=np.int64)
    roots = ks.astype(np.float64) ** inv
    floors = np.floor(roots).astype(np.int64)
    frac = roots - floors
    cond = roots * (1.0 + inv * np.log(np.maximum(ks, 2)))
    band = np.maximum(cfg.guard_epsilon, 8.0 * _F64_EPS * cond)
    risky = np.flatnonzero((frac <= band) | (frac >= 1.0 - band))
    for i in risky.tolist():
        floors[i] = _floor_root_scalar(int(ks[i]), cfg)
    keep = (floors >= lo) & (floors <= hi)
    out = floors[keep]
    if out.size > 1 and np.any(np.diff(out) <= 0):
        out = np.unique(out)  # k^(1/gamma) has gaps > 1, so this is a no-op
    return out


def enumerate_ps(lo: int, hi: int, cfg: PSConfig):
    """Iterator over the PS indices in [lo, hi], ascending."""
    for n in ps_array(lo, hi, cfg).tolist():
        yield int(n)


def ps_indicator_array(lo: int, hi: int, cfg: PSConfig) -> np.ndarray:
    """Boolean membership mask for lo..hi (index i <-> n = lo + i).

    Independent of ps_array: evaluates the ceil-difference identity
    vectorised, with guarded scalar escalation.  Used as the cross-check
    route against the k-generator.
    """
    if lo < 1 or hi < lo:
        raise ParameterError(f"bad PS range [{lo}, {hi}]")
    ns = np.arange(lo, hi + 2, dtype=np.int64)  # need n and n+1
    pows = ns.astype(np.float64) ** cfg.gamma
    ceils = np.ceil(pows).astype(np.int64)
    dist = np.abs(pows - np.rint(pows))
    cond = pows * (1.0 + np.log(np.maximum(ns, 2)))
    band = np.maximum(cfg.guard_epsilon, 8.0 * _F64_EPS * cond)
    risky = np.flatnonzero(dist <= band)
    for i in risky.tolist():
        ceils[i] = _ceil_pow(int(ns[i]), cfg)
    return (ceils[1:] - ceils[:-1]) == 1


def ps_count_main_term(X: float, cfg: PSConfig) -> float:
    """Leading term X^gamma / log X of the PS prime count up to X."""
    if X <= 1:
        raise ParameterError(f"main term needs X > 1, got {X}")
    return float(X) ** cfg.gamma / math.log(X)
