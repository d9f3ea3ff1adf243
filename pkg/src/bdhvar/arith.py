"""Prime sieving and basic multiplicative functions.

Provides:
    * PrimeTable      -- primality bitmap plus the packed list of primes
    * LambdaTable     -- von Mangoldt values Lambda(n) for 0 <= n <= limit
    * build_prime_table / build_lambda_table
    * von_mangoldt(n) for single n beyond any table
    * factorize, euler_phi

The sieve is a segmented Eratosthenes: base primes up to sqrt(limit) are
found first, then the bitmap is cleared segment by segment so the working
set stays cache-sized even for limits in the 10^8 range.  Lambda tables
compute log p once per prime and reuse it for every power of p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ResourceError

DEFAULT_SEGMENT = 1 << 20
DEFAULT_LIMIT_CAP = 10**9


@dataclass
class PrimeTable:
    """Sieve output up to a fixed limit.

    Attributes:
        limit: largest integer covered by the table.
        is_prime: boolean array of length limit+1, is_prime[n] == (n prime).
        primes: int64 array of the primes <= limit, ascending.
    """

    limit: int
    is_prime: np.ndarray
    primes: np.ndarray


@dataclass
class LambdaTable:
    """von Mangoldt values up to a fixed limit.

    values[n] == log p if n = p^k for a prime p, else 0.0.  Index 0 and 1
    are 0.0.
    """

    limit: int
    values: np.ndarray


def build_prime_table(limit: int, *, segment_size: int = DEFAULT_SEGMENT,
                      cap: int = DEFAULT_LIMIT_CAP) -> PrimeTable:
    """Sieve all primes up to limit.

    Args:
        limit: inclusive upper bound, at least 2.
        segment_size: working-window length for the segmented clearing pass.
        cap: refuse limits above this (memory guard).

    Returns:
        PrimeTable covering [0, limit].
    """
    if limit < 2:
        raise ParameterError(f"sieve limit must be >= 2, got {limit}")
    if limit > cap:
        raise ResourceError(f"sieve limit {limit} exceeds cap {cap}")

    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False

    root = math.isqrt(limit)
    # Dense base sieve up to sqrt(limit); this is tiny (sqrt(1e9) ~ 3e4).
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p:: p] = False
    base_primes = np.flatnonzero(base)

    for lo in range(2, limit + 1, segment_size):
        hi = min(lo + segment_size, limit + 1)
        for p in base_primes:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi:
                is_prime[start:hi:p] = False

    primes = np.flatnonzero(is_prime).astype(np.int64)
    return PrimeTable(limit=limit, is_prime=is_prime, primes=primes)


def build_lambda_table(limit: int, table: PrimeTable | None = None) -> LambdaTable:
    """Tabulate Lambda(n) for 0 <= n <= limit.

    log p is evaluated once per prime; prime powers reuse the stored value.
    """
    if table is None or table.limit < limit:
        table = build_prime_table(max(limit, 2))
    primes = table.primes[table.primes <= limit]
    values = np.zeros(limit + 1, dtype=np.float64)
    logs = np.log(primes.astype(np.float64))
    values[primes] = logs
    # Higher powers only exist for p <= sqrt(limit).
    root = math.isqrt(limit)
    for p, lg in zip(primes[primes <= root].tolist(), logs[primes <= root].tolist()):
        pk = p * p
        while pk <= limit:
            values[pk] = lg
            pk *= p
    return LambdaTable(limit=limit, values=values)


def von_mangoldt(n: int, table: PrimeTable) -> float:
    """Lambda(n) for a single n, using table primes for trial division.

    Works whenever the smallest prime factor of n is <= table.limit, or
    n <= table.limit^2 (enough primes to certify primality).
    """
    if n == 0:
        raise ParameterError("Lambda(0) is undefined")
    if n < 0:
        raise ParameterError(f"Lambda needs n >= 1, got {n}")
    if n == 1:
        return 0.0
    root = math.isqrt(n)
    candidates = table.primes[table.primes <= min(root, table.limit)]
    if candidates.size:
        hits = candidates[n % candidates == 0]
    else:
        hits = candidates
    if hits.size == 0:
        if root <= table.limit:
            return math.log(n)  # no factor up to sqrt(n): n is prime
        raise ParameterError(
            f"prime table (limit {table.limit}) too small to classify {n}")
    p = int(hits[0])
    m = n
    while m % p == 0:
        m //= p
    return math.log(p) if m == 1 else 0.0


# Shared table for factorize/euler_phi, grown on demand.
_factor_table: PrimeTable | None = None


def _trial_primes(up_to: int) -> np.ndarray:
    global _factor_table
    need = max(up_to, 64)
    if _factor_table is None or _factor_table.limit < need:
        _factor_table = build_prime_table(2 * need)
    return _factor_table.primes


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as [(p, e), ...] with p ascending.

    Trial division by sieved primes up to sqrt(n); deterministic.
    """
    if n < 1:
        raise ParameterError(f"factorize needs n >= 1, got {n}")
    if n == 1:
        return []
    out: list[tuple[int, int]] = []
    m = n
    for p in _trial_primes(math.isqrt(n)).tolist():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    if m > 1:
        out.append((m, 1))
    return out


def euler_phi(n: int) -> int:
    """Euler totient, via the factorization of n."""
    if n < 1:
        raise ParameterError(f"euler_phi needs n >= 1, got {n}")
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result
