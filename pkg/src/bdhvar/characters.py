"""Dirichlet characters mod q via the cyclic structure of (Z/qZ)*.

The unit group is decomposed through the CRT: for odd prime powers p^k the
local group is cyclic, generated by a primitive root; for 2^k with k >= 3 it
splits as <-1> x <5>.  Each local generator is lifted to a residue mod q, a
dense discrete-log table of shape (q, #factors) is built once per modulus,
and every character is a tuple of exponents, one per cyclic factor, with

    chi(n) = exp(2*pi*i * sum_j e_j * x_j / d_j),        n coprime to q,

where x_j is the discrete log of n on factor j and d_j the factor order.
Values are read from a cached table of the L-th roots of unity
(L = lcm of the d_j), so every value comes from an exact reduced rational
phase.  Characters are enumerated lexicographically by exponent tuple; the
principal character is index 0.

Conductors are computed factor by factor in closed form (the smallest p-power
modulus each local component factors through), so no brute-force divisor
scan is needed even for large q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import factorize
from .errors import ParameterError

MAX_MODULUS = 10**6
# Full phi(q) x q value tables are memoised only for small moduli; above this
# they are rebuilt on demand (the table is O(phi(q)*q) complex numbers).
_VALUE_TABLE_CACHE_Q = 256


@dataclass(frozen=True)
class DirichletCharacter:
    """One character mod `modulus`, identified by its exponent tuple."""

    modulus: int
    index: int
    component_exponents: tuple[int, ...]
    conductor: int
    is_principal: bool


def _primitive_root_mod_p(p: int) -> int:
    """Smallest primitive root of an odd prime p."""
    phi = p - 1
    prime_divs = [f for f, _ in factorize(phi)]
    g = 2
    while True:
        if all(pow(g, phi // l, p) != 1 for l in prime_divs):
            return g
        g += 1


def _primitive_root_mod_pk(p: int, k: int) -> int:
    g = _primitive_root_mod_p(p)
    if k == 1:
        return g
    # g generates mod p^k for all k iff g^(p-1) != 1 mod p^2.
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _crt_lift(value: int, pe: int, q: int) -> int:
    """Residue mod q that is `value` mod pe and 1 mod q/pe."""
    other = q // pe
    if other == 1:
        return value % q
    # x = 1 + other * s with  1 + other*s == value (mod pe)
    s = ((value - 1) * pow(other, -1, pe)) % pe
    return (1 + other * s) % q


class _Factor:
    """One cyclic factor of (Z/qZ)*: generator, order, and its local dlog."""

    __slots__ = ("prime", "prime_power", "generator", "order", "local_dlog")

    def __init__(self, prime: int, prime_power: int, generator: int,
                 order: int, local_dlog: np.ndarray):
        self.prime = prime
        self.prime_power = prime_power
        self.generator = generator  # residue mod q
        self.order = order
        self.local_dlog = local_dlog  # indexed by residue mod prime_power


def _local_factors(p: int, k: int) -> list[tuple[int, int, np.ndarray]]:
    """Cyclic factors of (Z/p^k Z)* as (local generator, order, dlog table)."""
    pe = p**k
    if p == 2:
        if k == 1:
            return []
        if k == 2:
            dlog = np.full(4, -1, dtype=np.int32)
            dlog[1], dlog[3] = 0, 1
            return [(3, 2, dlog)]
        # k >= 3: <-1> of order 2 and <5> of order 2^(k-2)
        half = pe >> 2
        minus = np.full(pe, -1, dtype=np.int32)
        five = np.full(pe, -1, dtype=np.int32)
        v = 1
        for s in range(half):
            minus[v], five[v] = 0, s
            minus[pe - v], five[pe - v] = 1, s
            v = (v * 5) % pe
        return [(pe - 1, 2, minus), (5, half, five)]
    g = _primitive_root_mod_pk(p, k)
    order = pe - pe // p
    dlog = np.full(pe, -1, dtype=np.int32)
    t = 1
    for j in range(order):
        dlog[t] = j
        t = (t * g) % pe
    return [(g, order, dlog)]


def _conductor_from_exponents(factors: list[_Factor],
                              exponents: tuple[int, ...]) -> int:
    """Product of the smallest local moduli the components factor through."""
    cond = 1
    j = 0
    while j < len(factors):
        f = factors[j]
        if f.prime == 2 and f.order == 2 and j + 1 < len(factors) \
                and factors[j + 1].prime == 2:
            # the <-1>, <5> pair for 2^k, k >= 3
            eps, e5 = exponents[j], exponents[j + 1]
            d5 = factors[j + 1].order
            if e5 != 0:
                t5 = d5 // math.gcd(d5, e5)  # a power of 2, >= 2
                cond *= 4 * t5
            elif eps != 0:
                cond *= 4
            j += 2
            continue
        e = exponents[j]
        if e != 0:
            t = f.order // math.gcd(f.order, e)
            if f.prime == 2:  # the lone C2 factor of (Z/4Z)*
                cond *= 4
            else:
                s = 0
                while t % f.prime == 0:
                    t //= f.prime
                    s += 1
                cond *= f.prime ** (s + 1)
        j += 1
    return cond


class CharacterGroup:
    """All Dirichlet characters mod q, with dense evaluation tables.

    Attributes:
        modulus: q.
        phi: group order phi(q).
        factors: cyclic factors (generator lifted mod q, order, local dlog).
        dlog: (q, #factors) int32 exponent table, valid at coprime residues.
        coprime: boolean mask of residues coprime to q.
        characters: the phi(q) characters, lexicographic by exponent tuple.
    """

    def __init__(self, q: int):
        if not 1 <= q <= MAX_MODULUS:
            raise ParameterError(
                f"modulus must be in [1, {MAX_MODULUS}], got {q}")
        self.modulus = q
        factors: list[_Factor] = []
        for p, k in factorize(q):
            for g_local, order, local_dlog in _local_factors(p, k):
                factors.append(_Factor(p, p**k, _crt_lift(g_local, p**k, q),
                                       order, local_dlog))
        self.factors = factors
        self.orders = np.array([f.order for f in factors], dtype=np.int64)
        self.phi = int(self.orders.prod()) if factors else 1
        self.exponent = math.lcm(*[f.order for f in factors]) if factors else 1

        residues = np.arange(q, dtype=np.int64)
        self.coprime = np.gcd(residues, q) == 1 if q > 1 else np.ones(1, bool)
        if factors:
            cols = [f.local_dlog[residues % f.prime_power] for f in factors]
            self.dlog = np.stack(cols, axis=1).astype(np.int64)
        else:
            self.dlog = np.zeros((q, 0), dtype=np.int64)
        self.dlog[~self.coprime] = 0  # placeholder rows, masked at eval time

        L = self.exponent
        self.roots = np.exp(2j * np.pi * np.arange(L) / L)
        self._phase_mult = (L // self.orders) if factors else np.zeros(0, np.int64)

        self.characters: list[DirichletCharacter] = []
        for idx, exps in enumerate(_lex_tuples([f.order for f in factors])):
            self.characters.append(DirichletCharacter(
                modulus=q,
                index=idx,
                component_exponents=exps,
                conductor=_conductor_from_exponents(factors, exps),
                is_principal=all(e == 0 for e in exps),
            ))
        self._value_table: np.ndarray | None = None

    def __len__(self) -> int:
        return self.phi

    def phase_index(self, chi: DirichletCharacter, residue: int) -> int:
        """Index k such that chi(residue) = exp(2*pi*i*k/L)."""
        e = np.asarray(chi.component_exponents, dtype=np.int64)
        x = self.dlog[residue]
        return int(((e * self._phase_mult) % self.exponent) @ x % self.exponent)

    def values_row(self, chi: DirichletCharacter) -> np.ndarray:
        """chi at every residue 0..q-1 (0 off the coprime classes)."""
        if self._value_table is not None:
            return self._value_table[chi.index]
        return self._rows(np.array([chi.component_exponents], dtype=np.int64))[0]

    def value_table(self) -> np.ndarray:
        """(phi(q), q) table of all character values; cached for small q."""
        if self._value_table is not None:
            return self._value_table
        exps = np.array([c.component_exponents for c in self.characters],
                        dtype=np.int64).reshape(self.phi, len(self.factors))
        table = self._rows(exps)
        if self.modulus <= _VALUE_TABLE_CACHE_Q:
            self._value_table = table
        return table

    def primitive_mask(self) -> np.ndarray:
        """Boolean mask over `characters`: conductor equal to the modulus."""
        return np.array([c.conductor == self.modulus for c in self.characters],
                        dtype=bool)

    def _rows(self, exps: np.ndarray) -> np.ndarray:
        L = self.exponent
        weighted = (exps * self._phase_mult[None, :]) % L
        idx = weighted @ self.dlog.T % L
        rows = self.roots[idx]
        rows[:, ~self.coprime] = 0.0
        return rows


def _lex_tuples(orders: list[int]):
    """All exponent tuples, lexicographic (empty product gives one tuple)."""
    if not orders:
        yield ()
        return
    head, *rest = orders
    for e in range(head):
        for tail in _lex_tuples(rest):
            yield (e, *tail)


@lru_cache(maxsize=1024)
def character_group(q: int) -> CharacterGroup:
    """Memoised CharacterGroup constructor."""
    return CharacterGroup(q)


def char_eval(chi: DirichletCharacter, group: CharacterGroup, n: int) -> complex:
    """chi(n), zero when gcd(n, q) > 1."""
    q = group.modulus
    r = n % q
    if not group.coprime[r]:
        return 0.0 + 0.0j
    return complex(group.roots[group.phase_index(chi, r)])


def conductor(chi: DirichletCharacter, group: CharacterGroup) -> int:
    """Smallest f | q such that chi factors through a character mod f.

    chi is primitive exactly when this equals chi.modulus.  The value is
    computed once at group construction; this accessor exists so the
    operation has a callable name alongside the stored field.
    """
    return chi.conductor


def delta_principal(chi: DirichletCharacter) -> int:
    """1 for the principal character, else 0."""
    return 1 if chi.is_principal else 0


def psi_chi(weights, chi: DirichletCharacter,
            group: CharacterGroup) -> complex:
    """sum of w(n) * chi(n) over the weight table's range, ascending n.

    Accepts a variance.WeightTable (duck-typed: needs .values and .n0).
    Real and imaginary parts are each accumulated with math.fsum, which is
    exactly rounded.
    """
    row = group.values_row(chi)
    n = weights.n0 + np.arange(len(weights.values), dtype=np.int64)
    prod = weights.values * row[n % group.modulus]
    return complex(math.fsum(prod.real), math.fsum(prod.imag))
