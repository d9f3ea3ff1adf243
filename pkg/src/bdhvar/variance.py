"""Variance of weighted counts over arithmetic progressions.

For a weight w supported on (mu X, X] and a main term M, the quantity of
interest is

    V(Q) = sum_{q <= Q} sum_{a mod q, gcd(a,q)=1} | S_q(a) - M/phi(q) |^2,

with S_q(a) the sum of w(n) over n == a (mod q).  Two routes compute it:

    * direct       -- residue-bucketed progression sums per q;
    * characters   -- the exact identity
      sum_{(a,q)=1} |S_q(a) - M/phi(q)|^2
          = (1/phi(q)) * sum_{chi mod q} | Psi_chi - delta(chi) M |^2,
      where Psi_chi = sum w(n) chi(n) and delta is 1 only at the principal
      character.

The identity is Parseval over the unit group and holds for arbitrary
complex weights, so route agreement is a strong end-to-end check; reports
carry the relative discrepancy and anything above 1e-8 is flagged.

Accumulation discipline: per-progression sums are pairwise column sums in
80-bit floats (error far below the 1e-12 oracle-equivalence budget), all
per-q squared deviations and the cross-q total go through math.fsum, and
the cross-q reduction is always in ascending q regardless of thread count,
so results are bit-identical for 1 or many workers.
"""

from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .arith import LambdaTable, PrimeTable, build_lambda_table, build_prime_table
from .characters import CharacterGroup, character_group
from .errors import ParameterError
from .oscillatory import ExpWeightParams, main_term_integral, phase_frac_array
from .psprimes import PSConfig, ps_array

CROSS_CHECK_TOL = 1e-8


class WeightKind(enum.Enum):
    CLASSIC_EXP = "classic_exp"    # Lambda(n) e(t n^c)
    PS_PLAIN = "ps_plain"          # Lambda(n) restricted to PS indices
    PS_EXP = "ps_exp"              # Lambda(n) n^(1-gamma) [PS] e(t n^c)
    RAW_LAMBDA = "raw_lambda"      # Lambda(n)
    LOGP_ONLY = "logp_only"        # log p at primes, 0 elsewhere
    CUSTOM = "custom"


@dataclass(frozen=True)
class WeightParams:
    """Optional knobs consumed by the weight kinds that need them."""

    c: Optional[float] = None
    t: Optional[float] = None
    ps: Optional[PSConfig] = None


@dataclass
class SieveTables:
    """Bundle of shared sieve products a weight build reads from."""

    primes: PrimeTable
    lam: LambdaTable


def make_tables(limit: int) -> SieveTables:
    pt = build_prime_table(limit)
    return SieveTables(primes=pt, lam=build_lambda_table(limit, pt))


@dataclass
class WeightTable:
    """Complex weights w(n) for integer n in (mu X, X].

    values[i] = w(n0 + i), where n0 = floor(mu X) + 1 is the first integer
    of the range and the last is floor(X).
    """

    X: float
    mu: float
    kind: WeightKind
    params: WeightParams
    n0: int
    values: np.ndarray

    def n_values(self) -> np.ndarray:
        return self.n0 + np.arange(len(self.values), dtype=np.int64)

    def total(self) -> complex:
        return complex(math.fsum(self.values.real), math.fsum(self.values.imag))


@dataclass(frozen=True)
class MainTerm:
    """Expected per-modulus mass: S_q(a) is compared against value/phi(q).

    For PS_PLAIN two readings coexist: `value` is X^gamma and `alt_value`
    is X^gamma - (mu X)^gamma, the variant consistent with the summation
    range.  Reports compute both; the headline ratio uses the
    range-consistent one.  alt_value is None for every other kind.
    """

    kind: WeightKind
    value: complex
    alt_value: Optional[complex] = None

    def headline(self) -> complex:
        return self.alt_value if self.alt_value is not None else self.value


def custom_weight_table(X: float, mu: float, values: np.ndarray) -> WeightTable:
    """Wrap a caller-supplied complex array as a CUSTOM weight table."""
    n0, n1 = _range_bounds(X, mu)
    arr = np.asarray(values, dtype=np.complex128)
    if len(arr) != n1 - n0 + 1:
        raise ParameterError(
            f"need {n1 - n0 + 1} values for (mu X, X], got {len(arr)}")
    return WeightTable(X=float(X), mu=float(mu), kind=WeightKind.CUSTOM,
                       params=WeightParams(), n0=n0, values=arr)


def _range_bounds(X: float, mu: float) -> tuple[int, int]:
    if not (X >= 2 and math.isfinite(X)):
        raise ParameterError(f"X must be finite and >= 2, got {X}")
    if not 0.0 <= mu < 1.0:
        raise ParameterError(f"mu must be in [0, 1), got {mu}")
    n0 = math.floor(mu * X) + 1
    n1 = math.floor(X)
    if n1 < n0:
        raise ParameterError(f"empty range (mu X, X] for X={X}, mu={mu}")
    return n0, n1


def _ps_mask(n0: int, n1: int, cfg: PSConfig) -> np.ndarray:
    mask = np.zeros(n1 - n0 + 1, dtype=bool)
    mask[ps_array(n0, n1, cfg) - n0] = True
    return mask


def _phase_factor(t: float, ns: np.ndarray, c: float) -> np.ndarray:
    if t == 0.0:
        return np.ones(len(ns), dtype=np.complex128)
    fr = phase_frac_array(t, ns, c)
    return np.exp(2j * np.pi * fr)


def _exp_params(X: float, mu: float, params: WeightParams) -> ExpWeightParams:
    if params.c is None or params.t is None:
        raise ParameterError("this weight kind needs both c and t")
    return ExpWeightParams(X=float(X), mu=float(mu), c=float(params.c),
                           t=float(params.t))


def build_weight_table(X: float, mu: float, kind: WeightKind,
                       params: WeightParams | None,
                       tables: SieveTables) -> WeightTable:
    """Materialise one of the built-in weight kinds on (mu X, X]."""
    params = params or WeightParams()
    n0, n1 = _range_bounds(X, mu)
    if tables.lam.limit < n1:
        raise ParameterError(
            f"Lambda table limit {tables.lam.limit} below range end {n1}")
    ns = np.arange(n0, n1 + 1, dtype=np.int64)
    lam = tables.lam.values[n0:n1 + 1]

    if kind is WeightKind.RAW_LAMBDA:
        vals = lam.astype(np.complex128)
    elif kind is WeightKind.LOGP_ONLY:
        mask = tables.primes.is_prime[n0:n1 + 1]
        vals = np.where(mask, np.log(ns.astype(np.float64)), 0.0)
        vals = vals.astype(np.complex128)
    elif kind is WeightKind.CLASSIC_EXP:
        p = _exp_params(X, mu, params)
        vals = lam * _phase_factor(p.t, ns, p.c)
    elif kind is WeightKind.PS_PLAIN:
        if params.ps is None:
            raise ParameterError("PS_PLAIN needs params.ps (a PSConfig)")
        vals = np.where(_ps_mask(n0, n1, params.ps), lam, 0.0)
        vals = vals.astype(np.complex128)
    elif kind is WeightKind.PS_EXP:
        if params.ps is None:
            raise ParameterError("PS_EXP needs params.ps (a PSConfig)")
        p = _exp_params(X, mu, params)
        amp = ns.astype(np.float64) ** (1.0 - params.ps.gamma)
        base = np.where(_ps_mask(n0, n1, params.ps), lam * amp, 0.0)
        vals = base * _phase_factor(p.t, ns, p.c)
    elif kind is WeightKind.CUSTOM:
        raise ParameterError("use custom_weight_table for CUSTOM kinds")
    else:
        raise ParameterError(f"unknown weight kind {kind}")
    return WeightTable(X=float(X), mu=float(mu), kind=kind, params=params,
                       n0=n0, values=vals)


def main_term_for(X: float, mu: float, kind: WeightKind,
                  params: WeightParams | None) -> MainTerm:
    """The main term matched to a weight kind (see MainTerm for PS_PLAIN)."""
    params = params or WeightParams()
    if kind in (WeightKind.RAW_LAMBDA, WeightKind.LOGP_ONLY):
        return MainTerm(kind=kind, value=complex((1.0 - mu) * X))
    if kind is WeightKind.CLASSIC_EXP:
        return MainTerm(kind=kind, value=main_term_integral(_exp_params(X, mu, params)))
    if kind is WeightKind.PS_PLAIN:
        if params.ps is None:
            raise ParameterError("PS_PLAIN needs params.ps")
        g = params.ps.gamma
        full = float(X) ** g
        return MainTerm(kind=kind, value=complex(full),
                        alt_value=complex(full - (mu * X) ** g))
    if kind is WeightKind.PS_EXP:
        if params.ps is None:
            raise ParameterError("PS_EXP needs params.ps")
        integral = main_term_integral(_exp_params(X, mu, params))
        return MainTerm(kind=kind, value=params.ps.gamma * integral)
    raise ParameterError(f"no built-in main term for kind {kind}")


# ---------------------------------------------------------------------------
# Accumulation kernels
# ---------------------------------------------------------------------------

def class_sums(values: np.ndarray, n0: int, q: int) -> np.ndarray:
    """Residue-class sums: out[r] = sum of values[i] with (n0+i) == r (mod q).

    One pass, cache-friendly: the range is reshaped to rows of length q
    (every column then lies in a single residue class) and columns are
    pairwise-summed in 80-bit precision.
    """
    if q < 1:
        raise ParameterError(f"modulus must be >= 1, got {q}")
    m = len(values)
    nblocks = (m + q - 1) // q
    buf = np.zeros(nblocks * q, dtype=np.clongdouble)
    buf[:m] = values
    cols = buf.reshape(nblocks, q).sum(axis=0)
    out = np.empty(q, dtype=np.complex128)
    out[(n0 + np.arange(q)) % q] = cols.astype(np.complex128)
    return out


def progression_sum(w: WeightTable, q: int, a: int) -> complex:
    """Sum of w(n) over n == a (mod q) in the table range (1 <= a <= q)."""
    if q < 1:
        raise ParameterError(f"modulus must be >= 1, got {q}")
    if not 1 <= a <= q:
        raise ParameterError(f"residue must satisfy 1 <= a <= q, got {a}")
    start = (a - w.n0) % q
    sl = w.values[start::q]
    return complex(math.fsum(sl.real), math.fsum(sl.imag))


def _coprime_mask(q: int) -> np.ndarray:
    return np.gcd(np.arange(q, dtype=np.int64), q) == 1


MainLike = Union[complex, float, MainTerm]


def _resolve_main(main: MainLike) -> complex:
    if isinstance(main, MainTerm):
        return complex(main.headline())
    return complex(main)


def _sq_abs_sum(z: np.ndarray) -> float:
    return math.fsum(z.real * z.real + z.imag * z.imag)


def _run_per_q(qs: Sequence[int], worker: Callable, threads: int) -> list:
    """Apply worker to each q; reduction order stays ascending q."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, qs))
    return [worker(q) for q in qs]


def bdh_variance_direct(w: WeightTable, Q: int, main: MainLike, *,
                        threads: int = 1, per_q: bool = False):
    """V(Q) by residue bucketing.

    Returns the total, or (total, [(q, contribution), ...]) with per_q.
    """
    if Q < 1:
        raise ParameterError(f"Q must be >= 1, got {Q}")
    mv = _resolve_main(main)

    def one(q: int) -> float:
        sums = class_sums(w.values, w.n0, q)
        mask = _coprime_mask(q)
        dev = sums[mask] - mv / int(mask.sum())
        return _sq_abs_sum(dev)

    contribs = _run_per_q(range(1, Q + 1), one, threads)
    total = math.fsum(contribs)
    if per_q:
        return total, list(zip(range(1, Q + 1), contribs))
    return total


def bdh_variance_characters(w: WeightTable, Q: int, main: MainLike, *,
                            groups: Callable[[int], CharacterGroup] = character_group,
                            threads: int = 1, per_q: bool = False):
    """V(Q) through the character decomposition (the Parseval route)."""
    if Q < 1:
        raise ParameterError(f"Q must be >= 1, got {Q}")
    mv = _resolve_main(main)

    def one(q: int) -> float:
        sums = class_sums(w.values, w.n0, q)
        G = groups(q)
        psi = G.value_table() @ sums
        psi[0] -= mv  # principal character sits at index 0
        return _sq_abs_sum(psi) / G.phi

    contribs = _run_per_q(range(1, Q + 1), one, threads)
    total = math.fsum(contribs)
    if per_q:
        return total, list(zip(range(1, Q + 1), contribs))
    return total


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class VarianceReport:
    """Both variance routes plus normalisations for one (X, Q) cell.

    direct_variance / character_variance use the headline main term
    (range-consistent for PS_PLAIN); direct_alt / character_alt hold the
    paper-literal X^gamma variant when one exists.  wall_time_s is
    measured and therefore excluded from serialised output.
    """

    X: float
    Q: int
    mu: float
    kind: WeightKind
    params: WeightParams
    main: MainTerm
    direct_variance: float
    character_variance: float
    normalized_ratio: float
    ratio_alt: float
    direct_alt: Optional[float]
    character_alt: Optional[float]
    per_q: Optional[list]
    seed: int
    wall_time_s: float

    @property
    def cross_check_rel(self) -> float:
        rel = abs(self.direct_variance - self.character_variance) / \
            max(self.direct_variance, 1.0)
        if self.direct_alt is not None and self.character_alt is not None:
            rel = max(rel, abs(self.direct_alt - self.character_alt) /
                      max(self.direct_alt, 1.0))
        return rel

    @property
    def cross_check_ok(self) -> bool:
        return self.cross_check_rel <= CROSS_CHECK_TOL


def normalizer(kind: WeightKind, X: float, Q: int,
               gamma: Optional[float] = None) -> float:
    """The theorem-scale denominator X^e * Q * log X for the given kind."""
    lx = math.log(X)
    if kind is WeightKind.PS_PLAIN:
        if gamma is None:
            raise ParameterError("PS normaliser needs gamma")
        return X ** gamma * Q * lx
    if kind is WeightKind.PS_EXP:
        if gamma is None:
            raise ParameterError("PS normaliser needs gamma")
        return X ** (2.0 - gamma) * Q * lx
    return X * Q * lx


def normalized_ratio(report: VarianceReport) -> float:
    """direct variance over the theorem-scale normaliser."""
    g = report.params.ps.gamma if report.params.ps is not None else None
    return report.direct_variance / normalizer(report.kind, report.X,
                                               report.Q, g)


def variance_report(w: WeightTable, Q: int, main: MainTerm | None = None, *,
                    groups: Callable[[int], CharacterGroup] = character_group,
                    threads: int = 1, per_q: bool = False,
                    seed: int = 0) -> VarianceReport:
    """Run both variance routes (and both PS_PLAIN main variants) at once.

    Per q the residue sums are computed once and fed to both routes; the
    character transform versus the direct squared deviations remains the
    substantive cross-check.
    """
    if Q < 1:
        raise ParameterError(f"Q must be >= 1, got {Q}")
    t0 = time.perf_counter()
    if main is None:
        main = main_term_for(w.X, w.mu, w.kind, w.params)
    mains = [complex(main.headline())]
    if main.alt_value is not None:
        mains.append(complex(main.value))  # paper-literal variant second

    def one(q: int):
        sums = class_sums(w.values, w.n0, q)
        mask = _coprime_mask(q)
        phi = int(mask.sum())
        G = groups(q)
        if G.phi != phi:
            raise AssertionError(f"phi mismatch at q={q}: {G.phi} != {phi}")
        psi = G.value_table() @ sums
        cell = []
        for mv in mains:
            dev = sums[mask] - mv / phi
            shifted = psi.copy()
            shifted[0] -= mv
            cell.append((_sq_abs_sum(dev), _sq_abs_sum(shifted) / phi))
        return cell

    rows = _run_per_q(range(1, Q + 1), one, threads)
    direct = math.fsum(cell[0][0] for cell in rows)
    chars = math.fsum(cell[0][1] for cell in rows)
    if len(mains) > 1:
        direct_alt = math.fsum(cell[1][0] for cell in rows)
        chars_alt = math.fsum(cell[1][1] for cell in rows)
    else:
        direct_alt = chars_alt = None

    g = w.params.ps.gamma if w.params.ps is not None else None
    norm = normalizer(w.kind, w.X, Q, g)
    ratio = direct / norm
    ratio_alt = (direct_alt / norm) if direct_alt is not None else ratio
    break_down = None
    if per_q:
        break_down = [(q, cell[0][0], cell[0][1])
                      for q, cell in zip(range(1, Q + 1), rows)]
    return VarianceReport(
        X=w.X, Q=Q, mu=w.mu, kind=w.kind, params=w.params, main=main,
        direct_variance=direct, character_variance=chars,
        normalized_ratio=ratio, ratio_alt=ratio_alt,
        direct_alt=direct_alt, character_alt=chars_alt,
        per_q=break_down, seed=seed,
        wall_time_s=time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# Large sieve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LargeSieveResult:
    lhs: float
    bound: float
    ratio: float


def large_sieve_check(M: int, N: int, Q: int, coeffs: np.ndarray, *,
                      groups: Callable[[int], CharacterGroup] = character_group,
                      ) -> LargeSieveResult:
    """Primitive-character large-sieve quotient.

    lhs   = sum_{q <= Q} (q/phi(q)) sum*_{chi mod q} |sum a_n chi(n)|^2
    bound = (N + Q^2) * sum |a_n|^2,

    with n running over M+1 .. M+N and sum* over primitive characters.
    The returned ratio lhs/bound never exceeds 1 (up to rounding); it is 0
    for all-zero coefficients.
    """
    if N < 1 or Q < 1 or M < 0:
        raise ParameterError(f"need N, Q >= 1 and M >= 0, got N={N} Q={Q} M={M}")
    arr = np.asarray(coeffs, dtype=np.complex128)
    if len(arr) != N:
        raise ParameterError(f"expected {N} coefficients, got {len(arr)}")
    norm2 = _sq_abs_sum(arr)
    bound = (N + Q * Q) * norm2

    parts = []
    for q in range(1, Q + 1):
        G = groups(q)
        prim = G.primitive_mask()
        if not prim.any():
            parts.append(0.0)
            continue
        sums = class_sums(arr, M + 1, q)
        psi = G.value_table()[prim] @ sums
        parts.append(q / G.phi * _sq_abs_sum(psi))
    lhs = math.fsum(parts)
    ratio = lhs / bound if bound > 0 else 0.0
    return LargeSieveResult(lhs=lhs, bound=bound, ratio=ratio)
