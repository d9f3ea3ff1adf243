"""Batch command-line front end.

Subcommands: variance, ps-count, lemma3, large-sieve, vaaler.  Every run is
a deterministic function of the resolved configuration plus the seed, so a
report file regenerates byte-identical regardless of --threads.  Measured
wall time goes to stderr only; the wall_ms column in files is fixed at 0 to
keep reruns comparable.

Configuration files are UTF-8 text, one `key = value` per line, `#` starts
a comment, and keys are exactly the ExperimentConfig field names.  Command
line flags override file values.  gamma accepts `u/v` rationals and echoes
them exactly.

Exit codes: 0 success, 2 bad parameters/config, 3 resource budget exceeded
(partial rows are still flushed and marked), 4 an internal cross-check
failed (direct/character disagreement, PS count route mismatch, a large
sieve ratio above 1 + 1e-9, or a sawtooth majorant violation).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .arith import build_prime_table
from .errors import ParameterError, ResourceError
from .oscillatory import (ExpWeightParams, main_term_integral, prime_exp_sum,
                          saw_psi, vaaler_eval, vaaler_expansion)
from .psprimes import (ps_array, ps_config, ps_count_main_term,
                       ps_indicator_array)
from .variance import (WeightKind, WeightParams, build_weight_table,
                       large_sieve_check, make_tables, variance_report)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOURCE = 3
EXIT_CROSS_CHECK = 4

LARGE_SIEVE_CAP = 500


@dataclasses.dataclass
class ExperimentConfig:
    """Resolved run parameters; field names double as config file keys."""

    x_grid: tuple = (10000.0,)
    kind: str = "classic_exp"
    q_rule: str = "x_over_log_pow:2"
    t_rule: str = "fixed:0"
    mu: float = 0.5
    gamma: Union[Fraction, float] = Fraction(9, 10)
    c: float = 1.5
    a: float = 2.0
    delta: float = 0.05
    seed: int = 0
    threads: int = 1
    trials: int = 100
    n_max: int = 100
    q_max: int = 100
    t_count: int = 5
    h_list: tuple = (1, 5, 20, 100)
    grid_points: int = 10000
    row_budget_s: float = 600.0
    allow_out_of_range: bool = False
    output_path: Optional[str] = None
    output_format: str = "csv"

    def validate(self) -> None:
        if not self.x_grid:
            raise ParameterError("x_grid must not be empty")
        for x in self.x_grid:
            if not (x >= 2 and math.isfinite(x)):
                raise ParameterError(f"x_grid entries must be >= 2, got {x}")
        if self.kind not in [k.value for k in WeightKind]:
            raise ParameterError(f"unknown kind {self.kind!r}")
        if not 0.0 <= self.mu < 1.0:
            raise ParameterError(f"mu must be in [0, 1), got {self.mu}")
        ps_config(self.gamma)  # raises with the (0,1) constraint message
        if self.threads < 1:
            raise ParameterError(f"threads must be >= 1, got {self.threads}")
        if self.seed < 0 or self.seed > 2**64 - 1:
            raise ParameterError("seed must fit in an unsigned 64-bit integer")
        if self.output_format not in ("csv", "json"):
            raise ParameterError(f"format must be csv or json, got "
                                 f"{self.output_format!r}")
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if not 1 <= self.n_max <= LARGE_SIEVE_CAP or \
                not 1 <= self.q_max <= LARGE_SIEVE_CAP:
            raise ParameterError(
                f"n_max and q_max must lie in [1, {LARGE_SIEVE_CAP}]")
        if self.t_count < 1:
            raise ParameterError("t_count must be >= 1")
        if any(h < 1 for h in self.h_list):
            raise ParameterError("h_list entries must be >= 1")
        if self.grid_points < 10:
            raise ParameterError("grid_points must be >= 10")
        if self.row_budget_s <= 0:
            raise ParameterError("row_budget_s must be positive")


_LIST_KEYS = {"x_grid", "h_list"}
_INT_KEYS = {"seed", "threads", "trials", "n_max", "q_max", "t_count",
             "grid_points"}
_FLOAT_KEYS = {"mu", "c", "a", "delta", "row_budget_s"}
_BOOL_KEYS = {"allow_out_of_range"}
_STR_KEYS = {"kind", "q_rule", "t_rule", "output_path", "output_format"}


def _coerce(key: str, raw: str):
    if key == "gamma":
        return parse_gamma(raw)
    if key in _LIST_KEYS:
        parts = [p.strip() for p in raw.split(",") if p.strip()]
        if key == "h_list":
            return tuple(int(p) for p in parts)
        return tuple(float(p) for p in parts)
    if key in _INT_KEYS:
        return int(raw)
    if key in _FLOAT_KEYS:
        return float(raw)
    if key in _BOOL_KEYS:
        low = raw.strip().lower()
        if low in ("true", "1", "yes", "on"):
            return True
        if low in ("false", "0", "no", "off"):
            return False
        raise ParameterError(f"cannot parse boolean {key} = {raw!r}")
    if key in _STR_KEYS:
        return raw.strip()
    raise ParameterError(f"unknown config key {key!r}")


def parse_gamma(raw) -> Union[Fraction, float]:
    """gamma from 'u/v', a decimal string, or a number; must lie in (0,1)."""
    if isinstance(raw, (Fraction, float)):
        value = raw
    else:
        text = str(raw).strip()
        try:
            value = Fraction(text) if "/" in text else float(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"cannot parse gamma {raw!r}") from exc
    if not 0 < value < 1:
        raise ParameterError(
            f"gamma must lie strictly inside (0, 1), got {value}")
    return value


def load_config_file(path: str) -> dict:
    """Parse `key = value` lines (UTF-8, # comments) into typed values."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParameterError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParameterError(
                f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, raw = body.partition("=")
        key = key.strip().lower()
        try:
            out[key] = _coerce(key, raw.strip())
        except ParameterError:
            raise
        except ValueError as exc:
            raise ParameterError(
                f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return out


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------

def eval_q_rule(rule: str, X: float, gamma: float, a: float) -> int:
    name, _, arg = rule.partition(":")
    lx = math.log(X)
    if name == "fixed":
        q = int(float(arg))
    elif name == "x_over_log_pow":
        q = math.floor(X / lx ** (float(arg) if arg else a))
    elif name == "x_pow_gamma_over_log_pow":
        q = math.floor(X ** gamma / lx ** (float(arg) if arg else a))
    else:
        raise ParameterError(f"unknown q_rule {rule!r}")
    if q < 1:
        raise ParameterError(f"q_rule {rule!r} gives Q = {q} < 1 at X = {X}")
    return q


def eval_t_rule(rule: str, X: float, delta: float) -> float:
    name, _, arg = rule.partition(":")
    if name == "fixed":
        return float(arg)
    if name == "x_pow":
        return X ** (float(arg) - delta)
    raise ParameterError(f"unknown t_rule {rule!r}")


def theorem_range_warnings(kind: WeightKind, X: float, Q: int, t: float,
                           c: float, gamma: float, a: float,
                           delta: float) -> list[str]:
    """Q- and t-range checks for the three theorem-style weightings."""
    lx = math.log(X)
    warns: list[str] = []
    if kind is WeightKind.CLASSIC_EXP:
        lo, hi = X / lx ** a, X
        t_cap = X ** (2.0 / 3.0 - c - delta)
    elif kind is WeightKind.PS_PLAIN:
        lo, hi = X ** gamma / lx ** 2, X ** gamma
        t_cap = None
    elif kind is WeightKind.PS_EXP:
        lo, hi = X ** gamma / lx ** a, X ** gamma
        t_cap = X ** ((4.0 * gamma - 3.0 * c - 1.0) / 3.0 - delta)
    else:
        return warns
    if not (lo - 1.0 <= Q <= hi):
        warns.append(f"Q = {Q} outside the admissible range "
                     f"[{lo:.6g}, {hi:.6g}] at X = {X:g}")
    if t_cap is not None and abs(t) > t_cap * (1.0 + 1e-12):
        warns.append(f"|t| = {abs(t):.6g} above the admissible cap "
                     f"{t_cap:.6g} at X = {X:g}")
    return warns


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------

def _cell(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _config_echo(cfg: ExperimentConfig) -> dict:
    doc = {}
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if isinstance(v, Fraction):
            v = f"{v.numerator}/{v.denominator}"
        elif isinstance(v, tuple):
            v = list(v)
        doc[f.name] = v
    return doc


def emit(columns: list[str], rows: list[dict], cfg: ExperimentConfig,
         partial_at: Optional[int] = None) -> None:
    """Write rows as CSV or JSON to cfg.output_path (or stdout)."""
    if cfg.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[col]) for col in columns])
        if partial_at is not None:
            writer.writerow(["#PARTIAL"] + [""] * (len(columns) - 1))
        text = buf.getvalue()
    else:
        json_rows = []
        for row in rows:
            json_rows.append({col: (f"{v.numerator}/{v.denominator}"
                                    if isinstance(v := row[col], Fraction) else v)
                              for col in columns})
        doc = {"config": _config_echo(cfg), "rows": json_rows}
        if partial_at is not None:
            doc["partial"] = True
            doc["budget_exceeded_at_row"] = partial_at
        text = json.dumps(doc, indent=2) + "\n"
    if cfg.output_path:
        Path(cfg.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_variance(cfg: ExperimentConfig) -> int:
    kind = WeightKind(cfg.kind)
    if kind is WeightKind.CUSTOM:
        raise ParameterError("the variance command cannot build CUSTOM weights")
    gamma_f = float(cfg.gamma)
    needs_ps = kind in (WeightKind.PS_PLAIN, WeightKind.PS_EXP)
    needs_t = kind in (WeightKind.CLASSIC_EXP, WeightKind.PS_EXP)
    tables = make_tables(int(max(cfg.x_grid)))

    columns = ["X", "Q", "mu", "kind", "gamma", "c", "t", "direct",
               "character", "ratio", "ratio_alt", "seed", "wall_ms"]
    rows: list[dict] = []
    failures = 0
    partial_at = None
    for i, X in enumerate(cfg.x_grid):
        started = time.perf_counter()
        Q = eval_q_rule(cfg.q_rule, X, gamma_f, cfg.a)
        t = eval_t_rule(cfg.t_rule, X, cfg.delta) if needs_t else 0.0
        warns = theorem_range_warnings(kind, X, Q, t, cfg.c, gamma_f,
                                       cfg.a, cfg.delta)
        if warns:
            for w in warns:
                _log(f"warning: {w}")
            if not cfg.allow_out_of_range:
                raise ParameterError(
                    "outside the admissible theorem range; rerun with "
                    "--allow-out-of-range to proceed")
        params = WeightParams(
            c=cfg.c if needs_t else None,
            t=t if needs_t else None,
            ps=ps_config(cfg.gamma) if needs_ps else None)
        w = build_weight_table(X, cfg.mu, kind, params, tables)
        rep = variance_report(w, Q, threads=cfg.threads, seed=cfg.seed)
        if not rep.cross_check_ok:
            failures += 1
            _log(f"cross-check FAILED at X={X:g}: rel={rep.cross_check_rel:.3e}")
        rows.append({
            "X": float(X), "Q": Q, "mu": cfg.mu, "kind": cfg.kind,
            "gamma": cfg.gamma, "c": cfg.c, "t": t,
            "direct": rep.direct_variance,
            "character": rep.character_variance,
            "ratio": rep.normalized_ratio, "ratio_alt": rep.ratio_alt,
            "seed": cfg.seed, "wall_ms": 0,
        })
        elapsed = time.perf_counter() - started
        _log(f"variance row X={X:g} Q={Q} took {elapsed:.2f}s")
        if elapsed > cfg.row_budget_s and i + 1 < len(cfg.x_grid):
            partial_at = i + 1
            _log(f"row budget {cfg.row_budget_s:.0f}s exceeded; flushing "
                 f"{len(rows)} of {len(cfg.x_grid)} rows")
            break
    emit(columns, rows, cfg, partial_at)
    if partial_at is not None:
        return EXIT_RESOURCE
    return EXIT_CROSS_CHECK if failures else EXIT_OK


def cmd_ps_count(cfg: ExperimentConfig) -> int:
    pscfg = ps_config(cfg.gamma)
    limit = int(max(cfg.x_grid))
    table = build_prime_table(limit)
    columns = ["X", "gamma", "count", "main_term", "normalized_error",
               "seed", "wall_ms"]
    rows = []
    mismatches = 0
    partial_at = None
    for i, X in enumerate(cfg.x_grid):
        started = time.perf_counter()
        xi = int(X)
        if xi < 3:
            raise ParameterError(f"ps-count needs X >= 3, got {X}")
        members = ps_array(1, xi, pscfg)
        count = int(table.is_prime[members].sum())
        # Independent route: the floor-difference identity over [2, X].
        ind = ps_indicator_array(2, xi, pscfg)
        count_ind = int((ind & table.is_prime[2:xi + 1]).sum())
        if count != count_ind:
            mismatches += 1
            _log(f"PS count mismatch at X={X:g}: generator {count}, "
                 f"indicator {count_ind}")
        main = ps_count_main_term(X, pscfg)
        lx = math.log(X)
        err = abs(count - main) * lx * lx / float(X) ** pscfg.gamma
        rows.append({"X": float(X), "gamma": cfg.gamma, "count": count,
                     "main_term": main, "normalized_error": err,
                     "seed": cfg.seed, "wall_ms": 0})
        elapsed = time.perf_counter() - started
        _log(f"ps-count row X={X:g} took {elapsed:.2f}s")
        if elapsed > cfg.row_budget_s and i + 1 < len(cfg.x_grid):
            partial_at = i + 1
            break
    emit(columns, rows, cfg, partial_at)
    if partial_at is not None:
        return EXIT_RESOURCE
    return EXIT_CROSS_CHECK if mismatches else EXIT_OK


def cmd_lemma3(cfg: ExperimentConfig) -> int:
    table = build_prime_table(int(max(cfg.x_grid)))
    columns = ["X", "c", "t", "abs_diff", "scaled_diff", "reference_decay",
               "seed", "wall_ms"]
    rows = []
    partial_at = None
    done = 0
    total_rows = len(cfg.x_grid) * cfg.t_count
    for X in cfg.x_grid:
        t_cap = X ** (1.0 - cfg.c - cfg.delta)
        for j in range(cfg.t_count):
            started = time.perf_counter()
            t = t_cap * 10.0 ** (-(cfg.t_count - 1 - j) / 2.0)
            params = ExpWeightParams(X=X, mu=cfg.mu, c=cfg.c, t=t)
            s = prime_exp_sum(params, table.primes)
            integral = main_term_integral(params)
            diff = abs(s - integral)
            rows.append({
                "X": float(X), "c": cfg.c, "t": t, "abs_diff": diff,
                "scaled_diff": diff / X,
                "reference_decay": X * math.exp(-math.log(X) ** 0.2),
                "seed": cfg.seed, "wall_ms": 0,
            })
            done += 1
            elapsed = time.perf_counter() - started
            if elapsed > cfg.row_budget_s and done < total_rows:
                partial_at = done
                break
        if partial_at is not None:
            break
    emit(columns, rows, cfg, partial_at)
    return EXIT_RESOURCE if partial_at is not None else EXIT_OK


def cmd_large_sieve(cfg: ExperimentConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    columns = ["trial", "n", "q", "m", "ratio", "seed", "wall_ms"]
    rows = []
    worst = 0.0
    bad = 0
    for trial in range(cfg.trials):
        n = int(rng.integers(1, cfg.n_max + 1))
        q = int(rng.integers(1, cfg.q_max + 1))
        m = int(rng.integers(0, cfg.n_max + 1))
        coeffs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        res = large_sieve_check(m, n, q, coeffs)
        worst = max(worst, res.ratio)
        if res.ratio > 1.0 + 1e-9:
            bad += 1
            _log(f"large sieve ratio {res.ratio:.12f} > 1 at trial {trial}")
        rows.append({"trial": trial, "n": n, "q": q, "m": m,
                     "ratio": res.ratio, "seed": cfg.seed, "wall_ms": 0})
    rows.append({"trial": "max", "n": 0, "q": 0, "m": 0, "ratio": worst,
                 "seed": cfg.seed, "wall_ms": 0})
    emit(columns, rows, cfg)
    return EXIT_CROSS_CHECK if bad else EXIT_OK


def cmd_vaaler(cfg: ExperimentConfig) -> int:
    ints = np.arange(-2, 4, dtype=np.float64)
    base = np.linspace(-2.0, 3.0, cfg.grid_points - ints.size)
    grid = np.sort(np.concatenate([base, ints]))
    psi = saw_psi(grid)
    columns = ["H", "max_error", "max_majorant", "violations", "seed",
               "wall_ms"]
    rows = []
    bad = 0
    for H in cfg.h_list:
        exp = vaaler_expansion(int(H))
        approx, majorant = vaaler_eval(grid, exp)
        err = np.abs(psi - approx)
        violations = int(np.sum(err > majorant + 1e-12))
        bad += violations
        rows.append({"H": int(H), "max_error": float(err.max()),
                     "max_majorant": float(majorant.max()),
                     "violations": violations,
                     "seed": cfg.seed, "wall_ms": 0})
    emit(columns, rows, cfg)
    return EXIT_CROSS_CHECK if bad else EXIT_OK


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------

def _shared_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", help="key = value config file")
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--allow-out-of-range", action="store_const", const=True,
                   help="proceed despite theorem-range warnings")
    p.add_argument("--x-grid", help="comma-separated X values")
    p.add_argument("--kind", help="weight kind (classic_exp, ps_plain, ...)")
    p.add_argument("--q-rule", help="fixed:V | x_over_log_pow:A | "
                                    "x_pow_gamma_over_log_pow:A")
    p.add_argument("--t-rule", help="fixed:V | x_pow:E (t = X^(E - delta))")
    p.add_argument("--mu", type=float)
    p.add_argument("--gamma", help="decimal or exact u/v, e.g. 2426/2817")
    p.add_argument("--c", type=float)
    p.add_argument("--a", type=float, help="log-power A in theorem ranges")
    p.add_argument("--delta", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--q-max", type=int)
    p.add_argument("--t-count", type=int)
    p.add_argument("--h-list", help="comma-separated H values")
    p.add_argument("--grid-points", type=int)
    p.add_argument("--row-budget-s", type=float)
    return p


_FLAG_TO_KEY = {
    "out": "output_path", "format": "output_format",
}

COMMANDS = {
    "variance": cmd_variance,
    "ps-count": cmd_ps_count,
    "lemma3": cmd_lemma3,
    "large-sieve": cmd_large_sieve,
    "vaaler": cmd_vaaler,
}


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = argparse.ArgumentParser(
        prog="bdhvar",
        description="Progression-variance experiments for weighted prime "
                    "counts (exponential-sum and Piatetski-Shapiro weights).")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("variance", parents=[shared],
                   help="direct vs character-decomposed variance over a X grid")
    sub.add_parser("ps-count", parents=[shared],
                   help="Piatetski-Shapiro prime counts against X^gamma/log X")
    sub.add_parser("lemma3", parents=[shared],
                   help="prime exponential sum against its archimedean integral")
    sub.add_parser("large-sieve", parents=[shared],
                   help="randomised primitive-character large-sieve ratios")
    sub.add_parser("vaaler", parents=[shared],
                   help="sawtooth approximation error against its majorant")
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    values: dict = {}
    if args.config:
        values.update(load_config_file(args.config))
    for flag, value in vars(args).items():
        if flag in ("command", "config") or value is None:
            continue
        key = _FLAG_TO_KEY.get(flag, flag)
        if key in ("output_path",):
            values[key] = value
        elif isinstance(value, bool):
            values[key] = value
        elif key in ("x_grid", "h_list", "gamma"):
            values[key] = _coerce(key, str(value))
        else:
            values[key] = value
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(values) - known
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    cfg = ExperimentConfig(**values)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except ParameterError as exc:
        _log(f"error: {exc}")
        return EXIT_CONFIG
    except ResourceError as exc:
        _log(f"resource error: {exc}")
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
