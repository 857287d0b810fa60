"""Exact error terms and their truncated cosine expansions.

The cumulative sums behind each error term are integer-exact (int64 /
arbitrary precision for the cusp case) and cached on the table; evaluation
at real x is a floor lookup minus the smooth main term, so every function
here is pure and cheap enough to call at millions of quadrature nodes.
"""

from __future__ import annotations

import math

import numpy as np

from .constants import GAMMA, PI
from .coefficients import CoefficientKind, ErrorTermKind
from .errors import RangeError
from .tables import ArithTable

_FOUR_PI = 4.0 * PI


def _cumulative(table: ArithTable, key: str) -> np.ndarray:
    """Cumulative-sum arrays, built on first use and cached on the table."""
    cached = table._cache.get(key)
    if cached is not None:
        return cached
    if key == "cum_d":
        arr = np.cumsum(table.d, dtype=np.int64)
    elif key == "cum_r":
        arr = np.cumsum(table.r, dtype=np.int64)
    elif key == "cum_alt":
        signed = table.d.astype(np.int64)
        signed[1::2] *= -1
        arr = np.cumsum(signed)
    elif key == "cum_tau":
        # exact integer partial sums, each rounded to float64 once
        total = 0
        out = np.zeros(table.tau_limit + 1)
        for n in range(1, table.tau_limit + 1):
            total += table.tau[n]
            out[n] = float(total)
        arr = out
    else:
        raise KeyError(key)
    table._cache[key] = arr
    return arr


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise RangeError(msg)


def error_term(table: ArithTable, kind: ErrorTermKind, x: float) -> float:
    """The exact error term of `kind` at real x > 0."""
    return float(error_term_values(table, kind, np.array([float(x)]))[0])


def error_term_values(table: ArithTable, kind: ErrorTermKind,
                      x: np.ndarray) -> np.ndarray:
    """Vectorized error term; x is a float array with positive entries."""
    x = np.asarray(x, dtype=np.float64)
    if x.size and x.min() <= 0:
        raise ValueError("error terms are defined for x > 0")
    if kind is ErrorTermKind.DIVISOR:
        _require(x.size == 0 or x.max() <= table.limit,
                 f"x up to {x.max():g} needs table limit >= {math.ceil(x.max())}, "
                 f"have {table.limit}")
        idx = np.floor(x).astype(np.int64)
        sums = _cumulative(table, "cum_d")[idx].astype(np.float64)
        return sums - x * np.log(x) - (2.0 * GAMMA - 1.0) * x
    if kind is ErrorTermKind.TWO_SQUARES:
        _require(x.size == 0 or x.max() <= table.limit,
                 f"x up to {x.max():g} needs table limit >= {math.ceil(x.max())}, "
                 f"have {table.limit}")
        idx = np.floor(x).astype(np.int64)
        return _cumulative(table, "cum_r")[idx].astype(np.float64) - PI * x
    if kind is ErrorTermKind.CUSP:
        _require(x.size == 0 or x.max() <= table.tau_limit,
                 f"x up to {x.max():g} needs tau_limit >= {math.ceil(x.max())}, "
                 f"have {table.tau_limit}")
        idx = np.floor(x).astype(np.int64)
        return _cumulative(table, "cum_tau")[idx]
    if kind is ErrorTermKind.ALTERNATING:
        _require(x.size == 0 or 4.0 * x.max() <= table.limit,
                 f"alternating kind needs table limit >= 4x = "
                 f"{math.ceil(4 * x.max())}, have {table.limit}")
        idx = np.floor(4.0 * x).astype(np.int64)
        sums = _cumulative(table, "cum_alt")[idx].astype(np.float64)
        return 0.5 * sums - x * (np.log(x) + 2.0 * GAMMA - 1.0)
    raise ValueError(f"unknown kind {kind}")


def delta_star_identity_check(table: ArithTable, x: float) -> float:
    """Residual of the three-term identity tying the alternating error term
    to the divisor one; exactly zero in real arithmetic, so the returned
    value only measures float rounding."""
    lhs = error_term(table, ErrorTermKind.ALTERNATING, x)
    d1 = error_term(table, ErrorTermKind.DIVISOR, x)
    d2 = error_term(table, ErrorTermKind.DIVISOR, 2.0 * x)
    d4 = error_term(table, ErrorTermKind.DIVISOR, 4.0 * x)
    return lhs - (-d1 + 2.0 * d2 - 0.5 * d4)


def voronoi_truncated(table: ArithTable, kind: CoefficientKind,
                      x: float, y: float) -> float:
    """Truncated expansion amplitude * x^power * sum_{n<=y} f(n) n^(-3/4)
    cos(4 pi sqrt(n x) + phase), summed with compensation."""
    if y < 1.0:
        return 0.0
    nmax = int(math.floor(y))
    w = kind.series_weights(table, nmax)
    n = np.arange(nmax + 1, dtype=np.float64)
    terms = w * np.cos(_FOUR_PI * np.sqrt(n * x) + kind.phase)
    return kind.amplitude * x ** kind.x_power * math.fsum(terms[1:])


def voronoi_truncated_values(table: ArithTable, kind: CoefficientKind,
                             x: np.ndarray, y: float) -> np.ndarray:
    """Vectorized truncated expansion over an array of x values."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    if y < 1.0:
        return out
    nmax = int(math.floor(y))
    w = kind.series_weights(table, nmax)
    sqrt_x = np.sqrt(x)
    for n in range(1, nmax + 1):
        out += w[n] * np.cos((_FOUR_PI * math.sqrt(n)) * sqrt_x + kind.phase)
    out *= kind.amplitude * x ** kind.x_power
    return out


_ERROR_FOR_COEFF = {
    "divisor": ErrorTermKind.DIVISOR,
    "two-squares": ErrorTermKind.TWO_SQUARES,
    "cusp": ErrorTermKind.CUSP,
    "alternating-divisor": ErrorTermKind.ALTERNATING,
}


def truncation_remainder(table: ArithTable, x: float, y: float,
                         kind: CoefficientKind | None = None) -> float:
    """Exact error term minus its truncated expansion at the same x."""
    kind = kind or CoefficientKind("divisor")
    err_kind = _ERROR_FOR_COEFF[kind.tag]
    return error_term(table, err_kind, x) - voronoi_truncated(table, kind, x, y)
