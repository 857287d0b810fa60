"""Truncated square-root relation series, their binomial-cosine
combinations, main-term coefficients, and exact exponent bookkeeping.

The truncated series value s_{k;l}(f; y) is a sum over balanced ordered
k-tuples.  Rather than enumerating tuples, kernels are composed
sequentially: for each squarefree kernel h the per-class sums T_h(a, b)
(a left slots, b right slots, equal s-sums) enter a bivariate generating
polynomial, normalized so that slot choices appear as binomial weights.
The product over kernels, truncated at degree (l, k-l), carries exactly
the tuple sum.  Kernels with a single admissible s collapse to a closed
form and are folded in one vectorized batch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .constants import PI, SQRT1_2, zeta
from .coefficients import CoefficientKind, DIVISOR
from .errors import RangeError
from .tables import ArithTable


@dataclass(frozen=True)
class SeriesEstimate:
    """Truncated series value plus a fitted estimate of the missing tail."""

    k: int
    l: int
    kind: CoefficientKind
    y: float
    value: float
    tail_estimate: float

    @property
    def extrapolated(self) -> float:
        return self.value + self.tail_estimate


@dataclass(frozen=True)
class BkValue:
    """Binomial-cosine combination of series values at one truncation."""

    k: int
    kind: CoefficientKind
    y: float
    value: float
    breakdown: tuple[tuple[int, float, float, float], ...]
    # entries: (l, binomial * cos factor, s_{k;l}(f;y), term value)


@dataclass(frozen=True)
class MainTermCoefficient:
    theorem: int
    k: int
    kappa: int | None
    value: float
    formula: str


@dataclass(frozen=True)
class ExponentBook:
    """Exact rational error-exponent bookkeeping for one (k, A0)."""

    k: int
    a0: Fraction
    k0: int
    b_k: Fraction
    sigma: Fraction
    delta1: Fraction
    delta2: Fraction


# ---------------------------------------------------------------------------
# exact cosine of quarter-integer multiples of pi


def cos_quarter(m: int) -> float:
    """cos(pi m / 4) with exact zeros and units."""
    table = (1.0, SQRT1_2, 0.0, -SQRT1_2, -1.0, -SQRT1_2, 0.0, SQRT1_2)
    return table[m % 8]


# ---------------------------------------------------------------------------
# per-kernel class sums


def _max_s(y: float, h: int) -> int:
    if h > y:
        return 0
    m = math.isqrt(int(y / h))
    while (m + 1) * (m + 1) * h <= y:
        m += 1
    while m >= 1 and m * m * h > y:
        m -= 1
    return m


def _kernel_weight_vector(wt: np.ndarray, h: int, m: int) -> np.ndarray:
    """c[s] = f(s^2 h) (s^2 h)^(-3/4) for s = 1..m, index 0 zero."""
    idx = h * np.arange(1, m + 1, dtype=np.int64) ** 2
    c = np.zeros(m + 1)
    c[1:] = wt[idx]
    return c


def _conv_powers(c1: np.ndarray, count: int) -> list[np.ndarray]:
    """[c1, c1*c1, ...]: a-fold convolutions indexed by the s-sum."""
    out = [c1]
    for _ in range(count - 1):
        out.append(np.convolve(out[-1], c1))
    return out


def class_sum(table: ArithTable, kind: CoefficientKind, h: int,
              a: int, b: int, y: float) -> float:
    """T_h(a, b): sum over ordered (s_1..s_a), (t_1..t_b) with equal sums
    and all s^2 h <= y of the product of weights f(s^2 h)(s^2 h)^(-3/4)."""
    if h < 1 or any(h % (p * p) == 0 for p in range(2, math.isqrt(h) + 1)):
        raise ValueError(f"kernel h={h} must be a positive squarefree integer")
    if a < 0 or b < 0:
        raise ValueError("slot counts must be nonnegative")
    if a == 0 and b == 0:
        return 1.0
    if a == 0 or b == 0:
        return 0.0
    m = _max_s(y, h)
    if m < 1:
        return 0.0
    wt = kind.series_weights(table, int(math.floor(y)))
    c1 = _kernel_weight_vector(wt, h, m)
    convs = _conv_powers(c1, max(a, b))
    ca, cb = convs[a - 1], convs[b - 1]
    n = min(len(ca), len(cb))
    return float(np.dot(ca[:n], cb[:n]))


# ---------------------------------------------------------------------------
# truncated polynomial helpers (one variable, low degree)


def _poly_log(c: np.ndarray) -> np.ndarray:
    """log of a truncated series with c[0] = 1."""
    deg = len(c) - 1
    out = np.zeros(deg + 1)
    # d/dt log c = c'/c: solve for out' term by term
    for n in range(1, deg + 1):
        acc = n * c[n]
        for j in range(1, n):
            acc -= j * out[j] * c[n - j]
        out[n] = acc / n
    return out


def _poly_exp(c: np.ndarray) -> np.ndarray:
    """exp of a truncated series with c[0] = 0."""
    deg = len(c) - 1
    out = np.zeros(deg + 1)
    out[0] = 1.0
    for n in range(1, deg + 1):
        acc = 0.0
        for j in range(1, n + 1):
            acc += j * c[j] * out[n - j]
        out[n] = acc / n
    return out


@lru_cache(maxsize=None)
def _log_bessel_coeffs(deg: int) -> tuple[float, ...]:
    """Coefficients of log(sum_a t^a / (a!)^2) up to degree deg."""
    g = np.array([1.0 / math.factorial(a) ** 2 for a in range(deg + 1)])
    return tuple(_poly_log(g))


# ---------------------------------------------------------------------------
# the kernel-composition series


def _series_value(table: ArithTable, kind: CoefficientKind, k: int, l: int,
                  y: float) -> float:
    d1, d2 = l, k - l
    n_max = int(math.floor(y))
    if n_max < 1:
        return 0.0
    wt = kind.series_weights(table, n_max)
    if k == 2:
        # the relation forces n_1 = n_2: plain diagonal sum
        return float(np.dot(wt[1:], wt[1:]))

    mu = table.mu
    if n_max > table.limit:
        raise RangeError(f"series at y={y} needs table limit >= {n_max}")
    sqfree = np.nonzero(mu[1:n_max + 1])[0] + 1

    dmax = max(d1, d2)
    stride = 2 * d2 + 1
    flat_len = (d1 + 1) * stride
    f_poly = np.zeros(flat_len)
    f_poly[0] = 1.0

    # kernels admitting s >= 2, composed sequentially in ascending order
    heavy = sqfree[sqfree * 4 <= y]
    fact = [math.factorial(i) for i in range(dmax + 1)]
    for h in heavy:
        m = _max_s(y, int(h))
        c1 = _kernel_weight_vector(wt, int(h), m)
        convs = _conv_powers(c1, dmax)
        g = np.zeros((d1 + 1, stride))
        g[0, 0] = 1.0
        for a in range(1, d1 + 1):
            ca = convs[a - 1]
            for b in range(1, d2 + 1):
                cb = convs[b - 1]
                n = min(len(ca), len(cb))
                t_ab = float(np.dot(ca[:n], cb[:n]))
                if t_ab:
                    g[a, b] = t_ab / (fact[a] * fact[b])
        prod = np.convolve(f_poly, g.ravel())[: (2 * d1 + 1) * stride]
        grid = np.zeros((2 * d1 + 1) * stride)
        grid[: len(prod)] = prod
        grid = grid.reshape(2 * d1 + 1, stride)
        grid[:, d2 + 1:] = 0.0
        f_poly = grid[: d1 + 1].ravel()

    # single-s kernels (y/4 < h <= y): per kernel the class polynomial is
    # sum_a (w^2 uv)^a / (a!)^2, so the whole batch is exp of power sums
    light = sqfree[sqfree * 4 > y]
    deg = min(d1, d2)
    if len(light) and deg >= 1:
        w1 = wt[light]
        phi = _log_bessel_coeffs(deg)
        log_batch = np.zeros(deg + 1)
        powers = w1 * w1
        for j in range(1, deg + 1):
            log_batch[j] = phi[j] * float(powers.sum())
            if j < deg:
                powers = powers * (w1 * w1)
        batch = _poly_exp(log_batch)  # polynomial in t = u v
        g = np.zeros((d1 + 1, stride))
        for a in range(deg + 1):
            g[a, a] = batch[a]
        prod = np.convolve(f_poly, g.ravel())[: (2 * d1 + 1) * stride]
        grid = np.zeros((2 * d1 + 1) * stride)
        grid[: len(prod)] = prod
        grid = grid.reshape(2 * d1 + 1, stride)
        grid[:, d2 + 1:] = 0.0
        f_poly = grid[: d1 + 1].ravel()

    coeff = f_poly.reshape(d1 + 1, stride)[d1, d2]
    return float(coeff * math.factorial(d1) * math.factorial(d2))


def _cache_key(kind: CoefficientKind, k: int, l: int, y: float) -> tuple:
    return ("skl", kind.tag, kind.kappa, k, l, float(y))


def series_value(table: ArithTable, kind: CoefficientKind, k: int, l: int,
                 y: float) -> float:
    """s_{k;l}(f; y), cached per table."""
    if not 1 <= l < k:
        raise ValueError(f"need 1 <= l < k, got l={l}, k={k}")
    key = _cache_key(kind, k, l, y)
    cached = table._cache.get(key)
    if cached is None:
        cached = _series_value(table, kind, k, l, y)
        table._cache[key] = cached
    return cached


# tail model: y^(-1/2) times a cubic in log y, fitted to the increments of
# s at y/16..y; the -1/2 exponent is pinned, the log polynomial absorbs the
# slowly varying factor of the remainder.
_TAIL_POINTS = 4


def tail_fit(table: ArithTable, kind: CoefficientKind, k: int, l: int,
             y: float) -> float:
    s_y = series_value(table, kind, k, l, y)
    ys = [y / 2 ** i for i in range(1, _TAIL_POINTS + 1)]
    if ys[-1] < 16:
        # not enough room to fit; fall back to the two-point constant fit
        if y < 4:
            return 0.0
        s_half = series_value(table, kind, k, l, y / 2)
        return (s_y - s_half) / (math.sqrt(2.0) - 1.0)
    rows = []
    rhs = []
    log_y = math.log(y)
    for yi in ys:
        li = math.log(yi) - log_y
        rows.append([yi ** -0.5 * li ** j - (0.0 if j else y ** -0.5)
                     for j in range(_TAIL_POINTS)])
        rhs.append(s_y - series_value(table, kind, k, l, yi))
    # row j=0 column subtracts the tail at y itself: T(yi) - T(y) observed
    coeffs, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    tail = y ** -0.5 * coeffs[0]
    return float(tail)


def series_skl(table: ArithTable, kind: CoefficientKind, k: int, l: int,
               y: float) -> SeriesEstimate:
    """Truncated series plus tail estimate."""
    value = series_value(table, kind, k, l, y)
    tail = tail_fit(table, kind, k, l, y)
    return SeriesEstimate(k=k, l=l, kind=kind, y=y, value=value,
                          tail_estimate=tail)


# ---------------------------------------------------------------------------
# combinations and main-term coefficients


def bk(table: ArithTable, kind: CoefficientKind, k: int, y: float) -> BkValue:
    """B_k(f; y) = sum_l C(k-1, l) s_{k;l}(f; y) cos(pi (k - 2l)/4).

    Terms with k - 2l = 2 (mod 4) vanish exactly and are recorded as zero.
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    breakdown = []
    for l in range(1, k):
        cos_f = cos_quarter(k - 2 * l)
        binom = math.comb(k - 1, l)
        if cos_f == 0.0:
            breakdown.append((l, 0.0, 0.0, 0.0))
            continue
        s_val = series_value(table, kind, k, l, y)
        breakdown.append((l, binom * cos_f, s_val, binom * cos_f * s_val))
    value = math.fsum(term for *_, term in breakdown)
    return BkValue(k=k, kind=kind, y=y, value=value, breakdown=tuple(breakdown))


_THEOREM_KIND = {1: "divisor", 3: "two-squares", 4: "cusp", 5: "divisor"}


def main_term_coefficient(theorem: int, k: int, table: ArithTable, y: float,
                          kappa: int | None = None) -> MainTermCoefficient:
    """The constant multiplying the power of T in the predicted k-th moment.

    theorem 1: divisor error term; 3: two-squares; 4: cusp form (needs
    kappa); 5: the zeta mean-square error term (shares the divisor series).
    """
    if theorem not in (1, 3, 4, 5):
        raise ValueError(f"theorem must be one of 1, 3, 4, 5, got {theorem}")
    if theorem == 4:
        if kappa is None:
            raise ValueError("theorem 4 needs the weight kappa")
        kind = CoefficientKind("cusp", kappa=kappa)
    else:
        if kappa is not None:
            raise ValueError("kappa is only meaningful for theorem 4")
        kind = CoefficientKind(_THEOREM_KIND[theorem])
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    b_val = bk(table, kind, k, y).value
    if theorem == 1:
        denom = (1 + k / 4) * 2.0 ** (1.5 * k - 1) * PI ** k
        return MainTermCoefficient(theorem, k, None, b_val / denom,
                                   f"B_{k}(d;y)/((1+{k}/4) 2^({3 * k}/2-1) pi^{k})")
    if theorem == 3:
        denom = (1 + k / 4) * 2.0 ** (k - 1) * PI ** k
        return MainTermCoefficient(theorem, k, None, (-1) ** k * b_val / denom,
                                   f"(-1)^{k} B_{k}(r;y)/((1+{k}/4) 2^({k}-1) pi^{k})")
    if theorem == 4:
        denom = (1 + k * (2 * kappa - 1) / 4) * 2.0 ** (1.5 * k - 1) * PI ** k
        return MainTermCoefficient(theorem, k, kappa, b_val / denom,
                                   f"B_{k}(a~;y)/((1+{k}(2k-1)/4) 2^({3 * k}/2-1) pi^{k})")
    denom = (1 + k / 4) * 2.0 ** (0.75 * k - 1) * PI ** (k / 4)
    return MainTermCoefficient(theorem, k, None, b_val / denom,
                               f"B_{k}(d;y)/((1+{k}/4) 2^({3 * k}/4-1) pi^({k}/4))")


# the published explicit combinations for the divisor moments, k = 3..9:
# numerator coefficients per l over the common denominator, all over pi^k
EXPLICIT_DIVISOR_COMBOS: dict[int, tuple[dict[int, int], int]] = {
    3: ({1: 3}, 28),
    4: ({2: 3}, 64),
    5: ({2: 10, 1: -5}, 288),
    6: ({3: 5, 1: -3}, 320),
    7: ({3: 35, 2: -21, 1: -7}, 2816),
    8: ({4: 35, 2: -28}, 6144),
    9: ({1: 9, 2: -36, 3: -84, 4: 126}, 26624),
}


def explicit_divisor_coefficient(table: ArithTable, k: int, y: float) -> float:
    """The published closed-form divisor-moment coefficient, evaluated with
    the same truncated series values the generic formula uses."""
    combo, denom = EXPLICIT_DIVISOR_COMBOS[k]
    num = math.fsum(c * series_value(table, DIVISOR, k, l, y)
                    for l, c in combo.items())
    return num / (denom * PI ** k)


def zeta_mean_square_constant() -> float:
    """zeta(3/2)^4 / (6 pi^2 zeta(3)): the divisor mean-square constant."""
    return zeta(1.5) ** 4 / (6.0 * PI ** 2 * zeta(3.0))


# ---------------------------------------------------------------------------
# exact exponent bookkeeping


def exponent_book(k: int, a0: Fraction | str | int) -> ExponentBook:
    """K0, b(k), sigma, delta1, delta2 as exact rationals."""
    a0 = Fraction(a0)
    if a0 <= 2:
        raise ValueError(f"A0 must exceed 2, got {a0}")
    if k < 3:
        raise ValueError(f"need k >= 3, got {k}")
    if k >= a0:
        raise ValueError(f"need k < A0, got k={k}, A0={a0}")
    k0 = math.ceil(a0)
    if k0 % 2:
        k0 += 1

    def b(j: int | Fraction) -> Fraction:
        return Fraction(2) ** (j - 2) + Fraction(j - 6, 4)

    if k - 1 < a0 / 2:
        sigma = Fraction(1, 4)
    elif a0 / 2 + 1 <= k:
        sigma = (a0 - k) / (2 * (a0 - 2))
    else:
        # k sits in the (empty for integer k) gap between the two cases
        raise ValueError(f"sigma undefined for k={k}, A0={a0}")
    delta1 = sigma / (2 * b(k0))
    delta2 = sigma / (2 * b(k) + 2 * sigma)
    return ExponentBook(k=k, a0=a0, k0=k0, b_k=b(k), sigma=sigma,
                        delta1=delta1, delta2=delta2)
