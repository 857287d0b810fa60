"""Self-contained evaluation of the handful of constants the package needs.

Everything is computed from series with explicit truncation error bounds:
zeta values by Euler-Maclaurin, Euler's constant from the harmonic-sum
asymptotic, pi from Machin's arctangent formula.  No value is copied from
an external table beyond float64 guard digits.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

# B_2, B_4, ..., B_14; enough for ~1e-20 truncation error at the N used below.
_BERNOULLI = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
]


@lru_cache(maxsize=None)
def zeta(s: float, cutoff: int = 64) -> float:
    """Riemann zeta at real s > 1 by direct sum plus Euler-Maclaurin tail.

    With `cutoff` = N, the omitted correction is below
    B_16/(16)! * (s)_15 * N^(-s-15), far under 1e-15 for N >= 40 and s <= 8.
    """
    if s <= 1.0:
        raise ValueError(f"zeta requires s > 1, got {s}")
    n = cutoff
    head = math.fsum(j ** -s for j in range(1, n))
    tail = n ** (1.0 - s) / (s - 1.0) + 0.5 * n ** -s
    corrections = []
    for i, b in enumerate(_BERNOULLI):
        two_k = 2 * (i + 1)
        rising = 1.0
        for j in range(two_k - 1):
            rising *= s + j
        corrections_term = float(b) / math.factorial(two_k) * rising * n ** (-s - two_k + 1)
        corrections.append(corrections_term)
    return head + tail + math.fsum(corrections)


@lru_cache(maxsize=None)
def euler_gamma(cutoff: int = 40) -> float:
    """Euler's constant from H_N - log N with Euler-Maclaurin corrections.

    gamma = H_N - log N - 1/(2N) + sum_k B_{2k}/(2k N^{2k}); truncation
    error below |B_16|/(16 N^16) ~ 1e-25 at N = 40.
    """
    n = cutoff
    harmonic = math.fsum(1.0 / j for j in range(1, n + 1))
    corrections = [float(b) / ((2 * (i + 1)) * n ** (2 * (i + 1)))
                   for i, b in enumerate(_BERNOULLI)]
    return harmonic - math.log(n) - 1.0 / (2 * n) + math.fsum(corrections)


def _atan_recip(q: int) -> float:
    """arctan(1/q) by Taylor series; converges like q^(-2k)."""
    terms = []
    k = 0
    power = 1.0 / q
    q2 = float(q * q)
    while True:
        term = power / (2 * k + 1)
        if abs(term) < 1e-22:
            break
        terms.append(term if k % 2 == 0 else -term)
        power /= q2
        k += 1
    return math.fsum(terms)


@lru_cache(maxsize=None)
def pi_machin() -> float:
    """pi = 16 arctan(1/5) - 4 arctan(1/239)."""
    return 16.0 * _atan_recip(5) - 4.0 * _atan_recip(239)


def constants() -> dict[str, float]:
    """The constants every other module consumes, each good to >= 12 digits."""
    return {
        "gamma": euler_gamma(),
        "zeta_3_2": zeta(1.5),
        "zeta_3": zeta(3.0),
        "pi": pi_machin(),
    }


GAMMA = euler_gamma()
PI = pi_machin()
SQRT1_2 = math.sqrt(0.5)
