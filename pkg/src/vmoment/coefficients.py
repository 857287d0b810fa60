"""Weight functions and oscillatory-sum parameters for each error term.

Each kind bundles the arithmetic weight f(n), the cosine phase offset, the
amplitude and the x-power of its truncated expansion, so that every
truncated-expansion and series computation runs through one code path that
differs only in data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constants import PI
from .errors import RangeError
from .tables import ArithTable


@dataclass(frozen=True)
class CoefficientKind:
    """Selector for a weight function and its expansion parameters.

    tag: "divisor" | "two-squares" | "cusp" | "alternating-divisor"
    kappa: even weight >= 12, cusp kind only (built-in coefficients cover
    kappa = 12; other weights are rejected at weight lookup).
    """

    tag: str
    kappa: int | None = None

    def __post_init__(self):
        if self.tag not in ("divisor", "two-squares", "cusp", "alternating-divisor"):
            raise ValueError(f"unknown coefficient kind {self.tag!r}")
        if self.tag == "cusp":
            if self.kappa is None or self.kappa < 12 or self.kappa % 2:
                raise ValueError("cusp kind needs an even weight kappa >= 12")
        elif self.kappa is not None:
            raise ValueError(f"kind {self.tag!r} takes no weight parameter")

    @property
    def phase(self) -> float:
        """Phase offset in cos(4 pi sqrt(n x) + phase)."""
        return PI / 4 if self.tag == "two-squares" else -PI / 4

    @property
    def amplitude(self) -> float:
        if self.tag == "two-squares":
            return -1.0 / PI
        if self.tag == "divisor":
            return 1.0 / (math.sqrt(2.0) * PI)
        return 1.0 / (PI * math.sqrt(2.0))

    @property
    def x_power(self) -> float:
        if self.tag == "cusp":
            return self.kappa / 2 - 0.25
        return 0.25

    def weights(self, table: ArithTable, nmax: int) -> np.ndarray:
        """f(n) for n = 0..nmax as float64 (index 0 unused).

        cusp: the normalized coefficients tau(n) n^(-(kappa-1)/2).
        alternating-divisor: (-1)^n d(n).
        """
        if self.tag == "cusp":
            if self.kappa != 12:
                raise RangeError(
                    f"built-in cusp coefficients cover weight 12 only, got {self.kappa}")
            if nmax > table.tau_limit:
                raise RangeError(
                    f"need cusp coefficients to n={nmax}, table has tau_limit="
                    f"{table.tau_limit}")
            out = np.zeros(nmax + 1)
            out[1:] = [float(t) for t in table.tau[1:nmax + 1]]
            out[1:] *= np.arange(1, nmax + 1, dtype=np.float64) ** -5.5
            return out
        if nmax > table.limit:
            raise RangeError(
                f"need coefficients to n={nmax}, table limit is {table.limit}")
        if self.tag == "divisor":
            return table.d[:nmax + 1].astype(np.float64)
        if self.tag == "two-squares":
            return table.r[:nmax + 1].astype(np.float64)
        out = table.d[:nmax + 1].astype(np.float64)
        out[1::2] *= -1.0
        return out

    def series_weights(self, table: ArithTable, nmax: int) -> np.ndarray:
        """f(n) n^(-3/4) for n = 0..nmax (index 0 is zero)."""
        w = self.weights(table, nmax)
        w[1:] *= np.arange(1, nmax + 1, dtype=np.float64) ** -0.75
        return w


DIVISOR = CoefficientKind("divisor")
TWO_SQUARES = CoefficientKind("two-squares")
CUSP12 = CoefficientKind("cusp", kappa=12)
ALTERNATING = CoefficientKind("alternating-divisor")

_BY_NAME = {
    "d": DIVISOR, "divisor": DIVISOR,
    "r": TWO_SQUARES, "two-squares": TWO_SQUARES,
    "a": CUSP12, "cusp": CUSP12,
    "dstar": ALTERNATING, "alternating-divisor": ALTERNATING,
}


def coefficient_kind(name: str, kappa: int | None = None) -> CoefficientKind:
    """Resolve a CLI-style kind name (d | r | a | dstar)."""
    try:
        base = _BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown coefficient kind name {name!r}") from None
    if base.tag == "cusp" and kappa is not None and kappa != 12:
        return CoefficientKind("cusp", kappa=kappa)
    return base


class ErrorTermKind(Enum):
    """The four exactly computable error terms."""

    DIVISOR = "delta"
    TWO_SQUARES = "p"
    CUSP = "a"
    ALTERNATING = "delta-star"

    @property
    def coefficient_kind(self) -> CoefficientKind:
        return {
            ErrorTermKind.DIVISOR: DIVISOR,
            ErrorTermKind.TWO_SQUARES: TWO_SQUARES,
            ErrorTermKind.CUSP: CUSP12,
            ErrorTermKind.ALTERNATING: ALTERNATING,
        }[self]


def error_term_kind(name: str) -> ErrorTermKind:
    for kind in ErrorTermKind:
        if kind.value == name:
            return kind
    raise ValueError(f"unknown error-term kind {name!r}")
