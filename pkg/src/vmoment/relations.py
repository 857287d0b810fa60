"""Exact arithmetic on linear relations among square roots of integers.

Every balance decision happens in (s, h) coordinates -- n = s^2 h with h
squarefree -- where equality of square-root sums is equality of integer
coefficient vectors over the squarefree kernels (linear independence of
sqrt of squarefree numbers).  Floating point never decides membership.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, getcontext
from itertools import product
from typing import Iterator

import numpy as np

from .errors import GuardError

MAX_K = 9
BRUTE_FORCE_GUARD = 10 ** 9


def sqrt_decompose(n: int) -> tuple[int, int]:
    """n = s^2 h with h squarefree; returns (s, h)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return _sqrt_decompose(n)


def _sqrt_decompose(n: int) -> tuple[int, int]:
    s = 1
    for j in range(math.isqrt(n), 1, -1):
        if n % (j * j) == 0:
            s = j
            break
    return s, n // (s * s)


@dataclass(frozen=True)
class SqrtInteger:
    """sqrt(n) in exact form: n = s^2 h, sqrt(n) = s sqrt(h), h squarefree."""

    s: int
    h: int

    @classmethod
    def from_int(cls, n: int) -> "SqrtInteger":
        s, h = _sqrt_decompose(n)
        return cls(s, h)

    @property
    def n(self) -> int:
        return self.s * self.s * self.h

    def __float__(self) -> float:
        return self.s * math.sqrt(self.h)


@dataclass(frozen=True)
class Relation:
    """An ordered solution of sqrt(n_1)+..+sqrt(n_l) = sqrt(n_{l+1})+..+sqrt(n_k)."""

    k: int
    l: int
    terms: tuple[SqrtInteger, ...]

    @property
    def numbers(self) -> tuple[int, ...]:
        return tuple(t.n for t in self.terms)

    def is_balanced(self) -> bool:
        """Integer-exact per-kernel balance check."""
        acc: dict[int, int] = {}
        for i, t in enumerate(self.terms):
            sign = 1 if i < self.l else -1
            acc[t.h] = acc.get(t.h, 0) + sign * t.s
        return all(v == 0 for v in acc.values())

    def kernel_classes(self) -> dict[int, list[int]]:
        """Kernel h -> per-position s values (left first), for reporting."""
        out: dict[int, list[int]] = {}
        for t in self.terms:
            out.setdefault(t.h, []).append(t.s)
        return out


def parity_check(rel: Relation) -> bool:
    """Whether the coordinate sum is even (it always is for balanced relations)."""
    return sum(rel.numbers) % 2 == 0


def relation_from_numbers(k: int, l: int, numbers) -> Relation:
    terms = tuple(SqrtInteger.from_int(int(n)) for n in numbers)
    return Relation(k=k, l=l, terms=terms)


# ---------------------------------------------------------------------------
# structured enumeration: kernel by kernel


def _squarefree_up_to(y: int) -> list[int]:
    if y < 1:
        return []
    flags = np.ones(y + 1, dtype=bool)
    for j in range(2, math.isqrt(y) + 1):
        flags[j * j:: j * j] = False
    return [int(h) for h in np.nonzero(flags)[0] if h >= 1]


def _max_s(y: float, h: int) -> int:
    if h > y:
        return 0
    m = math.isqrt(int(y / h))
    while (m + 1) * (m + 1) * h <= y:
        m += 1
    while m >= 1 and m * m * h > y:
        m -= 1
    return m


def _balanced_s_tuples(a: int, b: int, m: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Ordered (s_1..s_a), (t_1..t_b) in [1, m]^? with equal sums, lexicographic."""
    by_sum: dict[int, list[tuple[int, ...]]] = {}
    for right in product(range(1, m + 1), repeat=b):
        by_sum.setdefault(sum(right), []).append(right)
    for left in product(range(1, m + 1), repeat=a):
        for right in by_sum.get(sum(left), ()):
            yield left, right


def _nonempty_subsets(positions: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    n = len(positions)
    for mask in range(1, 1 << n):
        yield tuple(positions[i] for i in range(n) if mask >> i & 1)


def _check_kl(k: int, l: int, max_k: int) -> None:
    if not 2 <= k <= max_k:
        raise ValueError(f"k must be in [2, {max_k}], got {k}")
    if not 1 <= l < k:
        raise ValueError(f"l must satisfy 1 <= l < k, got l={l}, k={k}")


def enumerate_relations(k: int, l: int, y: float, *,
                        max_k: int = MAX_K) -> Iterator[Relation]:
    """All ordered k-tuples (n_1..n_k) with entries <= y satisfying the
    balanced relation, generated kernel by kernel.

    For each squarefree kernel (ascending) a subset of open left and right
    positions is assigned balanced s-tuples; a tuple's kernel decomposition
    is unique, so nothing repeats and nothing is missed.  The stream order
    is deterministic.
    """
    _check_kl(k, l, max_k)
    if y < 1:
        return
    kernels = [h for h in _squarefree_up_to(int(y)) if _max_s(y, h) >= 1]
    left_all = tuple(range(l))
    right_all = tuple(range(l, k))
    assignment: list[SqrtInteger | None] = [None] * k

    def rec(idx: int, left_rem: tuple[int, ...], right_rem: tuple[int, ...]):
        if not left_rem and not right_rem:
            yield Relation(k=k, l=l, terms=tuple(assignment))  # type: ignore[arg-type]
            return
        if idx == len(kernels):
            return
        h = kernels[idx]
        m = _max_s(y, h)
        # kernel unused
        yield from rec(idx + 1, left_rem, right_rem)
        if m < 1 or not left_rem or not right_rem:
            return
        for sub_l in _nonempty_subsets(left_rem):
            rem_l = tuple(p for p in left_rem if p not in sub_l)
            for sub_r in _nonempty_subsets(right_rem):
                rem_r = tuple(p for p in right_rem if p not in sub_r)
                for s_left, s_right in _balanced_s_tuples(len(sub_l), len(sub_r), m):
                    for pos, s in zip(sub_l, s_left):
                        assignment[pos] = SqrtInteger(s, h)
                    for pos, s in zip(sub_r, s_right):
                        assignment[pos] = SqrtInteger(s, h)
                    yield from rec(idx + 1, rem_l, rem_r)
        for pos in left_rem + right_rem:
            assignment[pos] = None

    yield from rec(0, left_all, right_all)


# ---------------------------------------------------------------------------
# brute-force oracle: test every tuple with exact packed integer keys


def _guard_work(units: float, what: str) -> None:
    if units > BRUTE_FORCE_GUARD:
        raise GuardError(
            f"{what} needs ~{units:.3g} work units, guard is {BRUTE_FORCE_GUARD:g}")


def _kernel_keys(n_max: int, field_bits: int) -> np.ndarray:
    """Pack each n's (s, kernel-index) into fixed-width fields across int64
    columns; equal square-root sums become equal column vectors, exactly."""
    decomp = [_sqrt_decompose(n) for n in range(1, n_max + 1)]
    kernels = sorted({h for _, h in decomp})
    kidx = {h: i for i, h in enumerate(kernels)}
    per_col = 63 // field_bits
    ncols = (len(kernels) + per_col - 1) // per_col
    keys = np.zeros((n_max + 1, ncols), dtype=np.int64)
    for n, (s, h) in enumerate(decomp, start=1):
        i = kidx[h]
        keys[n, i // per_col] = s << (field_bits * (i % per_col))
    return keys


def brute_force_enumerate(k: int, l: int, y: float, *,
                          max_k: int = MAX_K) -> Iterator[Relation]:
    """Oracle enumeration: tests all floor(y)^k ordered tuples.

    Tuples are compared through exact packed per-kernel sums (no floating
    point).  Refuses when y^k exceeds the work guard.
    """
    _check_kl(k, l, max_k)
    n_max = int(math.floor(y))
    if n_max < 1:
        return
    _guard_work(float(n_max) ** k, f"brute force over {n_max}^{k} tuples")
    field_bits = max(1, (max(l, k - l) * math.isqrt(n_max) + 1).bit_length())
    keys = _kernel_keys(n_max, field_bits)

    def side_sums(count: int) -> np.ndarray:
        sums = keys[1:]
        for _ in range(count - 1):
            sums = (sums[:, None, :] + keys[None, 1:, :]).reshape(-1, keys.shape[1])
        return sums

    left = side_sums(l)
    right = side_sums(k - l)
    # literal all-tuples scan, chunked over left rows
    chunk = max(1, (1 << 22) // max(1, right.shape[0]))
    for lo in range(0, left.shape[0], chunk):
        hi = min(lo + chunk, left.shape[0])
        eq = (left[lo:hi, None, :] == right[None, :, :]).all(axis=2)
        for li, ri in zip(*np.nonzero(eq)):
            left_digits = _digits(lo + int(li), n_max, l)
            right_digits = _digits(int(ri), n_max, k - l)
            yield relation_from_numbers(k, l, left_digits + right_digits)


def _digits(row: int, base: int, count: int) -> list[int]:
    """Row index of the nested cartesian product back to 1-based entries."""
    out = []
    for _ in range(count):
        out.append(row % base + 1)
        row //= base
    return list(reversed(out))


# ---------------------------------------------------------------------------
# minimum nonzero gaps (Lemma-style scaling data)


def _signs(pattern: tuple[int, ...], k: int) -> np.ndarray:
    if len(pattern) != k - 1 or any(b not in (0, 1) for b in pattern):
        raise ValueError(f"sign pattern needs {k - 1} bits, got {pattern}")
    return np.array([1] + [(-1) ** b for b in pattern], dtype=np.int64)


def _exact_is_zero(numbers: tuple[int, ...], signs: np.ndarray) -> bool:
    acc: dict[int, int] = {}
    for n, sg in zip(numbers, signs):
        s, h = _sqrt_decompose(n)
        acc[h] = acc.get(h, 0) + int(sg) * s
    return all(v == 0 for v in acc.values())


def _decimal_value(numbers: tuple[int, ...], signs: np.ndarray, prec: int = 40) -> Decimal:
    ctx = getcontext().copy()
    ctx.prec = prec
    total = Decimal(0)
    for n, sg in zip(numbers, signs):
        total += int(sg) * ctx.sqrt(Decimal(n))
    return total


def min_gap(k: int, pattern: tuple[int, ...], n_max: int) -> dict:
    """Minimum nonzero |sqrt(n_1) +- sqrt(n_2) +- ... | over n_j <= n_max.

    float64 pre-screen brackets the candidates (sum error is below
    k*sqrt(n_max)*2^-50); exact zeros are removed by the kernel-coordinate
    test and survivors re-evaluated at 40 significant digits.

    Returns {"alpha_min": float, "witness": tuple, "certified_digits": int}.
    """
    signs = _signs(tuple(pattern), k)
    half = k // 2
    _guard_work(float(n_max) ** max(half, k - half), f"gap scan at N={n_max}")
    roots = np.sqrt(np.arange(n_max + 1, dtype=np.float64))

    def side(sign_slice: np.ndarray) -> np.ndarray:
        vals = np.zeros(1)
        for sg in sign_slice:
            vals = (vals[:, None] + sg * roots[None, 1:]).ravel()
        return vals

    a = side(signs[:half])
    b = -side(signs[half:])
    order_b = np.argsort(b, kind="stable")
    b_sorted = b[order_b]
    err = k * math.sqrt(n_max) * 2.0 ** -50

    # nearest-neighbor scan for the smallest |a - b|
    pos = np.searchsorted(b_sorted, a)
    best = math.inf
    for shift in (0, -1):
        idx = np.clip(pos + shift, 0, len(b_sorted) - 1)
        gaps = np.abs(a - b_sorted[idx])
        nz = gaps > err  # below err could be an exact zero
        if nz.any():
            best = min(best, float(gaps[nz].min()))

    # candidate pairs within the certified bracket of the float64 minimum
    cutoff = best + 2.0 * err
    lo = np.searchsorted(b_sorted, a - cutoff, side="left")
    hi = np.searchsorted(b_sorted, a + cutoff, side="right")
    alpha_min = None
    witness = None
    for ia in np.nonzero(hi > lo)[0]:
        for ib in range(int(lo[ia]), int(hi[ia])):
            numbers = tuple(_digits(int(ia), n_max, half)
                            + _digits(int(order_b[ib]), n_max, k - half))
            if _exact_is_zero(numbers, signs):
                continue
            val = abs(_decimal_value(numbers, signs))
            fval = float(val)
            if alpha_min is None or fval < alpha_min:
                alpha_min, witness = fval, numbers
    if alpha_min is None:
        raise ArithmeticError("no nonzero combination found (degenerate input)")
    return {"alpha_min": alpha_min, "witness": witness, "certified_digits": 40}


def count_inequality_solutions(n_ranges, pattern, delta: float) -> int:
    """Exact count of tuples with N_j < n_j <= 2 N_j and
    |sum of signed square roots| < delta.

    Borderline values (within float error of delta) are settled at 40
    digits so the count matches exact real arithmetic.
    """
    n_ranges = tuple(int(v) for v in n_ranges)
    k = len(n_ranges)
    signs = _signs(tuple(pattern), k)
    if delta <= 0:
        raise ValueError("delta must be positive")
    work = 1.0
    for v in n_ranges:
        work *= v
    _guard_work(work, f"counting over ranges {n_ranges}")
    half = k // 2

    def side(idx_from: int, idx_to: int) -> np.ndarray:
        vals = np.zeros(1)
        for j in range(idx_from, idx_to):
            lo, hi = n_ranges[j], 2 * n_ranges[j]
            roots = np.sqrt(np.arange(lo + 1, hi + 1, dtype=np.float64))
            vals = (vals[:, None] + int(signs[j]) * roots[None, :]).ravel()
        return vals

    a = side(0, half)
    b = -side(half, k)
    b_sorted = np.sort(b, kind="stable")
    e_max = max(n_ranges) * 2
    err = k * math.sqrt(e_max) * 2.0 ** -50

    inside = (np.searchsorted(b_sorted, a + (delta - err), side="left")
              - np.searchsorted(b_sorted, a - (delta - err), side="right"))
    total = int(np.maximum(inside, 0).sum())

    # settle the boundary band exactly
    for bound_lo, bound_hi in ((delta - err, delta + err),
                               (-delta - err, -delta + err)):
        lo_idx = np.searchsorted(b_sorted, a + bound_lo, side="left")
        hi_idx = np.searchsorted(b_sorted, a + bound_hi, side="right")
        for ia in np.nonzero(hi_idx > lo_idx)[0]:
            for ib in range(int(lo_idx[ia]), int(hi_idx[ia])):
                numbers = _border_numbers(int(ia), ib, b, b_sorted, n_ranges,
                                          half, k)
                val = abs(_decimal_value(numbers, signs))
                if val < Decimal(repr(delta)):
                    total += 1
    return total


def _border_numbers(ia: int, ib_sorted: int, b: np.ndarray, b_sorted: np.ndarray,
                    n_ranges, half: int, k: int) -> tuple[int, ...]:
    order = np.argsort(b, kind="stable")
    ib = int(order[ib_sorted])
    out = []
    row = ia
    for j in reversed(range(half)):
        size = n_ranges[j]
        out.append(n_ranges[j] + 1 + row % size)
        row //= size
    left = list(reversed(out))
    out = []
    row = ib
    for j in reversed(range(half, k)):
        size = n_ranges[j]
        out.append(n_ranges[j] + 1 + row % size)
        row //= size
    return tuple(left + list(reversed(out)))


def count_bound_value(n_ranges, delta: float) -> float:
    """The Lemma-style envelope Delta*E^(-1/2)*prod(N) + E^(-1)*prod(N)."""
    prod = 1.0
    for v in n_ranges:
        prod *= float(v)
    e_max = float(max(n_ranges))
    return delta * prod / math.sqrt(e_max) + prod / e_max
