"""Sieved arithmetic tables: divisor counts, two-square representation
counts, Moebius values, squarefree kernels and weight-12 cusp-form
coefficients, plus a binary cache format.

All tables are built once and immutable afterwards; every accessor is pure,
so a table can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import RangeError, ResourceError

DEFAULT_SEGMENT = 1 << 22
DEFAULT_TAU_LIMIT = 10_000

CACHE_MAGIC = b"VMAT1\x00"
_MASK64 = (1 << 64) - 1


@dataclass(eq=False)
class ArithTable:
    """Value tables for n = 1..limit (index 0 is an unused sentinel).

    d:      divisor counts, int32
    r:      number of (x, y) in Z^2 with x^2 + y^2 = n, int32
    mu:     Moebius function, int8
    kernel: squarefree kernel h with n = s^2 h, int64
    tau:    exact weight-12 cusp form coefficients for n <= tau_limit
            (Python ints: beyond n ~ 2000 the values exceed 64 bits)
    """

    limit: int
    tau_limit: int
    d: np.ndarray
    r: np.ndarray
    mu: np.ndarray
    kernel: np.ndarray
    tau: list[int]
    _cache: dict = field(default_factory=dict, repr=False)

    def d_at(self, n: int) -> int:
        self._check(n, self.limit)
        return int(self.d[n])

    def r_at(self, n: int) -> int:
        self._check(n, self.limit)
        return int(self.r[n])

    def mu_at(self, n: int) -> int:
        self._check(n, self.limit)
        return int(self.mu[n])

    def kernel_at(self, n: int) -> int:
        self._check(n, self.limit)
        return int(self.kernel[n])

    def tau_at(self, n: int) -> int:
        if not 1 <= n <= self.tau_limit:
            raise RangeError(
                f"tau({n}) out of range: table holds n <= {self.tau_limit}, "
                f"need tau_limit >= {n}")
        return self.tau[n]

    @staticmethod
    def _check(n: int, limit: int) -> None:
        if not 1 <= n <= limit:
            raise RangeError(f"n={n} outside table range 1..{limit}")


def tau(table: ArithTable, n: int) -> int:
    """n-th coefficient of the weight-12 cusp form (normalized, tau(1)=1)."""
    return table.tau_at(n)


# ---------------------------------------------------------------------------
# sieves


def _divisor_sieve(limit: int) -> np.ndarray:
    # pair (a, n/a) with a <= sqrt(n): +2 per pair, squares counted once
    d = np.zeros(limit + 1, dtype=np.int32)
    root = math.isqrt(limit)
    for a in range(1, root + 1):
        d[a * a:: a] += 2
        d[a * a] -= 1
    return d


def _two_squares_sieve(limit: int) -> np.ndarray:
    # r(n) = 4 * sum over odd m | n of (-1)^((m-1)/2)
    r = np.zeros(limit + 1, dtype=np.int32)
    half = limit // 2
    for m in range(1, half + 1, 4):
        r[m::m] += 4
    for m in range(3, half + 1, 4):
        r[m::m] -= 4
    # m > limit/2 divides only n = m itself
    n = np.arange(half + 1, limit + 1)
    upper = np.zeros(limit - half, dtype=np.int32)
    upper[n % 4 == 1] = 4
    upper[n % 4 == 3] = -4
    r[half + 1:] += upper
    return r


def _square_part_sieve(limit: int) -> np.ndarray:
    # s[n] = largest s with s^2 | n; ascending overwrite keeps the maximum
    s = np.ones(limit + 1, dtype=np.int64)
    for j in range(2, math.isqrt(limit) + 1):
        jj = j * j
        s[jj::jj] = j
    return s


def _mu_sieve(limit: int, kernel: np.ndarray) -> np.ndarray:
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p:: p] = False
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in np.nonzero(is_prime)[0]:
        mu[p::p] *= -1
    mu[kernel != np.arange(limit + 1, dtype=np.int64)] = 0
    return mu


# ---------------------------------------------------------------------------
# weight-12 coefficients from (E4^3 - E6^2)/1728, exact integer series


def _sigma_list(nmax: int, e: int) -> list[int]:
    sig = [0] * (nmax + 1)
    for dd in range(1, nmax + 1):
        de = dd ** e
        for m in range(dd, nmax + 1, dd):
            sig[m] += de
    return sig


def _poly_mul_nonneg(a: list[int], b: list[int], n_out: int) -> list[int]:
    """Product of integer power series with nonnegative coefficients.

    Coefficients are packed into one big integer (fixed-width limbs) so a
    single bignum multiplication carries out the whole convolution exactly.
    """
    bound = max(a) * max(b) * min(len(a), len(b)) + 1
    nbytes = (bound.bit_length() + 7) // 8 + 1
    pa = int.from_bytes(
        b"".join(c.to_bytes(nbytes, "little") for c in a), "little")
    pb = int.from_bytes(
        b"".join(c.to_bytes(nbytes, "little") for c in b), "little")
    prod = pa * pb
    raw = prod.to_bytes(nbytes * (len(a) + len(b)) + 16, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little")
            for i in range(n_out)]


def _tau_series(nmax: int) -> list[int]:
    """tau(n) for n = 0..nmax (tau[0] = 0), exact."""
    if nmax < 1:
        return [0] * (nmax + 1)
    n1 = nmax + 1
    p3 = _sigma_list(nmax, 3)   # E4 = 1 + 240 sum sigma_3(n) q^n
    p5 = _sigma_list(nmax, 5)   # E6 = 1 - 504 sum sigma_5(n) q^n
    p3sq = _poly_mul_nonneg(p3, p3, n1)
    p3cu = _poly_mul_nonneg(p3sq, p3, n1)
    p5sq = _poly_mul_nonneg(p5, p5, n1)
    out = [0] * n1
    for n in range(1, n1):
        # E4^3 - E6^2 = 720 sigma_3 q + ... expanded via binomials
        diff = (3 * 240 * p3[n] + 3 * 240 ** 2 * p3sq[n] + 240 ** 3 * p3cu[n]
                + 2 * 504 * p5[n] - 504 ** 2 * p5sq[n])
        q, rem = divmod(diff, 1728)
        if rem:
            raise ArithmeticError(f"cusp coefficient at n={n} not divisible by 1728")
        out[n] = q
    return out


# ---------------------------------------------------------------------------
# construction


def build_tables(limit: int, tau_limit: int | None = None,
                 segment_size: int = DEFAULT_SEGMENT) -> ArithTable:
    """Sieve every table up to `limit` (and tau up to `tau_limit`).

    O(limit log limit) time; allocates only the value tables themselves.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if tau_limit is None:
        tau_limit = min(DEFAULT_TAU_LIMIT, limit)
    if tau_limit > limit:
        raise ValueError(f"tau_limit={tau_limit} exceeds limit={limit}")
    approx_bytes = 17 * (limit + 1)
    try:
        d = _divisor_sieve(limit)
        r = _two_squares_sieve(limit)
        square_part = _square_part_sieve(limit)
        n = np.arange(limit + 1, dtype=np.int64)
        kernel = np.empty(limit + 1, dtype=np.int64)
        # segmented to keep the quotient temporary bounded
        for lo in range(0, limit + 1, segment_size):
            hi = min(lo + segment_size, limit + 1)
            kernel[lo:hi] = n[lo:hi] // (square_part[lo:hi] * square_part[lo:hi])
        kernel[0] = 0
        del square_part
        mu = _mu_sieve(limit, kernel)
    except MemoryError as exc:
        raise ResourceError(
            f"cannot allocate tables for limit={limit} "
            f"(~{approx_bytes} bytes requested)") from exc
    tau_values = _tau_series(tau_limit)
    return ArithTable(limit=limit, tau_limit=tau_limit, d=d, r=r, mu=mu,
                      kernel=kernel, tau=tau_values)


# ---------------------------------------------------------------------------
# binary cache

_HEADER = CACHE_MAGIC


def _word_sum(arr: np.ndarray) -> int:
    return int(arr.astype(np.int64).astype(np.uint64).sum(dtype=np.uint64))


def save_cache(table: ArithTable, path: str) -> None:
    """Write the table in the fixed little-endian cache layout.

    tau entries are stored as signed 64-bit words; exact coefficients grow
    past 2^63 a little beyond n = 2000, in which case the format cannot
    represent the table and we refuse rather than truncate.
    """
    for i, t in enumerate(table.tau):
        if not -(1 << 63) <= t < (1 << 63):
            raise ResourceError(
                f"tau({i}) = {t} does not fit the cache's signed 64-bit slot; "
                f"cacheable tables need tau_limit <= ~2000")
    tau_arr = np.array(table.tau[1:], dtype=np.int64) if table.tau_limit else \
        np.zeros(0, dtype=np.int64)
    blocks = [
        table.d[1:].astype("<i4"),
        table.r[1:].astype("<i4"),
        table.mu[1:].astype("<i1"),
        table.kernel[1:].astype("<i8"),
        tau_arr.astype("<i8"),
    ]
    checksum = 0
    for b in blocks:
        checksum = (checksum + _word_sum(b)) & _MASK64
    with open(path, "wb") as fh:
        fh.write(_HEADER)
        fh.write(np.array([table.limit, table.tau_limit], dtype="<u8").tobytes())
        for b in blocks:
            fh.write(b.tobytes())
        fh.write(np.array([checksum], dtype="<u8").tobytes())


def load_cache(path: str) -> ArithTable:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:6] != _HEADER:
        raise ValueError(f"{path}: not a table cache (bad magic)")
    limit, tau_limit = (int(v) for v in np.frombuffer(raw[6:22], dtype="<u8"))
    off = 22
    sizes = [(limit, "<i4"), (limit, "<i4"), (limit, "<i1"),
             (limit, "<i8"), (tau_limit, "<i8")]
    blocks = []
    for count, dtype in sizes:
        nbytes = count * np.dtype(dtype).itemsize
        blocks.append(np.frombuffer(raw[off:off + nbytes], dtype=dtype))
        off += nbytes
    stored = int(np.frombuffer(raw[off:off + 8], dtype="<u8")[0])
    checksum = 0
    for b in blocks:
        checksum = (checksum + _word_sum(b)) & _MASK64
    if checksum != stored:
        raise ValueError(f"{path}: checksum mismatch, cache is corrupt")

    def _with_zero(arr: np.ndarray, dtype) -> np.ndarray:
        out = np.zeros(len(arr) + 1, dtype=dtype)
        out[1:] = arr
        return out

    return ArithTable(
        limit=limit, tau_limit=tau_limit,
        d=_with_zero(blocks[0], np.int32),
        r=_with_zero(blocks[1], np.int32),
        mu=_with_zero(blocks[2], np.int8),
        kernel=_with_zero(blocks[3], np.int64),
        tau=[0] + [int(t) for t in blocks[4]],
    )
