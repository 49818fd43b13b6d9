"""Exact integer arithmetic: sieves, Kronecker symbols, multiplicative tables.

Everything here is integer-exact except the von Mangoldt table, which stores
``log p`` in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapacityError, DomainError, ParameterError

SEGMENT_LENGTH = 1 << 20
MAX_TABLE_SIZE = 1 << 28


@dataclass(frozen=True)
class PrimeTable:
    """Primes in ``[lo, hi]``, optionally restricted to ``p = 1 (mod 8)``."""

    lo: int
    hi: int
    primes: np.ndarray = field(repr=False)
    filter_1mod8: bool = False

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(int(p) for p in self.primes)

    def __contains__(self, n) -> bool:
        i = np.searchsorted(self.primes, n)
        return bool(i < len(self.primes) and self.primes[i] == n)


def _base_primes(limit: int) -> np.ndarray:
    """Plain Eratosthenes up to ``limit`` inclusive."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(limit + 1, dtype=bool)
    mark[:2] = False
    for q in range(2, math.isqrt(limit) + 1):
        if mark[q]:
            mark[q * q :: q] = False
    return np.flatnonzero(mark).astype(np.int64)


def sieve_primes(
    lo: int, hi: int, filter_1mod8: bool = False, segment: int = SEGMENT_LENGTH
) -> PrimeTable:
    """Segmented sieve of Eratosthenes over ``[lo, hi]``.

    Memory use is bounded by ``segment`` plus the base primes up to
    ``sqrt(hi)``, so ``hi`` can reach ~1e9 without a large allocation.
    """
    lo, hi = int(lo), int(hi)
    if lo < 2 or hi < lo:
        raise ParameterError(f"need 2 <= lo <= hi, got lo={lo}, hi={hi}")
    base = _base_primes(math.isqrt(hi))
    chunks = []
    start = lo
    while start <= hi:
        stop = min(start + segment - 1, hi)
        mark = np.ones(stop - start + 1, dtype=bool)
        for q in base:
            q = int(q)
            if q * q > stop:
                break
            first = max(q * q, -(-start // q) * q)
            mark[first - start :: q] = False
        found = np.flatnonzero(mark).astype(np.int64) + start
        if filter_1mod8:
            found = found[found % 8 == 1]
        chunks.append(found)
        start = stop + 1
    primes = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return PrimeTable(lo, hi, primes, filter_1mod8)


def is_prime(n: int) -> bool:
    """Trial division; meant for checks, not for bulk work."""
    n = int(n)
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for q in range(3, math.isqrt(n) + 1, 2):
        if n % q == 0:
            return False
    return True


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol ``(a/n)`` by the binary (shift and swap) algorithm.

    Defined for every pair of integers; agrees with the Legendre symbol when
    ``n`` is an odd prime and with the Jacobi symbol when ``n`` is odd and
    positive.
    """
    a, n = int(a), int(n)
    if n == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0

    sign = 1
    v = (n & -n).bit_length() - 1
    n >>= v
    if v & 1 and a % 8 in (3, 5):
        sign = -sign
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign

    # n is now odd and positive: Jacobi symbol
    a %= n
    while a:
        v = (a & -a).bit_length() - 1
        a >>= v
        if v & 1 and n % 8 in (3, 5):
            sign = -sign
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a, n = n % a, a
    return sign if n == 1 else 0


def legendre_table(p: int) -> np.ndarray:
    """``chi[r] = (r/p)`` for ``r = 0..p-1`` and an odd prime ``p``.

    Built from the set of squares, so it costs O(p) and no symbol
    evaluations.
    """
    p = int(p)
    if p < 3 or p % 2 == 0:
        raise DomainError(f"legendre_table needs an odd prime, got {p}")
    chi = np.full(p, -1, dtype=np.int8)
    k = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    chi[(k * k) % p] = 1
    chi[0] = 0
    return chi


def jacobi_table(m: int) -> np.ndarray:
    """``t[r] = (r/m)`` for ``r = 0..m-1`` and odd ``m >= 1``.

    ``(d/m)`` depends only on ``d mod m`` when ``m`` is odd and positive, so
    ``t[d % m]`` evaluates the symbol for any integer ``d``.
    """
    m = int(m)
    if m < 1 or m % 2 == 0:
        raise DomainError(f"jacobi_table needs odd m >= 1, got {m}")
    if m == 1:
        return np.ones(1, dtype=np.int8)
    t = np.ones(m, dtype=np.int8)
    rest = m
    q = 3
    while rest > 1:
        if q * q > rest:
            q = rest
        if rest % q == 0:
            lt = legendre_table(q)
            while rest % q == 0:
                t *= lt[np.arange(m) % q]
                rest //= q
        q += 2
    return t


@dataclass(frozen=True)
class QuadChar:
    """Real character ``n -> (D/n)`` given by the Kronecker symbol.

    ``modulus`` is ``|D|`` when ``D = 0, 1 (mod 4)``, a period of
    ``n -> (D/n)`` on all ``n >= 0``.  Otherwise it is ``4|D|``, a period on
    odd ``n`` only (``(3/2) = -1`` but ``(3/14) = 1``).
    """

    D: int

    @property
    def modulus(self) -> int:
        return abs(self.D) if self.D % 4 in (0, 1) else 4 * abs(self.D)

    @property
    def is_even(self) -> bool:
        return self.D > 0

    def __call__(self, n: int) -> int:
        return kronecker(self.D, n)

    def values(self, n: np.ndarray) -> np.ndarray:
        """Vectorised evaluation through one period table."""
        return self.period_table[np.asarray(n, dtype=np.int64) % self.modulus]

    @cached_property
    def period_table(self) -> np.ndarray:
        q = self.modulus
        return np.array([kronecker(self.D, r) for r in range(q)], dtype=np.int8)


@dataclass(frozen=True)
class MultTables:
    """Tables of ``mu``, ``d``, ``Lambda``, smallest prime factor, squarefree.

    Index ``n`` holds the value at ``n`` for ``0 <= n <= N``; index 0 is
    padding and holds zeros.
    """

    N: int
    mu: np.ndarray = field(repr=False)
    divisor_count: np.ndarray = field(repr=False)
    mangoldt: np.ndarray = field(repr=False)
    spf: np.ndarray = field(repr=False)
    squarefree: np.ndarray = field(repr=False)

    def factor(self, n: int) -> list[tuple[int, int]]:
        """Prime factorisation ``[(p, e), ...]`` through the spf table."""
        n = int(n)
        if not 1 <= n <= self.N:
            raise CapacityError(f"n={n} outside table range 1..{self.N}")
        out: list[tuple[int, int]] = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def divisors(self, n: int) -> list[int]:
        divs = [1]
        for p, e in self.factor(n):
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


def smallest_prime_factors(N: int) -> np.ndarray:
    """``spf[n]`` for ``0 <= n <= N`` (``spf[0] = 0``, ``spf[1] = 1``)."""
    N = int(N)
    if N > MAX_TABLE_SIZE:
        raise CapacityError(f"N={N} exceeds table capacity {MAX_TABLE_SIZE}")
    spf = np.zeros(N + 1, dtype=np.int64)
    for q in range(2, math.isqrt(N) + 1):
        if spf[q] == 0:
            seg = spf[q * q :: q]
            seg[seg == 0] = q
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[: min(2, N + 1)] = [0, 1][: min(2, N + 1)]
    return spf


def build_mult_tables(N: int) -> MultTables:
    """Sieve ``mu``, ``d(n)``, ``Lambda(n)``, spf and the squarefree flag."""
    N = int(N)
    if N < 2:
        raise ParameterError(f"need N >= 2, got {N}")
    if N > MAX_TABLE_SIZE:
        raise CapacityError(f"N={N} exceeds table capacity {MAX_TABLE_SIZE}")

    spf = smallest_prime_factors(N)
    primes = np.flatnonzero(spf == np.arange(N + 1))
    primes = primes[primes >= 2]

    mu = np.ones(N + 1, dtype=np.int8)
    mangoldt = np.zeros(N + 1, dtype=np.float64)
    divisor_count = np.ones(N + 1, dtype=np.int64)
    for q in primes:
        q = int(q)
        mu[q::q] *= -1
        if q * q <= N:
            mu[q * q :: q * q] = 0
        # exponent of q in q*j for j = 1..N//q
        expo = np.ones(N // q, dtype=np.int64)
        qk = q * q
        while qk <= N:
            expo[qk // q - 1 :: qk // q] += 1
            qk *= q
        divisor_count[q::q] *= expo + 1
        lq = math.log(q)
        qk = q
        while qk <= N:
            mangoldt[qk] = lq
            qk *= q
    mu[0] = 0
    divisor_count[0] = 0
    return MultTables(
        N=N,
        mu=mu,
        divisor_count=divisor_count,
        mangoldt=mangoldt,
        spf=spf,
        squarefree=mu != 0,
    )


def squarefree_mask(lo: int, hi: int) -> np.ndarray:
    """Boolean mask over ``lo..hi`` marking squarefree integers."""
    lo, hi = int(lo), int(hi)
    if lo < 1 or hi < lo:
        raise ParameterError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
    mask = np.ones(hi - lo + 1, dtype=bool)
    for q in _base_primes(math.isqrt(hi)):
        q2 = int(q) * int(q)
        first = -(-lo // q2) * q2
        mask[first - lo :: q2] = False
    return mask


def squarefree_1mod8(lo: int, hi: int) -> np.ndarray:
    """Squarefree ``d = 1 (mod 8)`` with ``lo <= d <= hi``, ascending."""
    mask = squarefree_mask(lo, hi)
    d = np.arange(lo, hi + 1, dtype=np.int64)
    return d[mask & (d % 8 == 1)]
