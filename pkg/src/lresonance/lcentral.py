"""Central values ``L(1/2, chi_p)`` for primes ``p = 1 (mod 8)``.

Two independent routes:

* ``l_central_afe``: the smoothed sum over odd ``n`` with kernel ``V``,
  ``L = 2/(1-1/sqrt 2)^2 sum_{odd n} chi_p(n) n^(-1/2) V(n sqrt(pi/p))``.
* ``l_central_oracle``: ``p^(-1/2) sum_{a=1}^{p} chi_p(a) zeta(1/2, a/p)``.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from . import _fast
from .arith import is_prime, legendre_table, sieve_primes, smallest_prime_factors
from .errors import CapacityError, DomainError
from .kernels import AFE_FACTOR_AT_ZERO, VKernel, VTable, build_vtable
from .specfun import PI, hurwitz_zeta

AFE_PREFACTOR = 2.0 / AFE_FACTOR_AT_ZERO**2
ORACLE_MAX_P = 10**6
# (largest X, log2 of y_max) for scans
SCALE_TRUNCATION = ((5_000, 17), (50_000, 14), (500_000, 12), (10**7, 10))


@dataclass(frozen=True)
class AfeParams:
    """Truncation and kernel settings for the smoothed sum.

    The sum stops at ``n <= y_max sqrt(p/pi)``, i.e. where the kernel argument
    passes ``y_max``.  ``|V(y)|`` is about 1e-10 at ``y = 1e4`` and 3e-15 at
    ``1e5``; the default ``2^17`` leaves a tail far below 1e-10.
    """

    log2_y_max: int = 17
    kernel: VKernel = field(default_factory=VKernel)
    pieces: int = 8
    degree: int = 8

    @property
    def y_max(self) -> float:
        return math.ldexp(1.0, self.log2_y_max)

    @cached_property
    def table(self) -> VTable:
        return build_vtable(
            self.kernel, k_max=self.log2_y_max, pieces=self.pieces, degree=self.degree
        )

    def cutoff(self, p: int) -> int:
        return int(self.y_max * math.sqrt(p / PI))

    @classmethod
    def for_scale(cls, X: int) -> "AfeParams":
        """Truncation matched to the family size.

        Measured truncation error at ``p`` between 1e5 and 2e6 is about 1e-6,
        1e-8, 1e-10 and 1e-14 for ``log2_y_max`` = 10, 12, 14, 16; the cost is
        linear in ``y_max``.
        """
        for bound, k in SCALE_TRUNCATION:
            if X <= bound:
                return afe_params(k)
        return afe_params(SCALE_TRUNCATION[-1][1])


@lru_cache(maxsize=None)
def afe_params(log2_y_max: int) -> AfeParams:
    """Shared default-kernel parameters per truncation level, so the
    interpolation table is built once."""
    return AfeParams(log2_y_max=log2_y_max)


@dataclass(frozen=True)
class LValueRecord:
    p: int
    value: float
    method: str
    terms: int


def _check_family_prime(p: int) -> None:
    if p % 8 != 1 or not is_prime(p):
        raise DomainError(f"p={p} is not a prime = 1 (mod 8)")


_SPF_CACHE: list[np.ndarray] = []
_SPF_LOCK = threading.Lock()


def _spf_upto(n: int) -> np.ndarray:
    with _SPF_LOCK:
        if not _SPF_CACHE or len(_SPF_CACHE[0]) <= n:
            _SPF_CACHE[:] = [smallest_prime_factors(max(n, 1 << 16))]
        return _SPF_CACHE[0]


def _character_values(p: int, n_max: int) -> np.ndarray:
    """``(r/p)`` indexed by residue; only ``r <= n_max`` when that is below p."""
    if n_max < p:
        spf = _spf_upto(n_max)
        return _fast.character_prefix(p, spf, n_max, np.empty(n_max + 1, dtype=np.int8))
    return _fast.legendre_into(p, np.empty(p, dtype=np.int8))


def _afe_value(p: int, params: AfeParams) -> LValueRecord:
    tab = params.table
    n_max = params.cutoff(p)
    chi = _character_values(p, n_max)
    s = _fast.afe_odd_sum(
        p, chi, tab.coef, tab.k_min, tab.k_max, tab.pieces, math.sqrt(PI / p), n_max
    )
    return LValueRecord(p, AFE_PREFACTOR * s, "afe", (n_max + 1) // 2)


def l_central_afe(p: int, params: AfeParams | None = None) -> LValueRecord:
    """``L(1/2, chi_p)`` from the smoothed sum over odd ``n``."""
    p = int(p)
    _check_family_prime(p)
    return _afe_value(p, params or DEFAULT_AFE)


def l_central_oracle(p: int) -> LValueRecord:
    """``L(1/2, chi_p)`` through Hurwitz zeta values; O(p) work."""
    p = int(p)
    _check_family_prime(p)
    if p > ORACLE_MAX_P:
        raise CapacityError(f"oracle is capped at p <= {ORACLE_MAX_P}, got {p}")
    chi = legendre_table(p)
    a = np.arange(1, p, dtype=np.int64)
    z = hurwitz_zeta(0.5, a / p)
    if np.max(np.abs(z.imag)) > 1e-10:
        raise ArithmeticError("Hurwitz values at real s came back complex")
    vals = chi[a].astype(np.float64) * z.real
    total = _fast.kahan_dot(vals, np.ones_like(vals))
    return LValueRecord(p, total / math.sqrt(p), "oracle", p - 1)


def family_primes(X: int) -> np.ndarray:
    """Primes ``p = 1 (mod 8)`` with ``X < p <= 2X``."""
    return sieve_primes(int(X) + 1, 2 * int(X), filter_1mod8=True).primes


def batch_l_values(
    X: int, params: AfeParams | None = None, threads: int = 1
) -> list[LValueRecord]:
    """AFE values for every family prime in ``(X, 2X]``, ordered by ``p``.

    Each value is one sequential compiled sum, so the output is bit-identical
    for every ``threads``.
    """
    params = params or DEFAULT_AFE
    _ = params.table
    primes = [int(p) for p in family_primes(X)]
    if primes:
        _spf_upto(min(params.cutoff(primes[-1]), primes[-1]))
    if threads <= 1:
        return [_afe_value(p, params) for p in primes]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda p: _afe_value(p, params), primes))


DEFAULT_AFE = afe_params(17)
