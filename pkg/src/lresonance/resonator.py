"""The resonator: multiplicative weights on squarefree products of window
primes, and the twisted sum ``R(d) = sum_m b(m) (d/m)``.

With ``M = X^theta`` and ``L = sqrt(log M log log M)``, a window prime ``q``
gets ``b(q) = L / (sqrt(q) log q)``.  The default window is
``[L^2, exp((log L)^2)]``, which is empty for every X reachable on a desk;
experiments pass an explicit window instead.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import jacobi_table, kronecker, sieve_primes
from .errors import CapacityError, DomainError, ParameterError

log = logging.getLogger(__name__)

SUPPORT_CAPACITY = 10**7
STRICT_THETA_MAX = Fraction(1, 19)


@dataclass(frozen=True)
class ResonatorParams:
    """Scale, length exponent and prime window of a resonator.

    ``window=None`` selects the default window ``[L^2, exp((log L)^2)]``.
    ``strict`` enforces ``theta <= 1/19`` and forbids overrides.
    ``M`` may be given directly to override ``X^theta``.
    """

    X: int
    theta: float
    window: tuple[float, float] | None = None
    strict: bool = False
    M_override: float | None = None

    def __post_init__(self):
        if self.X < 2:
            raise ParameterError(f"X must be >= 2, got {self.X}")
        if not 0 < self.theta < 1:
            raise ParameterError(f"theta must lie in (0, 1), got {self.theta}")
        if self.strict:
            if Fraction(self.theta).limit_denominator(10**6) > STRICT_THETA_MAX:
                raise ParameterError(f"strict mode needs theta <= 1/19, got {self.theta}")
            if self.window is not None or self.M_override is not None:
                raise ParameterError("strict mode does not accept overrides")
        if not self.M < self.X / 2:
            raise ParameterError(f"need M < X/2, got M={self.M:g}, X={self.X}")
        if self.window is not None and self.window[0] > self.window[1]:
            raise ParameterError(f"window bounds out of order: {self.window}")

    @property
    def M(self) -> float:
        if self.M_override is not None:
            return float(self.M_override)
        return float(self.X) ** self.theta

    @property
    def scale_L(self) -> float:
        """``sqrt(log M log log M)``; NaN when ``M <= e`` (loglog not positive)."""
        lm = math.log(self.M) if self.M > 1 else 0.0
        if lm <= 1.0:
            return float("nan")
        return math.sqrt(lm * math.log(lm))

    @property
    def default_window(self) -> tuple[float, float]:
        L = self.scale_L
        if not L > 1.0:
            return (float("inf"), 0.0)
        return (L * L, math.exp(math.log(L) ** 2))

    @property
    def effective_window(self) -> tuple[float, float]:
        return self.window if self.window is not None else self.default_window

    @property
    def overridden(self) -> bool:
        return self.window is not None or self.M_override is not None

    def window_primes(self, cap_at_M: bool = True) -> np.ndarray:
        """Odd primes in the window; only those up to ``M`` can divide a
        support element, but Euler products run over the whole window."""
        lo, hi = self.effective_window
        if cap_at_M:
            hi = min(hi, self.M)
        if not lo <= hi:
            return np.zeros(0, dtype=np.int64)
        lo_i = max(3, math.ceil(lo))
        hi_i = math.floor(hi)
        if hi_i < lo_i:
            return np.zeros(0, dtype=np.int64)
        return sieve_primes(lo_i, hi_i).primes


def b_prime(q: int, params: ResonatorParams) -> float:
    """``L / (sqrt(q) log q)``."""
    return params.scale_L / (math.sqrt(q) * math.log(q))


def b_coeff(m: int, params: ResonatorParams) -> float:
    """Multiplicative weight: product of ``b(q)`` over ``q | m`` when ``m`` is
    a squarefree product of window primes, else 0."""
    m = int(m)
    if m < 1:
        raise DomainError(f"b(m) needs m >= 1, got {m}")
    if m == 1:
        return 1.0
    lo, hi = params.effective_window
    out = 1.0
    rest = m
    q = 2
    while q * q <= rest:
        if rest % q == 0:
            rest //= q
            if rest % q == 0 or q == 2 or not lo <= q <= hi:
                return 0.0
            out *= b_prime(q, params)
        q += 1
    if rest > 1:
        if rest == 2 or not lo <= rest <= hi:
            return 0.0
        out *= b_prime(rest, params)
    return out


@dataclass(frozen=True)
class Resonator:
    """Support (ascending) and weights of a resonator."""

    params: ResonatorParams
    primes: np.ndarray = field(repr=False)
    support: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.support)

    @property
    def degenerate(self) -> bool:
        return len(self.support) == 1

    def coefficient(self, m: int) -> float:
        i = np.searchsorted(self.support, m)
        if i < len(self.support) and self.support[i] == m:
            return float(self.coeffs[i])
        return 0.0

    def values(self, d: np.ndarray) -> np.ndarray:
        """``R(d)`` for an array of integers, through per-``m`` period tables."""
        d = np.asarray(d, dtype=np.int64)
        out = np.zeros(d.shape, dtype=np.float64)
        for m, b in zip(self.support.tolist(), self.coeffs.tolist()):
            out += b * jacobi_table(m)[d % m]
        return out


def enumerate_support(params: ResonatorParams) -> Resonator:
    """All squarefree products of window primes up to ``M`` with their weights.

    Depth-first over the ascending window primes; the result is sorted.
    """
    primes = params.window_primes()
    if len(primes) == 0:
        lo, hi = params.effective_window
        log.warning(
            "resonator window [%g, %g] holds no odd prime <= M=%g; support is {1}",
            lo, hi, params.M,
        )
    M = params.M
    bq = [b_prime(int(q), params) for q in primes]
    support: list[int] = [1]
    coeffs: list[float] = [1.0]
    stack = [(0, 1, 1.0)]
    while stack:
        start, m, b = stack.pop()
        for i in range(start, len(primes)):
            q = int(primes[i])
            mq = m * q
            if mq > M:
                break
            support.append(mq)
            coeffs.append(b * bq[i])
            if len(support) > SUPPORT_CAPACITY:
                raise CapacityError(f"resonator support exceeds {SUPPORT_CAPACITY}")
            stack.append((i + 1, mq, b * bq[i]))
    order = np.argsort(support, kind="stable")
    return Resonator(
        params,
        np.asarray(primes, dtype=np.int64),
        np.asarray(support, dtype=np.int64)[order],
        np.asarray(coeffs, dtype=np.float64)[order],
    )


def resonate(d: int, res: Resonator) -> float:
    """``R(d) = sum_m b(m) (d/m)`` over the support, in ascending ``m``."""
    d = int(d)
    if d % 8 != 1:
        raise DomainError(f"resonate expects d = 1 (mod 8), got {d}")
    total = 0.0
    for m, b in zip(res.support.tolist(), res.coeffs.tolist()):
        total += b * kronecker(d, m)
    return total
