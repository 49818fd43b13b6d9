"""Desk-scale checks of exact and asymptotic identities.

* Poisson main term for character sums over squarefree ``d = 1 (mod 8)``.
* The triple sum over coprime ``(q, r, s)`` against its Euler product, with
  the Rankin-trick tail bound.
* Vaughan's decomposition of the von Mangoldt function.
* Real characters attached to labels ``gamma m0 r`` and smoothed prime sums
  twisted by them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .arith import MultTables, QuadChar, jacobi_table
from .errors import CapacityError, CoverageError, DomainError, ParameterError
from .kernels import phi, phi_mellin, phi_s
from .moments import family_discriminants
from .resonator import Resonator, b_prime

TRIPLE_SUM_CAPACITY = 10**5
PHI_MELLIN_ZERO = 5.0 / 6.0


def _factor_small(n: int) -> list[tuple[int, int]]:
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out.append((q, e))
        q += 1
    if n > 1:
        out.append((n, 1))
    return out


@dataclass(frozen=True)
class PoissonCheck:
    n: int
    X: int
    lhs: float
    main_term: float
    is_square: bool

    @property
    def residual(self) -> float:
        return self.lhs - self.main_term

    @property
    def normalized_residual(self) -> float:
        return abs(self.residual) / math.sqrt(self.n * self.X)


def poisson_check(n: int, X: int) -> PoissonCheck:
    """``sum_d (d/n) Phi(d/X)`` over squarefree ``d = 1 (mod 8)`` against
    ``Phi^(0) X/pi^2 prod_{p|n} (1+1/p)^-1`` when ``n`` is a square, else 0."""
    n, X = int(n), int(X)
    if n < 1 or n % 2 == 0:
        raise DomainError(f"poisson_check needs odd n >= 1, got {n}")
    if X < 16:
        raise ParameterError(f"poisson_check needs X >= 16, got {X}")
    d = family_discriminants(X)
    terms = jacobi_table(n)[d % n] * phi(d / X)
    lhs = math.fsum(terms.tolist())
    square = math.isqrt(n) ** 2 == n
    main = 0.0
    if square:
        main = PHI_MELLIN_ZERO * X / math.pi**2
        for q, _ in _factor_small(n):
            main /= 1.0 + 1.0 / q
    return PoissonCheck(n, X, lhs, main, square)


@dataclass(frozen=True)
class TripleSumCheck:
    window: tuple[float, float]
    M: float
    primes: tuple[int, ...]
    restricted: float
    extended: float
    alpha: float
    rankin_bound: float

    @property
    def tail(self) -> float:
        return self.extended - self.restricted

    @property
    def slack(self) -> float:
        """How far the measured tail sits below the Rankin bound."""
        return self.rankin_bound - self.tail


def restricted_triple_sum(res: Resonator) -> float:
    """``sum_{m1, m2 in support} b(m1) b(m2) / sqrt(m0)`` with
    ``m0 = m1 m2 / gcd(m1, m2)^2``.

    Uses ``gcd(m1, m2) = sum_{k | m1, k | m2} phi(k)``: the double sum is
    ``sum_k phi(k) A_k^2`` with ``A_k = sum_{k | m} b(m)/sqrt(m)``, and every
    such ``k`` lies in the support.
    """
    if len(res) > TRIPLE_SUM_CAPACITY:
        raise CapacityError(f"support of {len(res)} exceeds {TRIPLE_SUM_CAPACITY}")
    prime_list = [int(q) for q in res.primes]
    acc: dict[int, float] = {}
    for m, b in zip(res.support.tolist(), res.coeffs.tolist()):
        w = b / math.sqrt(m)
        fac = [q for q in prime_list if m % q == 0]
        for r in range(len(fac) + 1):
            for sub in combinations(fac, r):
                k = math.prod(sub)
                acc[k] = acc.get(k, 0.0) + w
    terms = []
    for k in sorted(acc):
        phik = math.prod(q - 1 for q in prime_list if k % q == 0)
        terms.append(phik * acc[k] ** 2)
    return math.fsum(terms)


def triple_sum_check(res: Resonator, alpha: float | None = None) -> TripleSumCheck:
    """Restricted sum, its Euler product over the window, and the Rankin bound
    ``2 M^-alpha prod_p (1 + b(p)^2 p^alpha + b(p) p^-1/2 (1 + p^alpha))``.

    The product runs over every window prime, including those above ``M``.
    ``alpha`` defaults to ``(log L)^-3``.
    """
    params = res.params
    if alpha is None:
        L = params.scale_L
        if not L > 1.0:
            raise ParameterError("default alpha needs L > 1; pass alpha explicitly")
        alpha = math.log(L) ** -3
    if not alpha > 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    restricted = restricted_triple_sum(res)
    extended = 1.0
    rankin = 2.0 * params.M ** (-alpha)
    window = params.window_primes(cap_at_M=False)
    if len(window) > TRIPLE_SUM_CAPACITY:
        raise CapacityError(f"window holds {len(window)} primes, over {TRIPLE_SUM_CAPACITY}")
    for q in window.tolist():
        b = b_prime(q, params)
        extended *= 1.0 + 2.0 * b / math.sqrt(q) + b * b
        qa = q**alpha
        rankin *= 1.0 + b * b * qa + b / math.sqrt(q) * (1.0 + qa)
    return TripleSumCheck(
        window=tuple(float(v) for v in params.effective_window),
        M=params.M,
        primes=tuple(window.tolist()),
        restricted=restricted,
        extended=extended,
        alpha=float(alpha),
        rankin_bound=rankin,
    )


@dataclass(frozen=True)
class VaughanParts:
    n: int
    V: int
    part1: float
    part2: float
    part3: float
    part4: float
    mangoldt: float

    @property
    def combined(self) -> float:
        return self.part1 + self.part2 - self.part3 + self.part4

    @property
    def residual(self) -> float:
        return abs(self.combined - self.mangoldt)


def vaughan_decompose(n: int, V: int, tables: MultTables) -> VaughanParts:
    """``Lambda_{<=V}(n)``, ``(mu_{<=V} * log)(n)``, ``(mu_{<=V} * Lambda_{<=V} * 1)(n)``
    and ``(mu_{>V} * Lambda_{>V} * 1)(n)`` by divisor enumeration."""
    n, V = int(n), int(V)
    if V < 1:
        raise ParameterError(f"Vaughan cutoff must be >= 1, got {V}")
    if n < 2:
        raise DomainError(f"vaughan_decompose needs n >= 2, got {n}")
    if n > tables.N:
        raise CapacityError(f"n={n} exceeds table bound {tables.N}")
    mu, lam = tables.mu, tables.mangoldt
    divs = tables.divisors(n)
    p1 = float(lam[n]) if n <= V else 0.0
    p2 = p3 = p4 = 0.0
    for d in divs:
        md = int(mu[d])
        if md == 0:
            continue
        k = n // d
        if d <= V:
            p2 += md * math.log(k)
            p3 += md * sum(float(lam[e]) for e in tables.divisors(k) if e <= V)
        else:
            p4 += md * sum(float(lam[e]) for e in tables.divisors(k) if e > V)
    return VaughanParts(n, V, p1, p2, p3, p4, float(lam[n]))


def _dirichlet_into(out: np.ndarray, f_idx, f_val, g: np.ndarray) -> None:
    """``out[n] += sum_{d in f_idx, d | n} f(d) g(n/d)`` for ``1 <= n < len(out)``."""
    N = len(out) - 1
    for d, v in zip(f_idx, f_val):
        out[d::d] += v * g[1 : N // d + 1]


def vaughan_residuals(N: int, V: int, tables: MultTables) -> np.ndarray:
    """Identity residual ``|p1 + p2 - p3 + p4 - Lambda(n)|`` for ``n = 0..N``
    at fixed cutoff ``V`` (entries 0 and 1 are padding), by array convolutions."""
    if N > tables.N:
        raise CapacityError(f"N={N} exceeds table bound {tables.N}")
    mu = tables.mu[: N + 1].astype(np.float64)
    lam = tables.mangoldt[: N + 1]
    idx = np.arange(N + 1)
    ones = np.ones(N + 1)
    logs = np.log(np.maximum(idx, 1).astype(np.float64))
    small = (idx >= 1) & (idx <= V)
    large = idx > V

    lam_le_1 = np.zeros(N + 1)
    e_small = np.flatnonzero(small & (lam > 0))
    _dirichlet_into(lam_le_1, e_small, lam[e_small], ones)
    lam_gt_1 = np.zeros(N + 1)
    e_large = np.flatnonzero(large & (lam > 0))
    _dirichlet_into(lam_gt_1, e_large, lam[e_large], ones)

    d_small = np.flatnonzero(small & (mu != 0))
    d_large = np.flatnonzero(large & (mu != 0))
    p1 = np.where(small, lam, 0.0)
    p2 = np.zeros(N + 1)
    _dirichlet_into(p2, d_small, mu[d_small], logs)
    p3 = np.zeros(N + 1)
    _dirichlet_into(p3, d_small, mu[d_small], lam_le_1)
    p4 = np.zeros(N + 1)
    _dirichlet_into(p4, d_large, mu[d_large], lam_gt_1)
    out = np.abs(p1 + p2 - p3 + p4 - lam)
    out[:2] = 0.0
    return out


def vaughan_max_residual(N: int, tables: MultTables, V: int | None = None) -> float:
    """Worst residual over ``2 <= n <= N``, at fixed ``V`` or at
    ``V = ceil(n^(1/3))`` when ``V`` is None."""
    if V is not None:
        return float(vaughan_residuals(N, V, tables)[2:].max())
    worst = 0.0
    v = 2
    while True:
        # n with ceil(n^(1/3)) = v are (v-1)^3 < n <= v^3
        lo, hi = (v - 1) ** 3 + 1, min(v**3, N)
        if lo > N:
            break
        r = vaughan_residuals(hi, v, tables)
        worst = max(worst, float(r[max(lo, 2) : hi + 1].max()))
        v += 1
    return worst


@dataclass(frozen=True)
class LabelCharacter:
    gamma: int
    m0r: int
    character: QuadChar

    @property
    def label(self) -> int:
        return self.gamma * self.m0r

    @property
    def modulus(self) -> int:
        return abs(self.character.D)

    def __call__(self, n: int) -> int:
        return self.character(n)

    def values(self, n: np.ndarray) -> np.ndarray:
        return self.character.values(n)


def label_character(gamma: int, m0r: int) -> LabelCharacter:
    """``(g/.)`` with ``g = gamma m0r`` when ``g = 1 (mod 4)``, else ``(4g/.)``."""
    gamma, m0r = int(gamma), int(m0r)
    if gamma not in (1, -1, 2, -2):
        raise DomainError(f"gamma must be one of +-1, +-2, got {gamma}")
    if m0r <= 1 or m0r % 2 == 0:
        raise DomainError(f"m0r must be odd and > 1, got {m0r}")
    g = gamma * m0r
    D = g if g % 4 == 1 else 4 * g
    return LabelCharacter(gamma, m0r, QuadChar(D))


def smoothed_prime_sum(
    chi: LabelCharacter | None, X: int, s0: complex, tables: MultTables
) -> complex:
    """``sum_n Lambda(n) Phi(n/X) (n/X)^(s0/2) chi(n)`` over ``X <= n <= 2X``;
    ``chi=None`` is the principal character."""
    X = int(X)
    if 2 * X > tables.N:
        raise CoverageError(f"tables stop at {tables.N}, need {2 * X}")
    n = np.arange(X, 2 * X + 1, dtype=np.int64)
    lam = tables.mangoldt[X : 2 * X + 1]
    w = lam * phi_s(n / X, complex(s0))
    if chi is not None:
        w = w * chi.values(n)
    return complex(math.fsum(w.real.tolist()), math.fsum(w.imag.tolist()))


def phi_mellin_zero() -> float:
    """``Phi^(0)`` by quadrature; equals 5/6 by the symmetry of the bump."""
    return phi_mellin(0.0).real
