"""Compiled inner loops.  Each routine is sequential in a fixed order, so its
result does not depend on how callers split work across threads."""

import math

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def _vtable_eval(y, coef, k_min, k_max, pieces):
    m, e = math.frexp(y)
    k = e - 1
    if k >= k_max:
        return 0.0
    if k < k_min:
        row = coef[0]
        x = -1.0
    else:
        # mantissa in [1/2, 1) -> sub-interval j and local coordinate in [-1, 1)
        u = 2.0 * pieces * (m - 0.5)
        j = int(u)
        if j >= pieces:
            j = pieces - 1
        x = 2.0 * (u - j) - 1.0
        row = coef[(k - k_min) * pieces + j]
    b1 = 0.0
    b2 = 0.0
    x2 = 2.0 * x
    for j in range(row.shape[0] - 1, 0, -1):
        b1, b2 = x2 * b1 - b2 + row[j], b1
    return x * b1 - b2 + row[0]


@numba.njit(cache=True, nogil=True)
def afe_odd_sum(p, chi, coef, k_min, k_max, pieces, scale, n_max):
    """Kahan-compensated ``sum_{odd n <= n_max} chi[n % p] V(n scale)/sqrt(n)``."""
    total = 0.0
    comp = 0.0
    r = 1
    n = 1
    while n <= n_max:
        c = chi[r]
        if c != 0:
            term = c * _vtable_eval(n * scale, coef, k_min, k_max, pieces) / math.sqrt(n)
            yk = term - comp
            tk = total + yk
            comp = (tk - total) - yk
            total = tk
        n += 2
        r += 2
        if r >= p:
            r -= p
    return total


@numba.njit(cache=True, nogil=True)
def kahan_dot(a, b):
    total = 0.0
    comp = 0.0
    for i in range(a.shape[0]):
        yk = a[i] * b[i] - comp
        tk = total + yk
        comp = (tk - total) - yk
        total = tk
    return total


@numba.njit(cache=True, nogil=True)
def legendre_into(p, out):
    for r in range(p):
        out[r] = -1
    out[0] = 0
    sq = 0
    # (k+1)^2 = k^2 + 2k + 1, reduced mod p without overflow
    for k in range(1, (p - 1) // 2 + 1):
        sq += 2 * k - 1
        if sq >= p:
            sq %= p
        out[sq] = 1
    return out


@numba.njit(cache=True, nogil=True)
def jacobi(a, n):
    """Jacobi symbol ``(a/n)`` for odd ``n > 0`` (binary algorithm)."""
    a %= n
    sign = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r = n % 8
            if r == 3 or r == 5:
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


@numba.njit(cache=True, nogil=True)
def character_prefix(p, spf, n_max, out):
    """``out[n] = (n/p)`` for ``0 <= n <= n_max < p`` by complete
    multiplicativity: symbols are computed on primes only."""
    out[0] = 0
    if n_max >= 1:
        out[1] = 1
    for n in range(2, n_max + 1):
        q = spf[n]
        if q == n:
            if q == 2:
                r = p % 8
                out[n] = 1 if (r == 1 or r == 7) else -1
            else:
                # reciprocity is trivial for p = 1 (mod 4): (q/p) = (p/q)
                out[n] = jacobi(p % q, q) if p % 4 == 1 else jacobi(q, p)
        else:
            out[n] = out[q] * out[n // q]
    return out
