"""Special functions in double precision: complex Gamma, zeta, Hurwitz zeta.

All functions accept scalars or numpy arrays and return the same shape.
Complex Gamma uses the Lanczos approximation (g = 7, 9 terms); both zeta
functions use Euler-Maclaurin summation.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, PoleError

EULER_GAMMA = 0.577215664901532860606512090082
PI = 3.14159265358979323846264338328
LOG_2 = 0.693147180559945309417232121458
LOG_PI = 1.14472988584940017414342735135
SQRT_2 = 1.41421356237309504880168872421
GAMMA_QUARTER = 3.62560990822190831193068515587

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.918938533204672741780329736406
_PI_LD = np.longdouble("3.14159265358979323846264338328")

# B_2, B_4, ..., B_20
_BERNOULLI_EVEN = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
)


def _as_complex(s):
    arr = np.asarray(s, dtype=np.complex128)
    return arr, arr.ndim == 0


def _lanczos_loggamma(z):
    # valid for Re z >= 1/2; extended precision keeps the phase of
    # (z + 1/2) log t accurate when |Im z| is in the hundreds
    z = np.asarray(z, dtype=np.clongdouble) - 1
    acc = np.full(z.shape, _LANCZOS_COEF[0], dtype=np.clongdouble)
    for k, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc = acc + c / (z + k)
    t = z + _LANCZOS_G + 0.5
    return np.longdouble(_HALF_LOG_2PI) + (z + 0.5) * np.log(t) - t + np.log(acc)


def _log_sin_pi(z):
    """Branch-consistent ``log(sin(pi z))`` that does not overflow."""
    z = np.asarray(z, dtype=np.clongdouble)
    ipi = np.clongdouble(1j) * _PI_LD
    out = np.empty(z.shape, dtype=np.clongdouble)
    upper = z.imag >= 0
    # sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}) when Im z >= 0
    zu = z[upper]
    out[upper] = -ipi * zu + np.log(np.clongdouble(0.5j)) + np.log1p(-np.exp(2 * ipi * zu))
    zl = z[~upper]
    out[~upper] = ipi * zl + np.log(np.clongdouble(-0.5j)) + np.log1p(-np.exp(-2 * ipi * zl))
    return out


def _stirling_loggamma(z):
    # |z| >= 8: the Lanczos sum loses digits far from the real axis
    z = np.asarray(z, dtype=np.clongdouble)
    inv = 1 / z
    inv2 = inv * inv
    tail = np.zeros(z.shape, dtype=np.clongdouble)
    for k in range(len(_BERNOULLI_EVEN), 0, -1):
        tail = tail * inv2 + np.longdouble(_BERNOULLI_EVEN[k - 1]) / (2 * k * (2 * k - 1))
    return (z - 0.5) * np.log(z) - z + np.longdouble(_HALF_LOG_2PI) + tail * inv


def _loggamma_right(z):
    out = np.empty(z.shape, dtype=np.clongdouble)
    big = np.abs(z) >= 8
    out[big] = _stirling_loggamma(z[big])
    out[~big] = _lanczos_loggamma(z[~big])
    return out


def _loggamma_ld(z):
    out = np.empty(z.shape, dtype=np.clongdouble)
    right = z.real >= 0.5
    out[right] = _loggamma_right(z[right])
    zl = z[~right]
    log_pi = np.log(_PI_LD)
    out[~right] = log_pi - _log_sin_pi(zl) - _loggamma_right(1.0 - zl)
    return out


def loggamma_complex(s):
    """A logarithm of Gamma (imaginary part not unwrapped to the principal
    branch of log-Gamma; ``exp`` of it is exact up to rounding)."""
    z, scalar = _as_complex(s)
    z = np.atleast_1d(z)
    _check_gamma_poles(z)
    out = _loggamma_ld(z).astype(np.complex128)
    return out[0] if scalar else out


def _check_gamma_poles(z):
    bad = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(bad):
        raise PoleError(f"Gamma has a pole at {z[bad][0].real:g}")


def gamma_complex(s):
    """Gamma function for complex argument.

    Relative accuracy is about 1e-13 on ``-2 <= Re s <= 10``,
    ``|Im s| <= 200``; raises ``PoleError`` at non-positive integers.
    """
    z, scalar = _as_complex(s)
    z = np.atleast_1d(z)
    _check_gamma_poles(z)
    out = np.exp(_loggamma_ld(z)).astype(np.complex128)
    return out[0] if scalar else out


def digamma(x: float) -> float:
    """Real digamma by upward recurrence and the asymptotic series."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"digamma has a pole at {x:g}")
    acc = 0.0
    if x < 0:
        # reflection: psi(1-x) - psi(x) = pi cot(pi x)
        return digamma(1.0 - x) - PI / math.tan(PI * x)
    while x < 20.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    for k in range(len(_BERNOULLI_EVEN) - 1, -1, -1):
        tail = tail * inv2 + _BERNOULLI_EVEN[k] / (2 * (k + 1))
    return acc + math.log(x) - 0.5 / x - tail * inv2


def digamma_quarter() -> float:
    """``psi(1/4) = -gamma - pi/2 - 3 log 2``."""
    return -EULER_GAMMA - PI / 2.0 - 3.0 * LOG_2


def _euler_maclaurin(z, a, N):
    """``sum_{k>=0} (k+a)^{-z}`` by Euler-Maclaurin with ``N`` direct terms.

    Runs in extended precision: the phases ``Im(z) log(k+a)`` reach 1e5 on
    the tallest lines and would otherwise cost four digits.
    """
    z = np.asarray(z, dtype=np.clongdouble)
    a = np.asarray(a, dtype=np.longdouble)
    total = np.zeros(np.broadcast(z, a).shape, dtype=np.clongdouble)
    for k in range(N):
        total = total + np.exp(-z * np.log(k + a))
    w = N + a
    logw = np.log(w)
    wz = np.exp(-z * logw)
    total = total + w * wz / (z - 1.0) + 0.5 * wz
    # rising factorial term z (z+1) ... (z+2j-2) / (2j)!
    fact = z / 2.0
    wpow = wz / w
    for j, b in enumerate(_BERNOULLI_EVEN, start=1):
        total = total + b * fact * wpow
        fact = fact * (z + 2 * j - 1) * (z + 2 * j) / ((2 * j + 1) * (2 * j + 2))
        wpow = wpow / (w * w)
    return total.astype(np.complex128)


def _direct_terms(z) -> int:
    return max(20, int(math.ceil(float(np.max(np.abs(z.imag)) if z.size else 0.0))))


def zeta_complex(s):
    """Riemann zeta for ``Re s > -1``, ``s != 1``, ``|Im s| <= 1e4``."""
    z, scalar = _as_complex(s)
    z = np.atleast_1d(z)
    if np.any(z == 1.0):
        raise PoleError("zeta has a pole at s = 1")
    if np.any(z.real <= -1.0):
        raise DomainError("zeta_complex needs Re s > -1")
    out = _euler_maclaurin(z, 1.0, _direct_terms(z))
    return out[0] if scalar else out


def hurwitz_zeta(s, a):
    """Hurwitz zeta ``sum_{k>=0} (k+a)^{-s}`` for ``0 < a <= 1``.

    ``a`` may be an array; it broadcasts against ``s``.
    """
    z, scalar = _as_complex(s)
    a_arr = np.asarray(a, dtype=np.float64)
    if np.any(a_arr <= 0) or np.any(a_arr > 1):
        raise DomainError("hurwitz_zeta needs 0 < a <= 1")
    if np.any(z == 1.0):
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    if np.any(z.real <= -1.0):
        raise DomainError("hurwitz_zeta needs Re s > -1")
    out = _euler_maclaurin(z, a_arr, _direct_terms(np.atleast_1d(z)))
    if scalar and a_arr.ndim == 0:
        return complex(out)
    return out
