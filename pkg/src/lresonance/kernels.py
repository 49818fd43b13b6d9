"""Smooth cutoff, its Mellin transform, and the vertical-line contour kernels.

The cutoff is the fixed bump ``phi`` supported on ``[1, 2]`` and equal to 1
on ``[7/6, 11/6]``.  Contour integrals over ``Re s = u`` are evaluated with
the trapezoidal rule; the ``exp(s^2)`` factor makes the rule spectrally
accurate once the line is cut where ``exp(u^2 - t^2)`` drops below 1e-18.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import integrate

from .arith import is_prime
from .errors import DomainError
from .specfun import (
    EULER_GAMMA,
    GAMMA_QUARTER,
    LOG_2,
    LOG_PI,
    PI,
    SQRT_2,
    digamma_quarter,
    gamma_complex,
    zeta_complex,
)

PLATEAU_LO = 7.0 / 6.0
PLATEAU_HI = 11.0 / 6.0
AFE_FACTOR_AT_ZERO = 1.0 - 1.0 / SQRT_2


def _step(t):
    """Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity in between."""
    t = np.asarray(t, dtype=np.float64)
    out = np.where(t >= 1.0, 1.0, 0.0)
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    with np.errstate(over="ignore"):
        out[mid] = 1.0 / (1.0 + np.exp(1.0 / tm - 1.0 / (1.0 - tm)))
    return out


def phi(x):
    """The bump ``g(6(x-1)) g(6(2-x))``; vectorised."""
    x_arr = np.asarray(x, dtype=np.float64)
    out = _step(6.0 * (x_arr - 1.0)) * _step(6.0 * (2.0 - x_arr))
    return float(out) if x_arr.ndim == 0 else out


def phi_s(x, s):
    """``phi(x) x^(s/2)``."""
    x_arr = np.asarray(x, dtype=np.float64)
    base = np.asarray(phi(x_arr), dtype=np.complex128)
    inside = x_arr > 0
    out = np.zeros(np.broadcast(x_arr, np.asarray(s)).shape, dtype=np.complex128)
    out = out + base
    pw = np.exp(np.asarray(s, dtype=np.complex128) / 2.0 * np.log(np.where(inside, x_arr, 1.0)))
    out = out * pw
    return complex(out) if out.ndim == 0 else out


def _quad_complex(f, a, b):
    # tolerances sit at the rounding floor; quad's roundoff warning is expected
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        re = integrate.quad(lambda x: f(x).real, a, b, epsabs=1e-15, epsrel=1e-14, limit=400)[0]
        im = integrate.quad(lambda x: f(x).imag, a, b, epsabs=1e-15, epsrel=1e-14, limit=400)[0]
    return complex(re, im)


def _plateau_integral(s: complex) -> complex:
    # integral of x^s over [7/6, 11/6], closed form
    w = s + 1.0
    la, lb = math.log(PLATEAU_LO), math.log(PLATEAU_HI)
    if abs(w) < 1e-6:
        d = lb - la
        return complex(d + w * (lb * lb - la * la) / 2.0 + w * w * (lb**3 - la**3) / 6.0)
    return complex((np.exp(w * lb) - np.exp(w * la)) / w)


def phi_mellin(s) -> complex:
    """Mellin transform ``int_0^inf phi(x) x^s dx``.

    The plateau is integrated in closed form and both edges by adaptive
    quadrature.
    """
    s = complex(s)

    def edge(x):
        return complex(phi(x)) * complex(np.exp(s * math.log(x)))

    return (
        _quad_complex(edge, 1.0, PLATEAU_LO)
        + _plateau_integral(s)
        + _quad_complex(edge, PLATEAU_HI, 2.0)
    )


@dataclass
class VKernel:
    """Trapezoidal evaluator for the smoothing kernel ``V(y)``.

    ``V(y) = (1/2 pi i) int_(u) Gamma(s/2+1/4)/Gamma(1/4) (1 - 2^(s-1/2))
    y^(-s) e^(s^2) ds/s``.  Values are cached per exact ``y``; a hit returns
    the same float that a fresh evaluation would.
    """

    u: float = 0.5
    h: float = 1.0 / 128.0
    tail: float = 1e-18
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(
        default_factory=threading.Lock, init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if self.u <= 0:
            raise DomainError(f"contour abscissa must be positive, got u={self.u}")

    @property
    def height(self) -> float:
        """Truncation height where ``exp(u^2 - t^2)`` falls below ``tail``."""
        return math.sqrt(self.u * self.u - math.log(self.tail))

    @cached_property
    def nodes(self) -> np.ndarray:
        n = int(math.ceil(self.height / self.h))
        return self.u + 1j * self.h * np.arange(-n, n + 1)

    @cached_property
    def weights(self) -> np.ndarray:
        s = self.nodes
        g = gamma_complex(s / 2.0 + 0.25) / GAMMA_QUARTER
        return self.h / (2.0 * PI) * g * (1.0 - np.exp((s - 0.5) * LOG_2)) * np.exp(s * s) / s

    def evaluate(self, y, check_imag: float = 1e-10) -> np.ndarray:
        """Uncached vectorised evaluation."""
        y = np.atleast_1d(np.asarray(y, dtype=np.float64))
        if np.any(y <= 0):
            raise DomainError("V(y) needs y > 0")
        out = np.empty(y.shape, dtype=np.float64)
        s, w = self.nodes, self.weights
        for lo in range(0, y.size, 256):
            ly = np.log(y[lo : lo + 256])
            vals = np.exp(-np.outer(ly, s)) @ w
            if np.max(np.abs(vals.imag)) > check_imag:
                raise ArithmeticError("V(y) quadrature left an imaginary residue")
            out[lo : lo + 256] = vals.real
        return out

    def __call__(self, y: float) -> float:
        y = float(y)
        hit = self._cache.get(y)
        if hit is not None:
            return hit
        val = float(self.evaluate(y)[0])
        with self._lock:
            self._cache[y] = val
        return val

    def warm(self, ys) -> None:
        """Fill the cache for many points at once (single writer)."""
        ys = np.unique(np.asarray(ys, dtype=np.float64))
        vals = self.evaluate(ys)
        with self._lock:
            self._cache.update(zip(ys.tolist(), vals.tolist()))

    def clone(self) -> "VKernel":
        twin = VKernel(self.u, self.h, self.tail)
        twin._cache.update(self._cache)
        return twin


def v_kernel(y: float, params: VKernel | None = None) -> float:
    """``V(y)`` on the contour described by ``params`` (default ``u = 1/2``)."""
    if y <= 0:
        raise DomainError("V(y) needs y > 0")
    return (params or _DEFAULT_KERNEL)(y)


_DEFAULT_KERNEL = VKernel()


@dataclass(frozen=True)
class VTable:
    """Piecewise Chebyshev table of ``V`` for the compiled central-value sums.

    Each octave ``[2^k, 2^(k+1))`` is cut into ``pieces`` equal linear
    sub-intervals with one Chebyshev series apiece.  Beyond ``2^k_max`` the
    kernel is treated as zero; below ``2^k_min`` it is clamped to its value
    there.
    """

    k_min: int
    k_max: int
    pieces: int
    degree: int
    coef: np.ndarray = field(repr=False)

    @property
    def y_max(self) -> float:
        return math.ldexp(1.0, self.k_max)

    def __call__(self, y) -> np.ndarray:
        y = np.atleast_1d(np.asarray(y, dtype=np.float64))
        mant, expo = np.frexp(y)
        k = expo - 1
        j = np.minimum(((mant - 0.5) * 2.0 * self.pieces).astype(np.int64), self.pieces - 1)
        x = 4.0 * self.pieces * (mant - 0.5) - 2.0 * j - 1.0
        low = k < self.k_min
        k = np.where(low, self.k_min, k)
        j = np.where(low, 0, j)
        x = np.where(low, -1.0, x)
        out = np.zeros(y.shape)
        ok = k < self.k_max
        rows = (k - self.k_min) * self.pieces + j
        for r in np.unique(rows[ok]):
            sel = ok & (rows == r)
            out[sel] = np.polynomial.chebyshev.chebval(x[sel], self.coef[r])
        return out


def build_vtable(kernel: VKernel | None = None, k_min: int = -40, k_max: int = 17,
                 pieces: int = 8, degree: int = 8) -> VTable:
    kernel = kernel or _DEFAULT_KERNEL
    cheb = np.polynomial.chebyshev
    x = np.cos(PI * (np.arange(degree + 1) + 0.5) / (degree + 1))
    coef = np.empty(((k_max - k_min) * pieces, degree + 1))
    row = 0
    for k in range(k_min, k_max):
        octave = math.ldexp(1.0, k)
        for j in range(pieces):
            lo = octave * (1.0 + j / pieces)
            width = octave / pieces
            vals = kernel.evaluate(lo + width * (x + 1.0) / 2.0)
            coef[row] = cheb.chebfit(x, vals, degree)
            row += 1
    return VTable(k_min, k_max, pieces, degree, coef)


def _check_family_prime(p: int) -> None:
    if p % 8 != 1 or not is_prime(p):
        raise DomainError(f"p={p} is not a prime = 1 (mod 8)")


def _check_m0(m0: int) -> None:
    if m0 < 1 or m0 % 2 == 0:
        raise DomainError(f"m0={m0} must be odd and positive")
    q = 3
    while q * q <= m0:
        if m0 % (q * q) == 0:
            raise DomainError(f"m0={m0} is not squarefree")
        q += 2


def i_pm0_direct(p: int, m0: int, params: VKernel | None = None) -> float:
    """The contour integral ``I_{p,m0}`` on ``Re s = u`` by the trapezoidal rule.

    Integrand: ``Gamma(s/2+1/4)/Gamma(1/4) zeta(1+2s) (p/(pi m0^2))^(s/2)
    (1 - 2^(s-1/2)) (1 - p^(-1-2s)) e^(s^2) / s``.
    """
    params = params or _DEFAULT_KERNEL
    _check_family_prime(p)
    _check_m0(m0)
    s = params.nodes
    log_ratio = math.log(p) - LOG_PI - 2.0 * math.log(m0)
    vals = (
        params.weights
        * zeta_complex(1.0 + 2.0 * s)
        * np.exp(s / 2.0 * log_ratio)
        * (1.0 - np.exp((-1.0 - 2.0 * s) * math.log(p)))
    )
    total = vals.sum()
    if abs(total.imag) > 1e-10:
        raise ArithmeticError("I_{p,m0} quadrature left an imaginary residue")
    return float(total.real)


@dataclass(frozen=True)
class ResidueConstants:
    """Constants of the residue at ``s = 0`` of the ``I_{p,m0}`` integrand.

    ``c0_printed`` is the closed form ``-1691/1600 - log(pi)/4 + 3/2 -
    log 2/(2 sqrt 2 - 2) + gamma``.  ``c0`` is the constant that the Laurent
    coefficients below actually produce; the two differ by exactly 3/2
    (the rational 1691/800 is psi(1/4)/2 to four digits, and the linear
    coefficient of exp(s^2) is 0, not 2).
    """

    gamma_ratio_linear: float = 0.5 * digamma_quarter()
    gamma_ratio_linear_printed: float = -1691.0 / 800.0
    zeta_polar: float = 0.5
    zeta_constant: float = EULER_GAMMA
    two_adic_linear: float = -LOG_2 / (SQRT_2 - 1.0)
    gaussian_linear: float = 0.0

    @property
    def c0_printed(self) -> float:
        return (
            -1691.0 / 1600.0 - LOG_PI / 4.0 + 1.5 - LOG_2 / (2.0 * SQRT_2 - 2.0) + EULER_GAMMA
        )

    @property
    def c0(self) -> float:
        return (
            self.gamma_ratio_linear / 2.0
            - LOG_PI / 4.0
            + self.two_adic_linear / 2.0
            + self.gaussian_linear / 2.0
            + self.zeta_constant
        )

    def euler_linear(self, p: int) -> float:
        """Linear Laurent coefficient of ``(1-2^(s-1/2))(1-p^(-1-2s))e^(s^2)``
        after dividing out its value at 0."""
        return self.gaussian_linear + 2.0 * math.log(p) / (p - 1.0) + self.two_adic_linear


RESIDUE = ResidueConstants()


def i_pm0_residue(p: int, m0: int, c0: float | None = None) -> float:
    """Residue at ``s = 0``:
    ``(1 - 1/sqrt 2)(1 - 1/p)(log(p/m0^2)/4 + log p/(p-1) + c0)``.

    ``c0`` defaults to the constant derived from the Laurent expansion; pass
    ``RESIDUE.c0_printed`` to reproduce the printed closed form.
    """
    _check_family_prime(p)
    _check_m0(m0)
    c = RESIDUE.c0 if c0 is None else c0
    lp = math.log(p)
    return AFE_FACTOR_AT_ZERO * (1.0 - 1.0 / p) * (
        0.25 * (lp - 2.0 * math.log(m0)) + lp / (p - 1.0) + c
    )
