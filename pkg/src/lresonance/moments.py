"""Twisted moments of the resonator and the ratio lower bound for the
family maximum.

    M1 = sum_{d = 1 (8), squarefree} R(d)^2 Phi(d/X)
    M2 = sum_{p = 1 (8), prime} log p L(1/2, chi_p) R(p)^2 Phi(p/X)

and ``max L >= M2 / (M1 log 2X)``.  Per-``d`` terms are built in fixed-size
chunks and reduced with ``math.fsum``, which is exactly rounded, so reports
do not depend on the thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .arith import jacobi_table, squarefree_1mod8
from .errors import CoverageError, DegenerateError, LabError, ParameterError
from .kernels import phi
from .lcentral import LValueRecord, family_primes
from .resonator import Resonator

CHUNK = 1 << 14


class EmptyFamilyError(LabError, ValueError):
    """``scan_max`` was given no records."""


def _chunks(n: int) -> list[slice]:
    return [slice(i, min(i + CHUNK, n)) for i in range(0, n, CHUNK)]


def _map_chunks(fn, n: int, threads: int) -> list:
    parts = _chunks(n)
    if threads <= 1 or len(parts) <= 1:
        return [fn(s) for s in parts]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, parts))


def _resonator_parts(res: Resonator, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``R(d)`` and the diagonal ``sum_m b(m)^2 chi_d(m)^2`` for each ``d``."""
    r = np.zeros(d.shape, dtype=np.float64)
    diag = np.zeros(d.shape, dtype=np.float64)
    for m, b in zip(res.support.tolist(), res.coeffs.tolist()):
        chi = jacobi_table(m)[d % m].astype(np.float64)
        r += b * chi
        diag += (b * b) * (chi * chi)
    return r, diag


def family_discriminants(X: int) -> np.ndarray:
    """Squarefree ``d = 1 (mod 8)`` in ``[X, 2X]``, the support of ``Phi(d/X)``."""
    return squarefree_1mod8(int(X), 2 * int(X))


def moment_m1(res: Resonator, X: int, threads: int = 1) -> tuple[float, float, float]:
    """``(total, diagonal, offdiag)`` of the first twisted moment.

    The diagonal collects the ``m1 = m2`` terms of ``R(d)^2``; the
    off-diagonal is the rest, per ``d``.  ``total`` is defined as
    ``diagonal + offdiag`` so the partition is exact.
    """
    if X < 17:
        raise ParameterError(f"moment_m1 needs X >= 17, got {X}")
    d = family_discriminants(X)
    w = phi(d / X)

    def work(sl):
        r, diag = _resonator_parts(res, d[sl])
        return diag * w[sl], (r * r - diag) * w[sl]

    parts = _map_chunks(work, len(d), threads)
    diagonal = math.fsum(x for p in parts for x in p[0])
    offdiag = math.fsum(x for p in parts for x in p[1])
    return diagonal + offdiag, diagonal, offdiag


def moment_m1_direct(res: Resonator, X: int, threads: int = 1) -> float:
    """``sum_d R(d)^2 Phi(d/X)`` without the split; a cross-check on ``moment_m1``."""
    d = family_discriminants(X)
    w = phi(d / X)

    def work(sl):
        return res.values(d[sl]) ** 2 * w[sl]

    return math.fsum(x for p in _map_chunks(work, len(d), threads) for x in p)


def _coverage(lvalues: Sequence[LValueRecord], X: int) -> dict[int, float]:
    table = {int(r.p): float(r.value) for r in lvalues}
    missing = [int(p) for p in family_primes(X) if int(p) not in table]
    if missing:
        raise CoverageError(
            f"{len(missing)} family primes in ({X}, {2 * X}] lack L-values, first {missing[0]}"
        )
    return table


def moment_m2(
    res: Resonator,
    lvalues: Sequence[LValueRecord],
    X: int,
    threads: int = 1,
    l_override: float | None = None,
) -> float:
    """Second twisted moment from its definition.

    ``l_override`` replaces every L-value by a constant, which isolates the
    weights from the L-values in tests.
    """
    table = _coverage(lvalues, X)
    p = family_primes(X)
    if l_override is None:
        lv = np.array([table[int(q)] for q in p], dtype=np.float64)
    else:
        lv = np.full(len(p), float(l_override))
    w = np.log(p.astype(np.float64)) * phi(p / X) * lv

    def work(sl):
        return res.values(p[sl]) ** 2 * w[sl]

    return math.fsum(x for part in _map_chunks(work, len(p), threads) for x in part)


def scan_max(lvalues: Sequence[LValueRecord]) -> tuple[float, int]:
    """Largest L-value and the smallest prime attaining it."""
    if len(lvalues) == 0:
        raise EmptyFamilyError("scan_max needs at least one record")
    best = min(lvalues, key=lambda r: (-r.value, r.p))
    return float(best.value), int(best.p)


def predicted_growth(X: float, theta: float) -> float:
    """``exp(2 sqrt(theta) sqrt(log X / log log X))``, the leading-order trend."""
    lx = math.log(X)
    return math.exp(2.0 * math.sqrt(theta) * math.sqrt(lx / math.log(lx)))


@dataclass(frozen=True)
class MomentReport:
    X: int
    theta: float
    M: float
    window: tuple[float, float]
    overridden: bool
    support_size: int
    m1_total: float
    m1_diagonal: float
    m1_offdiag: float
    m2: float
    scan_max: float
    argmax: int

    @property
    def ratio(self) -> float:
        return extreme_lower_bound(self)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["window"] = list(self.window)
        out["ratio"] = self.ratio
        return out


def extreme_lower_bound(report: MomentReport) -> float:
    """``M2 / (M1 log 2X)``."""
    if not report.m1_total > 0:
        raise DegenerateError(f"M1 must be positive, got {report.m1_total}")
    return report.m2 / (report.m1_total * math.log(2 * report.X))


def moment_report(
    res: Resonator, lvalues: Sequence[LValueRecord], X: int, threads: int = 1
) -> MomentReport:
    total, diag, off = moment_m1(res, X, threads)
    m2 = moment_m2(res, lvalues, X, threads)
    in_range = [r for r in lvalues if X < r.p <= 2 * X]
    best, arg = scan_max(in_range)
    params = res.params
    return MomentReport(
        X=int(X),
        theta=params.theta,
        M=params.M,
        window=tuple(float(v) for v in params.effective_window),
        overridden=params.overridden,
        support_size=len(res),
        m1_total=total,
        m1_diagonal=diag,
        m1_offdiag=off,
        m2=m2,
        scan_max=best,
        argmax=arg,
    )
