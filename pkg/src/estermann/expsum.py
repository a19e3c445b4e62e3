"""Short Weyl sums, complete sums S(a, q) and the oscillatory integral gamma."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from estermann.arith import RationalApprox, compensated_sum, expi, phase_array
from estermann.errors import AccuracyError, DomainError

GL_ORDER = 20
GAMMA_TOL = 1e-8
GAMMA_MAX_NODES = 1 << 24
# panels evaluated per vectorised batch
_BATCH_PANELS = 1 << 14


@dataclass(frozen=True)
class SumWindow:
    """Summation range x - y < m <= x for the degree-n phase alpha*m**n."""

    x: float
    y: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"degree must be >= 1, got {self.n}")
        if not (0 <= self.y <= self.x):
            raise DomainError(f"need 0 <= y <= x, got x={self.x}, y={self.y}")

    @property
    def m_range(self) -> tuple[int, int]:
        x, y = Fraction(self.x), Fraction(self.y)
        return math.floor(x - y) + 1, math.floor(x)

    @property
    def term_count(self) -> int:
        lo, hi = self.m_range
        return max(0, hi - lo + 1)


def weyl_sum(approx: RationalApprox, w: SumWindow) -> complex:
    """T(alpha; x, y) by direct summation with exact-phase reduction."""
    lo, hi = w.m_range
    if hi < lo:
        return 0j
    total = 0j
    # chunk to bound memory for long windows
    for start in range(lo, hi + 1, 1 << 20):
        ms = np.arange(start, min(hi, start + (1 << 20) - 1) + 1, dtype=np.int64)
        total += compensated_sum(expi(phase_array(approx, ms, w.n)))
    return total


@lru_cache(maxsize=512)
def power_residue_counts(q: int, n: int) -> np.ndarray:
    """counts[r] = #{1 <= k <= q : k**n = r mod q}."""
    ks = np.arange(1, q + 1, dtype=np.int64) % q
    acc = ks.copy()
    for _ in range(n - 1):
        acc = (acc * ks) % q
    counts = np.bincount(acc, minlength=q)
    counts.setflags(write=False)
    return counts


@lru_cache(maxsize=1 << 17)
def _complete_sum(a: int, q: int, n: int) -> complex:
    counts = power_residue_counts(q, n)
    rs = np.flatnonzero(counts)
    phases = ((a * rs) % q) / q
    return complex(np.sum(counts[rs] * np.exp(2j * np.pi * phases)))


def complete_sum(a: int, q: int, n: int, allow_noncoprime: bool = False) -> complex:
    """S(a, q) = sum_{k=1}^q e(a k**n / q); memoised on (a mod q, q, n)."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    if not allow_noncoprime and math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) != 1")
    return _complete_sum(a % q, q, n)


def _gl_nodes(order: int = GL_ORDER):
    x, wts = np.polynomial.legendre.leggauss(order)
    return x, wts


def _phase_poly(lam: float, w: SumWindow):
    """Split lam*(c + y t)**n = const + sum_i b_i t**i, c = x - y/2.

    Returns ({const} as float, [b_1..b_n]); the constant is reduced exactly.
    """
    c = Fraction(w.x) - Fraction(w.y) / 2
    const = Fraction(lam) * c**w.n
    const -= math.floor(const)
    cf = float(c)
    coeffs = [lam * math.comb(w.n, i) * cf ** (w.n - i) * float(w.y) ** i for i in range(1, w.n + 1)]
    return float(const), coeffs


def _gamma_panels(coeffs, panels: int) -> complex:
    xg, wg = _gl_nodes()
    h = 1.0 / panels
    total = 0j
    for p0 in range(0, panels, _BATCH_PANELS):
        idx = np.arange(p0, min(panels, p0 + _BATCH_PANELS))
        left = -0.5 + idx * h
        t = (left[:, None] + (xg[None, :] + 1.0) * (h / 2)).ravel()
        ph = np.zeros_like(t)
        for b in reversed(coeffs):
            ph = (ph + b) * t
        vals = np.exp(2j * np.pi * ph).reshape(len(idx), -1) @ wg
        total += compensated_sum(vals) * (h / 2)
    return total


def gamma_integral(lam: float, w: SumWindow, tol: float = GAMMA_TOL, max_nodes: int = GAMMA_MAX_NODES) -> complex:
    """gamma(lam; x, y) = int_{-1/2}^{1/2} e(lam (x - y/2 + y t)**n) dt.

    Composite Gauss-Legendre; the panel count starts at 1 + total phase
    variation and doubles until two successive estimates agree to ``tol``.
    """
    if lam == 0:
        return 1 + 0j
    const, coeffs = _phase_poly(lam, w)
    if w.y == 0:
        return expi(const)
    variation = w.n * abs(lam) * float(w.x) ** (w.n - 1) * float(w.y)
    panels = int(math.ceil(1 + variation))
    prev = _gamma_panels(coeffs, panels)
    while True:
        panels *= 2
        if panels * GL_ORDER > max_nodes:
            raise AccuracyError(f"gamma quadrature did not converge within {max_nodes} nodes")
        cur = _gamma_panels(coeffs, panels)
        if abs(cur - prev) <= tol:
            return expi(const) * cur
        prev = cur


def major_arc_weyl_approx(approx: RationalApprox, w: SumWindow, override: bool = False) -> complex:
    """(y/q) S(a, q) gamma(lam; x, y), valid for |lam| <= 1/(2 n q x**(n-1))."""
    limit = 1.0 / (2 * w.n * approx.q * float(w.x) ** (w.n - 1))
    if abs(approx.lam) > limit and not override:
        raise DomainError(f"|lam|={abs(approx.lam):.3g} exceeds 1/(2nqx^(n-1))={limit:.3g}")
    s = complete_sum(approx.a, approx.q, w.n)
    return (w.y / approx.q) * s * gamma_integral(approx.lam, w)
