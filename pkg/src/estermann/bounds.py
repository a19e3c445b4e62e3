"""Right-hand sides of the exponential-sum estimates, and their exact left sides.

All Vinogradov-type bounds are evaluated with implied constant 1; callers
fit the empirical constant instead of assuming one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from estermann.arith import RationalApprox, factorize, phase_array
from estermann.errors import DegenerateInputError, DomainError
from estermann.expsum import complete_sum


@dataclass(frozen=True)
class DifferencePolynomial:
    """p_j(u) with Delta_j(u**n; h) = h_1*...*h_j * p_j(u); coeffs low -> high in u."""

    n: int
    hs: tuple[int, ...]
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def __call__(self, u: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc


def _shift(coeffs: list[int], h: int) -> list[int]:
    """Coefficients of f(u + h) given those of f(u)."""
    d = len(coeffs) - 1
    out = [0] * (d + 1)
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        for i in range(k + 1):
            out[i] += c * math.comb(k, i) * h ** (k - i)
    return out


def difference_poly(n: int, j: int, hs) -> DifferencePolynomial:
    hs = tuple(int(h) for h in hs)
    if not 1 <= j <= n - 1:
        raise DomainError(f"need 1 <= j <= n-1, got n={n}, j={j}")
    if len(hs) != j:
        raise DomainError(f"expected {j} shifts, got {len(hs)}")
    if any(h == 0 for h in hs):
        raise DegenerateInputError("zero shift makes the difference vanish identically")
    f = [0] * n + [1]
    for h in hs:
        shifted = _shift(f, h)
        f = [s - c for s, c in zip(shifted, f)]
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    prod = math.prod(hs)
    if any(c % prod for c in f):
        raise ArithmeticError("difference not divisible by product of shifts")
    return DifferencePolynomial(n, hs, tuple(c // prod for c in f))


def divisor_count(h: int, r: int) -> int:
    """tau_r(h): ordered r-tuples of positive integers with product h."""
    if h < 1:
        raise DomainError(f"h must be >= 1, got {h}")
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r}")
    out = 1
    for _, e in factorize(h):
        out *= math.comb(e + r - 1, r - 1)
    return out


def divisor_count_table(x: int, r: int) -> np.ndarray:
    """tau_r(h) for 0 <= h <= x (index 0 unused), by repeated Dirichlet convolution with 1."""
    tau = np.zeros(x + 1, dtype=np.int64)
    tau[1:] = 1
    for _ in range(r - 1):
        nxt = np.zeros_like(tau)
        for d in range(1, x + 1):
            nxt[d::d] += tau[d]
        tau = nxt
    return tau


def divisor_moment_rhs(x: float, r: int, k: int) -> float:
    """x r**k / (r!)**((r**k-1)/(r-1)) * (ln x + r**k - 1)**(r**k - 1)."""
    rk = r**k
    return x * rk / math.factorial(r) ** ((rk - 1) / (r - 1)) * (math.log(x) + rk - 1) ** (rk - 1)


def _dist_to_int(t: np.ndarray) -> np.ndarray:
    return np.abs(t - np.rint(t))


def min_norm_sum(approx: RationalApprox, x: float, y: float, beta: float) -> tuple[float, float, bool]:
    """(sum_{1<=k<=x} min(y, 1/||alpha k + beta||), 6(x/q+1)(y + q ln q), value <= bound).

    A term with ||alpha k + beta|| = 0 contributes y.
    """
    q = approx.q
    bound = 6 * (x / q + 1) * (y + q * math.log(q))
    kmax = math.floor(x)
    if kmax < 1:
        return 0.0, bound, True
    value = 0.0
    for start in range(1, kmax + 1, 1 << 20):
        ks = np.arange(start, min(kmax, start + (1 << 20) - 1) + 1, dtype=np.int64)
        t = phase_array(approx, ks, 1) + beta
        d = _dist_to_int(t - np.floor(t))
        with np.errstate(divide="ignore"):
            terms = np.where(d > 0, np.minimum(y, 1.0 / d), y)
        value += math.fsum(terms.tolist())
    return value, bound, value <= bound


def weyl_bound_rhs(q: int, y: float, n: int) -> float:
    """y (1/q + 1/y + q/y**n)**(2**-n) (ln qy)**((n-1)**2 2**-n)."""
    if q < 1 or not y > 1:
        raise DomainError(f"need q >= 1 and y > 1, got q={q}, y={y}")
    e = 2.0**-n
    return y * (1 / q + 1 / y + q / y**n) ** e * math.log(q * y) ** ((n - 1) ** 2 * e)


def corollary2_bound(q: int, x: float, y: float, n: int) -> float:
    """q**(1-1/n) ln q + min(y q**(-1/n), sqrt(x) q**(1/2-1/n)); ln 1 = 0 kills the first term."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    return q ** (1 - 1 / n) * math.log(q) + min(y * q ** (-1 / n), math.sqrt(x) * q ** (0.5 - 1 / n))


def gauss_bound_ratio(q: int, n: int) -> float:
    """max over 1 <= a < q, gcd(a, q) = 1 of |S(a, q)| / q**(1-1/n)."""
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    best = max(abs(complete_sum(a, q, n)) for a in range(1, q) if math.gcd(a, q) == 1)
    return best / q ** (1 - 1 / n)
