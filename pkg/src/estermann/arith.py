"""Exact integer arithmetic and split rational approximations of reals.

Frequencies are carried end-to-end as ``alpha = a/q + lam`` so that the phase
``alpha * m**n mod 1`` can be reduced exactly for the rational part and with a
compensated product for the small real offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import factorint

from estermann.errors import DomainError, RangeError

# m**n must stay below this for phase reduction (128-bit widened intermediates).
MAX_POWER = 2**128
# The vectorised double-double path needs m**n and q*q to fit comfortably in int64.
_FAST_POWER = 2**62
_FAST_MODULUS = 2**31
_SPLITTER = 134217729.0  # 2**27 + 1


def mod_pow(base: int, exp: int, modulus: int) -> int:
    """``base**exp mod modulus`` with arbitrary-width intermediates."""
    if modulus <= 0:
        raise DomainError(f"modulus must be positive, got {modulus}")
    if exp < 0:
        raise DomainError(f"exponent must be non-negative, got {exp}")
    return pow(int(base), int(exp), int(modulus))


def iroot(x: int, n: int) -> int:
    """Largest integer r >= 0 with r**n <= x."""
    if x < 0:
        raise DomainError("iroot of a negative number")
    if x < 2 or n == 1:
        return x
    if x.bit_length() <= 52:
        r = int(round(x ** (1.0 / n)))
    else:
        # integer Newton from above
        r = 1 << -(-x.bit_length() // n)
        while True:
            s = ((n - 1) * r + x // r ** (n - 1)) // n
            if s >= r:
                break
            r = s
    while r**n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


def iroot_ceil(x: int, n: int) -> int:
    """Smallest integer r >= 0 with r**n >= x."""
    if x <= 0:
        return 0
    r = iroot(x, n)
    return r if r**n == x else r + 1


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of n >= 1 as sorted (p, e) pairs."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    return tuple(sorted(factorint(n).items()))


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def totient(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


@dataclass(frozen=True)
class RationalApprox:
    """alpha = a/q + lam with gcd(a, q) = 1 and q >= 1."""

    a: int
    q: int
    lam: float = 0.0

    def __post_init__(self):
        if self.q < 1:
            raise DomainError(f"denominator must be >= 1, got {self.q}")
        if math.gcd(self.a, self.q) != 1:
            raise DomainError(f"gcd({self.a}, {self.q}) != 1")
        if not math.isfinite(self.lam):
            raise DomainError("lam must be finite")

    @property
    def alpha(self) -> float:
        """The represented real, rounded to double (diagnostics only)."""
        return float(Fraction(self.a, self.q) + Fraction(self.lam))

    def exact(self) -> Fraction:
        return Fraction(self.a, self.q) + Fraction(self.lam)

    def negate(self) -> "RationalApprox":
        return RationalApprox(-self.a, self.q, -self.lam)

    def shift(self, k: int) -> "RationalApprox":
        """alpha + k for an integer k."""
        return RationalApprox(self.a + k * self.q, self.q, self.lam)

    def __str__(self):
        return f"{self.a}/{self.q}{self.lam:+.17g}"


def dirichlet_approx(alpha: float, Q: float) -> RationalApprox:
    """Last continued-fraction convergent a/q of alpha with q <= Q.

    The float is expanded exactly, so |lam| <= 1/(q*Q) holds without rounding
    slack except in the final conversion of lam to double.
    """
    if not Q >= 1:
        raise DomainError(f"Q must be >= 1, got {Q}")
    qmax = math.floor(Q)
    x = Fraction(alpha)
    # convergents h_k / k_k
    h_prev, h = 1, math.floor(x)
    k_prev, k = 0, 1
    rem = x - h
    while rem != 0:
        x = 1 / rem
        c = math.floor(x)
        rem = x - c
        h_next, k_next = c * h + h_prev, c * k + k_prev
        if k_next > qmax:
            break
        h_prev, h, k_prev, k = h, h_next, k, k_next
    lam = float(Fraction(alpha) - Fraction(h, k))
    return RationalApprox(h, k, lam)


def _split(x):
    c = _SPLITTER * x
    hi = c - (c - x)
    return hi, x - hi


def _two_product(x, y):
    """Error-free product p + e == x*y (Dekker, no fma needed)."""
    p = x * y
    xh, xl = _split(x)
    yh, yl = _split(y)
    e = ((xh * yh - p) + xh * yl + xl * yh) + xl * yl
    return p, e


def _frac_exact(lam: float, power: int) -> float:
    """{lam * power} via exact dyadic arithmetic."""
    num, den = lam.as_integer_ratio()
    return (num * power % den) / den


def phase_array(approx: RationalApprox, ms, n: int) -> np.ndarray:
    """Vector of {a*m**n/q + lam*m**n} for integer m in ``ms`` (values in [0, 1))."""
    ms = np.asarray(ms, dtype=np.int64)
    if ms.size == 0:
        return np.zeros(0)
    big = max(abs(int(ms.max())), abs(int(ms.min())))
    if big**n >= MAX_POWER:
        raise RangeError(f"m**n overflows 128 bits (m={big}, n={n})")
    a, q, lam = approx.a % approx.q, approx.q, approx.lam
    if big**n < _FAST_POWER and q < _FAST_MODULUS:
        powers = ms**n
        resid = (a * (powers % q)) % q
        hi = powers.astype(np.float64)
        lo = (powers - hi.astype(np.int64)).astype(np.float64)
        p, e = _two_product(lam, hi)
        frac = p - np.floor(p)
        frac = frac + (e + lam * lo)
        frac -= np.floor(frac)
        out = resid / q + frac
    else:
        pw = [int(m) ** n for m in ms.tolist()]
        out = np.array([((a * (P % q)) % q) / q + _frac_exact(lam, P) for P in pw])
    out -= np.floor(out)
    out[out >= 1.0] = 0.0
    return out


def frac_phase(approx: RationalApprox, m: int, n: int) -> float:
    """{alpha * m**n} for alpha = a/q + lam, accurate to ~1e-15 absolute."""
    if int(m) ** n >= MAX_POWER:
        raise RangeError(f"m**n overflows 128 bits (m={m}, n={n})")
    if abs(int(m)) ** n >= _FAST_POWER:
        P = int(m) ** n
        val = ((approx.a * (P % approx.q)) % approx.q) / approx.q + _frac_exact(approx.lam, P)
        val -= math.floor(val)
        return 0.0 if val >= 1.0 else val
    return float(phase_array(approx, [m], n)[0])


def expi(phase) -> complex | np.ndarray:
    """e(t) = exp(2*pi*i*t)."""
    return np.exp(2j * np.pi * np.asarray(phase)) if np.ndim(phase) else complex(
        math.cos(2 * math.pi * phase), math.sin(2 * math.pi * phase)
    )


def compensated_sum(values) -> complex:
    """Correctly rounded sum of complex terms (math.fsum per component)."""
    v = np.asarray(values, dtype=np.complex128)
    return complex(math.fsum(v.real.tolist()), math.fsum(v.imag.tolist()))
