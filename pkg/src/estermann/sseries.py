"""Local root counts rho(N, p), local sums Phi(q, N) and the singular series."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sympy import isprime

from estermann.arith import mod_pow
from estermann.errors import AccuracyError, DomainError
from estermann.expsum import complete_sum
from estermann.primes import base_primes

DEFAULT_CUTOFF = 100_000
VARIANTS = ("rho_minus_one", "rho")


def rho(N: int, p: int, n: int) -> int:
    """Number of x mod p with x**n = N (mod p)."""
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    if N % p == 0:
        return 1
    d = math.gcd(n, p - 1)
    return d if mod_pow(N, (p - 1) // d, p) == 1 else 0


def rho_bruteforce(N: int, p: int, n: int) -> int:
    return sum(1 for x in range(1, p + 1) if (pow(x, n, p) - N) % p == 0)


def phi_local(p: int, N: int, n: int) -> int:
    """Phi(p, N) = p (rho(N, p) - 1)."""
    return p * (rho(N, p, n) - 1)


def phi_q_oracle(q: int, N: int, n: int) -> complex:
    """Phi(q, N) = sum over 1 <= a <= q, gcd(a, q) = 1 of S(a, q) e(-aN/q).

    Direct O(q^2) double sum; test oracle only.
    """
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    if q > 5000:
        raise DomainError("phi_q_oracle is restricted to q <= 5000")
    a = np.array([k for k in range(1, q + 1) if math.gcd(k, q) == 1], dtype=np.int64)
    s = np.array([complete_sum(int(k), q, n) for k in a])
    ph = ((-a * (N % q)) % q) / q
    val = complex(np.sum(s * np.exp(2j * np.pi * ph)))
    if abs(val.imag) > 1e-9 * q * q:
        raise AccuracyError(f"Phi({q}, {N}) has imaginary part {val.imag:.3g}")
    return val


@dataclass(frozen=True)
class SingularSeriesResult:
    value: float
    prime_cutoff: int
    tail_bound: float
    variant: str = "rho_minus_one"


def euler_factor(N: int, p: int, n: int, variant: str = "rho_minus_one") -> float:
    r = rho(N, p, n)
    num = r - 1 if variant == "rho_minus_one" else r
    return 1.0 + num / (p - 1) ** 2


def tail_bound(n: int, cutoff: int) -> float:
    """Bound on |log| of the omitted factors p > cutoff.

    Each factor is 1 + x_p with |x_p| <= n/(p-1)**2; sum over p > cutoff is
    at most n * int_cutoff^inf dt/(t-1)**2 = n/(cutoff-1).  For small cutoffs
    |log(1+x)| <= |x|/(1-|x|) needs the extra factor.
    """
    base = n / (cutoff - 1)
    xmax = (n - 1) / cutoff**2
    if cutoff**2 >= n * (n - 1):
        return base
    return base / (1 - xmax) if xmax < 1 else math.inf


def singular_series(
    N: int, n: int, prime_cutoff: int = DEFAULT_CUTOFF, variant: str = "rho_minus_one"
) -> SingularSeriesResult:
    """Truncated Euler product over primes p <= prime_cutoff.

    ``rho_minus_one``: factors 1 + (rho - 1)/(p - 1)**2 (derived from Phi(p, N)).
    ``rho``: factors 1 + rho/(p - 1)**2 (the alternative form, kept for comparison).
    """
    if prime_cutoff < 2:
        raise DomainError(f"prime_cutoff must be >= 2, got {prime_cutoff}")
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    shift = 1 if variant == "rho_minus_one" else 0
    value = 1.0
    for p in base_primes(prime_cutoff).tolist():
        if N % p == 0:
            r = 1
        else:
            d = math.gcd(n, p - 1)
            r = d if pow(N, (p - 1) // d, p) == 1 else 0
        value *= 1.0 + (r - shift) / (p - 1) ** 2
    return SingularSeriesResult(value, prime_cutoff, tail_bound(n, prime_cutoff), variant)
