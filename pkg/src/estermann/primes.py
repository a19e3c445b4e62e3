"""Segmented prime sieving over short windows and prime exponential sums."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from estermann.arith import RationalApprox, compensated_sum, expi, mobius, phase_array, totient
from estermann.errors import DomainError, ResourceError, StateError

SEGMENT = 1 << 20
# Largest window (hi - lo + 1) the sieve will allocate, in bytes of bool storage.
DEFAULT_BUDGET = 1 << 31


@lru_cache(maxsize=8)
def base_primes(limit: int) -> np.ndarray:
    """All primes <= limit as int64 (plain Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    out = np.flatnonzero(flags).astype(np.int64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PrimeWindow:
    """Exact primality for the integers lo..hi inclusive."""

    lo: int
    hi: int
    flags: np.ndarray = field(repr=False)
    primes: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return int(self.primes.size)

    def __contains__(self, p) -> bool:
        p = int(p)
        return self.lo <= p <= self.hi and bool(self.flags[p - self.lo])

    def __iter__(self):
        return iter(self.primes.tolist())

    def __len__(self):
        return self.count

    def covers(self, lo: int, hi: int) -> bool:
        return self.lo <= lo and hi <= self.hi

    def is_prime_many(self, values: np.ndarray) -> np.ndarray:
        """Vectorised membership; values outside [lo, hi] map to False."""
        values = np.asarray(values, dtype=np.int64)
        inside = (values >= self.lo) & (values <= self.hi)
        out = np.zeros(values.shape, dtype=bool)
        out[inside] = self.flags[values[inside] - self.lo]
        return out

    def primes_between(self, lo: int, hi: int) -> np.ndarray:
        """Primes p of the window with lo <= p <= hi."""
        i = np.searchsorted(self.primes, lo, side="left")
        j = np.searchsorted(self.primes, hi, side="right")
        return self.primes[i:j]


def _sieve(lo: int, hi: int) -> np.ndarray:
    flags = np.ones(hi - lo + 1, dtype=bool)
    base = base_primes(math.isqrt(hi))
    for seg_lo in range(lo, hi + 1, SEGMENT):
        seg_hi = min(seg_lo + SEGMENT - 1, hi)
        seg = flags[seg_lo - lo : seg_hi - lo + 1]
        for p in base.tolist():
            if p * p > seg_hi:
                break
            start = max(p * p, -(-seg_lo // p) * p)
            if start <= seg_hi:
                seg[start - seg_lo :: p] = False
    if lo < 2:
        flags[: 2 - lo] = False
    return flags


def sieve_interval(lo: int, hi: int, budget: int = DEFAULT_BUDGET) -> PrimeWindow:
    """Sieve [lo, hi]; results are cached and shared read-only."""
    lo, hi = int(lo), int(hi)
    if lo < 1 or hi < lo:
        raise DomainError(f"need 1 <= lo <= hi, got [{lo}, {hi}]")
    if hi > 2**63:
        raise DomainError("hi exceeds 2**63")
    if hi - lo + 1 > budget:
        raise ResourceError(f"window of {hi - lo + 1} integers exceeds budget {budget}")
    return _cached_window(lo, hi)


@lru_cache(maxsize=16)
def _cached_window(lo: int, hi: int) -> PrimeWindow:
    flags = _sieve(lo, hi)
    primes = (np.flatnonzero(flags) + lo).astype(np.int64)
    flags.setflags(write=False)
    primes.setflags(write=False)
    return PrimeWindow(lo, hi, flags, primes)


def half_open_range(x, y) -> tuple[int, int]:
    """Integer bounds (lo, hi) of x - y < k <= x, computed exactly."""
    x, y = Fraction(x), Fraction(y)
    return math.floor(x - y) + 1, math.floor(x)


def _window_for(lo: int, hi: int, window: PrimeWindow | None) -> PrimeWindow | None:
    lo = max(lo, 2)
    if hi < lo:
        return None
    if window is None:
        return sieve_interval(lo, hi)
    if not window.covers(lo, hi):
        raise StateError(f"window [{window.lo}, {window.hi}] does not cover [{lo}, {hi}]")
    return window


def prime_exp_sum(approx: RationalApprox, N_k, width, window: PrimeWindow | None = None) -> complex:
    """Sum of e(alpha p) over primes N_k - width < p <= N_k.

    If ``window`` is given it must cover the range, otherwise StateError.
    Without a window the range is sieved (and cached) on demand.
    """
    lo, hi = half_open_range(N_k, width)
    win = _window_for(lo, hi, window)
    if win is None:
        return 0j
    ps = win.primes_between(lo, hi)
    if ps.size == 0:
        return 0j
    return compensated_sum(expi(phase_array(approx, ps, 1)))


def prime_powers_between(lo: int, hi: int, kmin: int = 2) -> list[tuple[int, int]]:
    """(p, p**k) pairs with k >= kmin and lo <= p**k <= hi."""
    out = []
    if hi < 4:
        return out
    for p in base_primes(math.isqrt(hi)).tolist():
        pk = p**kmin
        while pk <= hi:
            if pk >= lo:
                out.append((p, pk))
            pk *= p
    return out


def von_mangoldt_sum(approx: RationalApprox, x, y, window: PrimeWindow | None = None) -> complex:
    """Sum of Lambda(k) e(alpha k) over x - y < k <= x."""
    if not (x > y > 0):
        raise DomainError(f"need x > y > 0, got x={x}, y={y}")
    lo, hi = half_open_range(x, y)
    win = _window_for(lo, hi, window)
    terms = []
    if win is not None:
        ps = win.primes_between(lo, hi)
        if ps.size:
            terms.append(np.log(ps.astype(np.float64)) * expi(phase_array(approx, ps, 1)))
    pp = prime_powers_between(lo, hi)
    if pp:
        ps = np.array([p for p, _ in pp], dtype=np.float64)
        ks = np.array([pk for _, pk in pp], dtype=np.int64)
        terms.append(np.log(ps) * expi(phase_array(approx, ks, 1)))
    if not terms:
        return 0j
    return compensated_sum(np.concatenate(terms))


def major_arc_prime_approx(q: int, lam: float, x, y) -> complex:
    """mu(q)/phi(q) * sin(pi lam y)/(pi lam) * e(lam (x - y/2))."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    mu = mobius(q)
    if mu == 0:
        return 0j
    if abs(lam) * y < 1e-12:
        kernel = float(y)
    else:
        kernel = math.sin(math.pi * lam * y) / (math.pi * lam)
    # lam*(x - y/2) reduced exactly so large x keeps the phase
    ph = Fraction(lam) * (Fraction(x) - Fraction(y) / 2)
    ph -= math.floor(ph)
    return mu / totient(q) * kernel * expi(float(ph))
