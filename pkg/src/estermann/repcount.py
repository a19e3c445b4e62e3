"""Exact and brute-force representation counts, and the asymptotic main term."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from estermann.arith import iroot, iroot_ceil
from estermann.dissect import ProblemInstance, omega, theta
from estermann.errors import AccuracyError, DomainError, ResourceError
from estermann.primes import DEFAULT_BUDGET, PrimeWindow, sieve_interval
from estermann.sseries import DEFAULT_CUTOFF, singular_series

MAX_EXACT_N = 10**10
MAX_BRUTE_N = 10**6


@dataclass
class CountReport:
    instance: ProblemInstance
    exact: int | None
    sseries_value: float
    main_term: float
    ratio: float | None
    m_values_used: int
    elapsed: float = 0.0
    variant: str = "rho_minus_one"
    error: str | None = field(default=None)


def m_values(inst: ProblemInstance) -> range:
    """Natural m with |m**n - mu3 N| <= H, from exact integer roots."""
    lo, hi = inst.window(3)
    lo = max(lo, 1)
    if hi < lo:
        return range(0)
    return range(iroot_ceil(lo, inst.n), iroot(hi, inst.n) + 1)


def _prime_window(lo: int, hi: int, budget: int) -> PrimeWindow | None:
    lo = max(lo, 2)
    return sieve_interval(lo, hi, budget) if hi >= lo else None


def _pairs_for(s: int, w1: PrimeWindow, w2: PrimeWindow) -> int:
    # p1 in W1 and p2 = s - p1 in W2
    p1 = w1.primes_between(max(w1.lo, s - w2.hi), min(w1.hi, s - w2.lo))
    if p1.size == 0:
        return 0
    return int(np.count_nonzero(w2.flags[(s - p1) - w2.lo]))


def pair_counts(inst: ProblemInstance, workers: int = 1, budget: int = DEFAULT_BUDGET) -> dict[int, int]:
    """Per-m number of ordered prime pairs (p1, p2) completing the representation."""
    if inst.N > MAX_EXACT_N:
        raise ResourceError(f"N={inst.N} exceeds the exact-count limit {MAX_EXACT_N}")
    ms = m_values(inst)
    w1 = _prime_window(*inst.window(1), budget)
    w2 = _prime_window(*inst.window(2), budget)
    if w1 is None or w2 is None:
        return {m: 0 for m in ms}

    def job(m):
        return _pairs_for(inst.N - m**inst.n, w1, w2)

    if workers > 1 and len(ms) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(job, ms))
    else:
        counts = [job(m) for m in ms]
    return dict(zip(ms, counts))


def main_term(inst: ProblemInstance, sseries_value: float) -> float:
    """3 S(N) H**2 / (n mu3**(1-1/n) N**(1-1/n) (ln N)**2)."""
    if sseries_value < 0:
        raise DomainError("singular series value must be non-negative")
    n, N = inst.n, inst.N
    e = 1 - 1 / n
    return 3 * sseries_value * inst.H**2 / (n * inst.mu3**e * N**e * math.log(N) ** 2)


def exact_count(
    inst: ProblemInstance,
    variant: str = "rho_minus_one",
    prime_cutoff: int = DEFAULT_CUTOFF,
    workers: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> CountReport:
    """Exact J_n(N, H) (ordered pairs) together with the predicted main term."""
    t0 = time.perf_counter()
    per_m = pair_counts(inst, workers=workers, budget=budget)
    exact = sum(per_m.values())
    ss = singular_series(inst.N, inst.n, prime_cutoff, variant).value
    mt = main_term(inst, ss)
    return CountReport(
        instance=inst,
        exact=exact,
        sseries_value=ss,
        main_term=mt,
        ratio=exact / mt if mt > 0 else None,
        m_values_used=len(per_m),
        elapsed=time.perf_counter() - t0,
        variant=variant,
    )


def _is_prime_td(k: int) -> bool:
    if k < 2:
        return False
    if k % 2 == 0:
        return k == 2
    d = 3
    while d * d <= k:
        if k % d == 0:
            return False
        d += 2
    return True


def brute_count(inst: ProblemInstance) -> int:
    """Exhaustive count over all primes p1, p2 <= N and m**n <= N (independent oracle)."""
    N, n = inst.N, inst.n
    if N > MAX_BRUTE_N:
        raise ResourceError(f"brute_count limited to N <= {MAX_BRUTE_N}")
    primes = [k for k in range(2, N + 1) if _is_prime_td(k)]
    prime_set = set(primes)
    H = Fraction(inst.H)
    c1, c2, c3 = (Fraction(mu) * N for mu in inst.mus)
    total = 0
    m = 1
    while m**n <= N:
        mn = m**n
        if abs(mn - c3) <= H:
            for p1 in primes:
                p2 = N - mn - p1
                if p2 in prime_set and abs(p1 - c1) <= H and abs(p2 - c2) <= H:
                    total += 1
        m += 1
    return total


def h_threshold(N: int, n: int) -> float:
    """N**(1 - theta(n)) (ln N)**omega(n): the admissible-H threshold."""
    if not N > 1:
        raise DomainError(f"need N > 1, got {N}")
    return N ** (1 - theta(n)) * math.log(N) ** omega(n)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


def _sinc3_panels(upper: float, panels: int) -> float:
    h = upper / panels
    total = []
    for p0 in range(0, panels, 1 << 15):
        idx = np.arange(p0, min(panels, p0 + (1 << 15)))
        u = (idx[:, None] * h + (_GL_X[None, :] + 1) * (h / 2)).ravel()
        vals = np.sinc(u / np.pi) ** 3
        total.extend((vals.reshape(len(idx), -1) @ _GL_W * (h / 2)).tolist())
    return math.fsum(total)


def sinc3_integral(upper: float, tol: float = 1e-12) -> float:
    """int_0^upper (sin u / u)**3 du by Gauss-Legendre panels, doubled to convergence."""
    if upper <= 0:
        return 0.0
    panels = max(1, math.ceil(upper))
    prev = _sinc3_panels(upper, panels)
    for _ in range(12):
        panels *= 2
        cur = _sinc3_panels(upper, panels)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    raise AccuracyError("sinc**3 quadrature did not converge")


def sinc3_infinite(tol: float = 1e-10) -> tuple[float, float]:
    """int_0^inf (sin u/u)**3 du; returns (value, bound on the truncated tail).

    |int_U^inf| <= int_U^inf u**-3 du = 1/(2 U**2), so U = (2 tol)**-1/2.
    """
    upper = math.sqrt(1 / (2 * tol))
    return sinc3_integral(upper), 1 / (2 * upper**2)


def j_integral(H: float, L: float) -> float:
    """(4 H**2/pi) int_{|u| <= 2 pi L**2} (sin u/u)**3 du, equal to 3 H**2 + O(H**2/L**6)."""
    if not (H > 0 and L > 1):
        raise DomainError(f"need H > 0 and L > 1, got H={H}, L={L}")
    return 4 * H * H / math.pi * 2 * sinc3_integral(2 * math.pi * L * L)
