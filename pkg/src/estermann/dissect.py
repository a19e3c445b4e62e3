"""Problem instances, dissection parameters and major/minor arc classification."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from estermann.arith import RationalApprox, dirichlet_approx
from estermann.bounds import corollary2_bound, weyl_bound_rhs
from estermann.errors import DomainError
from estermann.expsum import SumWindow, major_arc_weyl_approx, weyl_sum


@dataclass(frozen=True)
class ProblemInstance:
    """Count p1 + p2 + m**n = N with |p_k - mu_k N| <= H, |m**n - mu3 N| <= H."""

    N: int
    n: int
    mu1: float
    mu2: float
    mu3: float
    H: float

    def __post_init__(self):
        if self.N < 1:
            raise DomainError(f"N must be positive, got {self.N}")
        if self.n < 3:
            raise DomainError(f"degree must be >= 3, got {self.n}")
        if min(self.mu1, self.mu2, self.mu3) <= 0:
            raise DomainError("all mu must be positive")
        if abs(self.mu1 + self.mu2 + self.mu3 - 1) > 1e-12:
            raise DomainError(f"mu must sum to 1, got {self.mu1 + self.mu2 + self.mu3!r}")
        if not self.H > 0:
            raise DomainError(f"H must be positive, got {self.H}")
        if not self.H < min(self.mu1, self.mu2, self.mu3) * self.N:
            raise DomainError(f"H={self.H} must be below min(mu)*N={min(self.mu1, self.mu2, self.mu3) * self.N}")

    @property
    def mus(self) -> tuple[float, float, float]:
        return self.mu1, self.mu2, self.mu3

    def window(self, k: int) -> tuple[int, int]:
        """Integer range [lo, hi] of |v - mu_k N| <= H, exact (k = 1, 2, 3)."""
        centre = Fraction(self.mus[k - 1]) * self.N
        h = Fraction(self.H)
        return math.ceil(centre - h), math.floor(centre + h)

    def swapped(self) -> "ProblemInstance":
        return ProblemInstance(self.N, self.n, self.mu2, self.mu1, self.mu3, self.H)


def theta(n: int) -> float:
    return 1.0 / ((n - 1) * n)


def omega(n: int) -> float:
    return 2 ** (n + 1) / (n - 1) + n - 1


def eta(n: int) -> float:
    return 2 ** (n + 1) + (n - 1) ** 2


@dataclass(frozen=True)
class DissectionParams:
    n: int
    H: float
    N1: float
    N2: float
    N3: float
    H3: float
    tau: float
    theta: float
    omega: float
    eta: float
    L: float
    major_radius: float

    @property
    def q_major(self) -> float:
        """L**eta, the major-arc denominator cap."""
        return self.L**self.eta

    def cor1_radius(self, q: int) -> float:
        """1/(2 n q N3**(n-1)): the small-|lam| regime of the Weyl-sum asymptotic."""
        return 1.0 / (2 * self.n * q * self.N3 ** (self.n - 1))


def dissection_params(inst: ProblemInstance) -> DissectionParams:
    N, n, H = inst.N, inst.n, inst.H
    hi3, lo3 = inst.mu3 * N + H, inst.mu3 * N - H
    N3 = hi3 ** (1 / n)
    H3 = N3 - lo3 ** (1 / n)
    if not H3 > 0:
        raise DomainError("H3 must be positive")
    L = math.log(N)
    return DissectionParams(
        n=n,
        H=H,
        N1=inst.mu1 * N + H,
        N2=inst.mu2 * N + H,
        N3=N3,
        H3=H3,
        tau=2 * (n - 1) * n * N3 ** (n - 2) * H3,
        theta=theta(n),
        omega=omega(n),
        eta=eta(n),
        L=L,
        major_radius=L * L / H,
    )


class ArcClass(enum.Enum):
    MAJOR1 = "Major1"
    MAJOR2 = "Major2"
    MINOR = "Minor"

    def __str__(self):
        return self.value


def reduce_to_period(alpha: float, tau: float) -> float:
    """Shift alpha by an integer into [-1/tau, 1 - 1/tau)."""
    k = math.floor(Fraction(alpha) + Fraction(1 / tau))
    return float(Fraction(alpha) - k)


def classify_arc(alpha: float, params: DissectionParams, eta_override: float | None = None):
    """Return (ArcClass, RationalApprox) for alpha.

    ``eta_override`` replaces eta in the cap L**eta; at desk-scale N the
    printed exponent makes every alpha major.
    """
    a = reduce_to_period(alpha, params.tau)
    approx = dirichlet_approx(a, max(1.0, params.tau))
    e = params.eta if eta_override is None else eta_override
    cap = params.L**e
    lam = abs(approx.lam)
    if approx.q <= cap:
        if lam <= params.major_radius:
            return ArcClass.MAJOR1, approx
        if lam <= 1.0 / (approx.q * params.tau):
            return ArcClass.MAJOR2, approx
    return ArcClass.MINOR, approx


@dataclass
class ArcSummary:
    """Per-class sample counts and the largest observed |T| / bound ratio."""

    counts: dict
    max_ratio: dict
    eta_used: float


def sample_arcs(params: DissectionParams, samples: int, seed: int = 0, eta_override: float | None = None) -> ArcSummary:
    """Classify sampled alpha and compare T(alpha; N3, H3) with each class's estimate.

    Major1: |T - (H3/q) S(a,q) gamma| / q**0.6; Major2: |T| / corollary2_bound;
    Minor: |T| / weyl_bound_rhs.  Half the samples are uniform, half are
    placed near a/q with q under the cap so that major arcs are populated.
    """
    rng = np.random.default_rng(seed)
    e = params.eta if eta_override is None else eta_override
    cap = max(1, min(int(params.L**e), int(params.tau)))
    w = SumWindow(params.N3, params.H3, params.n)
    counts = {c.value: 0 for c in ArcClass}
    worst = {c.value: 0.0 for c in ArcClass}
    for i in range(samples):
        if i % 2 == 0:
            alpha = float(rng.random())
        else:
            q = int(rng.integers(1, cap + 1))
            a = int(rng.integers(0, q))
            while math.gcd(a, q) != 1:
                a = (a + 1) % q
            top = 1.0 / (q * params.tau)
            lam = float(np.exp(rng.uniform(math.log(top * 1e-3), math.log(top)))) * rng.choice([-1.0, 1.0])
            alpha = a / q + lam
        cls, approx = classify_arc(alpha, params, eta_override)
        t = weyl_sum(approx, w)
        if cls is ArcClass.MAJOR1:
            ratio = abs(t - major_arc_weyl_approx(approx, w, override=True)) / approx.q**0.6
        elif cls is ArcClass.MAJOR2:
            ratio = abs(t) / corollary2_bound(approx.q, params.N3, params.H3, params.n)
        else:
            ratio = abs(t) / weyl_bound_rhs(approx.q, max(params.H3, 1.0 + 1e-9), params.n)
        counts[cls.value] += 1
        worst[cls.value] = max(worst[cls.value], ratio)
    return ArcSummary(counts, worst, e)
