"""Acceptance checks, one function per criterion.

Each check returns a :class:`Check`; ``detail`` holds only deterministic
quantities so that repeated runs print byte-identical lines.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from estermann.arith import RationalApprox, dirichlet_approx
from estermann.bounds import difference_poly, gauss_bound_ratio, min_norm_sum, weyl_bound_rhs
from estermann.dissect import ProblemInstance
from estermann.errors import DomainError
from estermann.expsum import SumWindow, complete_sum, gamma_integral, weyl_sum
from estermann.primes import base_primes
from estermann.repcount import brute_count, exact_count, j_integral, pair_counts, sinc3_infinite
from estermann.sseries import phi_q_oracle, rho

MUS = ((1 / 3, 1 / 3, 1 / 3), (0.5, 0.3, 0.2), (0.2, 0.3, 0.5))
ORACLE_NS = (20, 57, 100, 250, 501, 1000, 1999, 3000, 4096, 5000)


@dataclass(frozen=True)
class Check:
    id: str
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.id} {self.title}: {self.detail}"


def oracle_instances() -> list[ProblemInstance]:
    out = []
    for N in ORACLE_NS:
        for n in (3, 4):
            for mu in MUS:
                for H in (N / 10, N / 4):
                    try:
                        out.append(ProblemInstance(N, n, *mu, H))
                    except DomainError:
                        # H = N/4 exceeds min(mu) N = N/5 for the skewed triples
                        continue
    return out


def check_oracle(workers: int = 1) -> Check:
    insts = oracle_instances()

    def both(i):
        return sum(pair_counts(i).values()), brute_count(i)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            res = list(pool.map(both, insts))
    else:
        res = [both(i) for i in insts]
    bad = [(i, e, b) for i, (e, b) in zip(insts, res) if e != b]
    total = sum(e for e, _ in res)
    return Check("C1", "exact_count == brute_count", len(insts) >= 50 and not bad,
                 f"{len(insts)} instances, {len(bad)} mismatches, total solutions {total}")


def check_local_factor() -> Check:
    worst = 0.0
    for p in base_primes(199).tolist():
        for n in (3, 4, 5):
            for N in range(1, 21):
                err = abs(phi_q_oracle(p, N, n) - p * (rho(N, p, n) - 1)) / p**2
                worst = max(worst, err)
    return Check("C2", "Phi(p,N) = p(rho-1)", worst <= 1e-9, f"max |diff|/p^2 = {worst:.3e} (tol 1e-9)")


def squarefree_upto(x: int) -> list[int]:
    return [q for q in range(2, x + 1) if all(q % (d * d) for d in range(2, math.isqrt(q) + 1))]


def multiplicativity_pairs(count: int = 100, seed: int = 7):
    sf = squarefree_upto(50)
    pairs = [(a, b) for a in sf for b in sf if a < b and math.gcd(a, b) == 1]
    rng = random.Random(seed)
    chosen = rng.sample(pairs, count)
    return [(a, b, rng.randint(1, 10**6), (3, 4, 5)[k % 3]) for k, (a, b) in enumerate(chosen)]


def check_multiplicativity() -> Check:
    worst = 0.0
    for q1, q2, N, n in multiplicativity_pairs():
        lhs = phi_q_oracle(q1 * q2, N, n)
        rhs = phi_q_oracle(q1, N, n) * phi_q_oracle(q2, N, n)
        worst = max(worst, abs(lhs - rhs) / (q1 * q2) ** 2)
    return Check("C3", "Phi multiplicative", worst <= 1e-6, f"100 pairs, max |diff|/q^2 = {worst:.3e} (tol 1e-6)")


def check_j_integral() -> Check:
    val, tail = sinc3_infinite()
    err = abs(val - 3 * math.pi / 8)
    rel = max(abs(j_integral(H, 20.0) / (3 * H * H) - 1) for H in (1.0, 10.0, 1e3, 1e6))
    ok = err <= 1e-8 and rel <= 1e-4
    return Check("C4", "J-integral constant", ok,
                 f"|I - 3pi/8| = {err:.2e} (tail bound {tail:.1e}); max |J/3H^2 - 1| at L=20 = {rel:.2e}")


def iterated_difference(n: int, hs, u: int) -> int:
    def f(v, k):
        if k == 0:
            return v**n
        return f(v + hs[k - 1], k - 1) - f(v, k - 1)

    return f(u, len(hs))


def check_difference_identity(seed: int = 11) -> Check:
    rng = random.Random(seed)
    cases = bad = 0
    for n in range(2, 9):
        for j in range(1, n):
            for _ in range(100):
                hs = [rng.choice([-1, 1]) * rng.randint(1, 60) for _ in range(j)]
                u = rng.randint(-1000, 1000)
                p = difference_poly(n, j, hs)
                ok = (math.prod(hs) * p(u) == iterated_difference(n, hs, u)
                      and p.degree == n - j and p.leading == math.factorial(n) // math.factorial(n - j))
                bad += not ok
                cases += 1
    return Check("C5", "Weyl differencing identity", bad == 0, f"{cases} cases, {bad} failures")


def norm_sum_samples(count: int = 1000, seed: int = 3):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        q = int(rng.integers(1, 300))
        a = int(rng.integers(0, q))
        while math.gcd(a, q) != 1:
            a = (a + 1) % q
        lam = float(rng.uniform(-1, 1)) / q**2
        out.append((RationalApprox(a, q, lam), float(rng.uniform(0.5, 4000)), float(rng.uniform(0.1, 200)),
                    float(rng.random())))
    return out


def minor_arc_alphas(count: int = 240, seed: int = 5):
    rng = np.random.default_rng(seed)
    out = [float(x) for x in rng.random(count // 2)]
    for _ in range(count - count // 2):
        q = int(rng.integers(1, 60))
        a = int(rng.integers(0, q))
        out.append(a / q + float(rng.normal(0, 1e-9)))
    return out


def major_arc_grid(x: float = 1e4, y: float = 1e3, n: int = 3):
    grid = []
    for q in range(1, 51):
        reps = sorted({a for a in (1, q - 1, (q // 2) | 1, (2 * q) // 3) if 0 < a < q and math.gcd(a, q) == 1}) or [0]
        lim = 1.0 / (2 * n * q * x ** (n - 1))
        for a in reps:
            for f in (0.0, 0.25, -0.6, 1.0):
                grid.append(RationalApprox(a, q, f * lim))
    return grid


def check_estimates() -> Check:
    # (a) min-norm sum inequality, exact
    l4 = [min_norm_sum(ap, x, y, b) for ap, x, y, b in norm_sum_samples()]
    l4_ok = all(ok for _, _, ok in l4)
    l4_max = max(v / b for v, b, _ in l4)
    # (b) complete sums
    gmax = {n: max(gauss_bound_ratio(q, n) for q in range(2, 501)) for n in (3, 4)}
    g_ok = all(gmax[n] <= n for n in gmax)
    # (c) minor-arc Weyl bound, n=3, x=1e5, y=1e4
    x, y, n = 1e5, 1e4, 3
    w = SumWindow(x, y, n)
    Q = 2 * n * (n - 1) * x ** (n - 2) * y
    t2 = []
    for al in minor_arc_alphas():
        ap = dirichlet_approx(al, Q)
        t2.append(abs(weyl_sum(ap, w)) / weyl_bound_rhs(ap.q, y, n))
    t2_max = max(t2)
    # (d) small-|lam| asymptotic residual
    w1 = SumWindow(1e4, 1e3, 3)
    res = []
    for ap in major_arc_grid():
        approx = (w1.y / ap.q) * complete_sum(ap.a, ap.q, 3) * gamma_integral(ap.lam, w1)
        res.append(abs(weyl_sum(ap, w1) - approx) / ap.q**0.6)
    c1_max = max(res)
    ok = l4_ok and g_ok and len(t2) >= 200 and t2_max <= 10 and c1_max <= 10
    detail = (f"(a) {len(l4)} samples ok={l4_ok} max value/bound={l4_max:.4f}; "
              f"(b) max|S|/q^(1-1/n): n=3 {gmax[3]:.4f}, n=4 {gmax[4]:.4f}; "
              f"(c) {len(t2)} alphas max|T|/rhs={t2_max:.4f}; "
              f"(d) {len(res)} grid points max residual/q^0.6={c1_max:.4f}")
    return Check("C6", "estimate sharpness sweeps", ok, detail)


def check_asymptotic_ratio(workers: int = 1) -> Check:
    Ns = (10**6, 10**7, 10**8)
    good, bad = [], []
    for N in Ns:
        inst = ProblemInstance(N, 3, 1 / 3, 1 / 3, 1 / 3, N**0.9)
        good.append(exact_count(inst, variant="rho_minus_one", workers=workers).ratio)
        bad.append(exact_count(inst, variant="rho", workers=workers).ratio)
    dev = [abs(r - 1) for r in good]
    ok_good = all(0.5 <= r <= 1.5 for r in good) and all(b <= a for a, b in zip(dev, dev[1:]))
    ok_bad = any(not (0.7 <= r <= 1.3) for r in bad)
    detail = ("rho-1 ratios " + ", ".join(f"{r:.4f}" for r in good)
              + "; rho ratios " + ", ".join(f"{r:.4f}" for r in bad))
    return Check("C7", "asymptotic ratio", ok_good and ok_bad, detail)


def check_determinism() -> Check:
    from estermann.experiment import ExperimentConfig, emit_report, run_experiment

    cfg = dict(Ns=[2000, 54321, 10**6, 10**12], n=3, h_policy="exponent", h_value=0.85, arc_samples=6)
    outs = []
    for workers in (1, 2, 1):
        reps, arcs = run_experiment(ExperimentConfig.from_mapping({**cfg, "workers": workers}), return_arcs=True)
        outs.append((emit_report(reps, "csv"), emit_report(reps, "json", arcs)))
    exp_ok = outs[0] == outs[1] == outs[2]
    v = [render(run_checks(["C1", "C2", "C5"], workers=wk)) for wk in (1, 2, 1)]
    ver_ok = v[0] == v[1] == v[2]
    return Check("C8", "determinism", exp_ok and ver_ok,
                 f"experiment identical={exp_ok}, verify identical={ver_ok} (serial, parallel, serial)")


CHECKS = {
    "C1": check_oracle,
    "C2": check_local_factor,
    "C3": check_multiplicativity,
    "C4": check_j_integral,
    "C5": check_difference_identity,
    "C6": check_estimates,
    "C7": check_asymptotic_ratio,
    "C8": check_determinism,
}
_PARALLEL = {"C1", "C7"}


def run_checks(only=None, workers: int = 1) -> list[Check]:
    ids = list(CHECKS) if not only else [c.upper() for c in only]
    out = []
    for cid in ids:
        fn = CHECKS[cid]
        out.append(fn(workers=workers) if cid in _PARALLEL else fn())
    return out


def render(checks) -> str:
    return "".join(c.line() + "\n" for c in checks)
