import math

import numpy as np
import pytest

from estermann.arith import RationalApprox
from estermann.dissect import (
    ArcClass,
    ProblemInstance,
    classify_arc,
    dissection_params,
    eta,
    omega,
    reduce_to_period,
    sample_arcs,
    theta,
)
from estermann.errors import DomainError

THIRD = (1 / 3, 1 / 3, 1 / 3)


def test_exponents():
    assert theta(3) == pytest.approx(1 / 6) and omega(3) == 10 and eta(3) == 20
    assert theta(4) == pytest.approx(1 / 12)


def test_params_example():
    p = dissection_params(ProblemInstance(10**9, 3, *THIRD, 1e7))
    assert p.N3 == pytest.approx((1e9 / 3 + 1e7) ** (1 / 3), rel=1e-14)
    assert p.H3 == pytest.approx(p.N3 - (1e9 / 3 - 1e7) ** (1 / 3), rel=1e-10)
    assert p.tau == pytest.approx(12 * p.N3 * p.H3)
    assert p.L == pytest.approx(math.log(1e9))
    assert p.major_radius == pytest.approx(p.L**2 / 1e7)


@pytest.mark.parametrize(
    "args",
    [
        (10, 2, *THIRD, 1),
        (10, 3, 0.5, 0.5, 0.0, 1),
        (10, 3, 0.5, 0.3, 0.3, 1),
        (30, 3, *THIRD, 10),
        (30, 3, *THIRD, 0),
        (0, 3, *THIRD, 1),
    ],
)
def test_instance_validation(args):
    with pytest.raises(DomainError):
        ProblemInstance(*args)


def test_window_exact():
    inst = ProblemInstance(20, 3, *THIRD, 6)
    assert inst.window(1) == (1, 12)  # 20/3 = 6.67 -> [0.67, 12.67]
    assert inst.window(3) == (1, 12)
    assert inst.swapped().mus == (inst.mu2, inst.mu1, inst.mu3)


@pytest.fixture(scope="module")
def big():
    return dissection_params(ProblemInstance(10**18, 3, *THIRD, 1e15))


def test_classify_zero(big):
    cls, ap = classify_arc(0.0, big)
    assert cls is ArcClass.MAJOR1 and ap == RationalApprox(0, 1, 0.0)


def test_classify_second_major(big):
    alpha = 0.5 + 2 * big.major_radius
    assert 2 * big.major_radius <= 1 / (2 * big.tau)
    cls, ap = classify_arc(alpha, big)
    assert cls is ArcClass.MAJOR2 and (ap.a, ap.q) == (1, 2)


def test_classify_boundary_tie(big):
    cls, _ = classify_arc(0.5 + big.major_radius, big)
    lam = classify_arc(0.5 + big.major_radius, big)[1].lam
    assert cls is ArcClass.MAJOR1 or abs(lam) > big.major_radius


def test_classify_minor_golden(big):
    g = (math.sqrt(5) - 1) / 2
    cls, ap = classify_arc(g, big, eta_override=1.5)
    assert cls is ArcClass.MINOR and ap.q > big.L**1.5
    # with the printed exponent the cap exceeds tau at this scale
    assert classify_arc(g, big)[0] is not ArcClass.MINOR


def test_classes_partition_and_period(big):
    rng = np.random.default_rng(0)
    seen = set()
    for alpha in rng.random(10_000):
        cls, ap = classify_arc(float(alpha), big, eta_override=1.5)
        seen.add(cls)
        assert classify_arc(float(alpha) + 1, big, eta_override=1.5)[0] is cls
        r = reduce_to_period(float(alpha), big.tau)
        assert -1 / big.tau <= r < 1 - 1 / big.tau
    assert seen <= set(ArcClass)


def test_sample_arcs_populates_and_is_deterministic(big):
    a = sample_arcs(big, 200, seed=3, eta_override=1.5)
    b = sample_arcs(big, 200, seed=3, eta_override=1.5)
    assert a == b and sum(a.counts.values()) == 200
    assert all(a.counts[c.value] > 0 for c in ArcClass)
    print("per-class max ratios", a.max_ratio)
    assert all(math.isfinite(v) for v in a.max_ratio.values())


def test_desk_scale_all_major():
    p = dissection_params(ProblemInstance(10**8, 3, *THIRD, 1e8**0.9))
    s = sample_arcs(p, 30, seed=1)
    assert s.counts["Minor"] == 0
