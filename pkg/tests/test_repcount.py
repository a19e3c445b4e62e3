import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from estermann.dissect import ProblemInstance
from estermann.errors import DomainError, ResourceError
from estermann.repcount import (
    brute_count,
    exact_count,
    h_threshold,
    j_integral,
    m_values,
    main_term,
    pair_counts,
    sinc3_infinite,
    sinc3_integral,
)

THIRD = (1 / 3, 1 / 3, 1 / 3)
MUS = [THIRD, (0.5, 0.3, 0.2), (0.2, 0.3, 0.5)]


def test_small_example():
    inst = ProblemInstance(20, 3, *THIRD, 6)
    assert pair_counts(inst) == {1: 0, 2: 2}
    rep = exact_count(inst)
    assert rep.exact == 2 and rep.m_values_used == 2
    assert brute_count(inst) == 2


def test_ordered_pairs_counted_twice():
    # 12 = 5 + 7 = 7 + 5 with both primes inside both windows
    inst = ProblemInstance(20, 3, *THIRD, 6)
    assert pair_counts(inst)[2] == 2


def test_no_admissible_m():
    inst = ProblemInstance(1000, 3, 0.45, 0.45, 0.1, 1.0)  # |m^3 - 100| <= 1 has no solution
    assert list(m_values(inst)) == []
    assert exact_count(inst).exact == 0 == brute_count(inst)
    tiny = ProblemInstance(10, 3, 0.49, 0.5, 0.01, 0.05)  # mu3 N + H < 1
    assert brute_count(tiny) == 0 == exact_count(tiny).exact


def test_half_unit_window():
    inst = ProblemInstance(10, 3, *THIRD, 0.5)
    assert exact_count(inst).exact == brute_count(inst)


@settings(max_examples=60, deadline=None)
@given(st.integers(10, 3000), st.sampled_from([3, 4]), st.sampled_from(MUS), st.floats(0.01, 0.99))
def test_exact_matches_brute(N, n, mu, frac):
    H = frac * min(mu) * N
    inst = ProblemInstance(N, n, *mu, H)
    assert sum(pair_counts(inst).values()) == brute_count(inst)


def test_swap_symmetry():
    for N in (500, 2000, 10**5):
        inst = ProblemInstance(N, 3, 0.5, 0.3, 0.2, 0.15 * N)
        assert exact_count(inst).exact == exact_count(inst.swapped()).exact


def test_monotone_in_H():
    counts = [exact_count(ProblemInstance(10**5, 3, *THIRD, H)).exact for H in (100, 1000, 5000, 20000, 33000)]
    assert counts == sorted(counts)


def test_per_m_partition():
    inst = ProblemInstance(10**6, 3, *THIRD, 10**6**0.9)
    per = pair_counts(inst)
    ms = sorted(per)
    half = len(ms) // 2
    assert sum(per[m] for m in ms[:half]) + sum(per[m] for m in ms[half:]) == exact_count(inst).exact
    assert pair_counts(inst, workers=3) == per


def test_m_window_boundaries():
    # mu3 N = 64**3 exactly; the window edge sits on 63**3
    N, H = 4 * 64**3, 64**3 - 63**3
    inst = ProblemInstance(N, 3, 0.45, 0.3, 0.25, H)
    assert m_values(inst) == range(63, 65)
    assert m_values(ProblemInstance(N, 3, 0.45, 0.3, 0.25, H - 1e-9)) == range(64, 65)
    assert m_values(ProblemInstance(N, 3, 0.45, 0.3, 0.25, 65**3 - 64**3)) == range(63, 66)


def test_resource_limits():
    with pytest.raises(ResourceError):
        exact_count(ProblemInstance(10**12, 3, *THIRD, 10**10))
    with pytest.raises(ResourceError):
        brute_count(ProblemInstance(2 * 10**6, 3, *THIRD, 10**5))


def test_main_term():
    inst = ProblemInstance(10**6, 3, *THIRD, 10**5)
    assert main_term(inst, 0.0) == 0
    S = 1.07
    n, N, H, L = 3, 10**6, 10**5, math.log(10**6)
    want = 3 ** (2 - 1 / n) * S * H**2 / (n * N ** (1 - 1 / n) * L**2)
    assert main_term(inst, S) == pytest.approx(want, rel=1e-12)
    with pytest.raises(DomainError):
        main_term(inst, -1)


def test_ratio_reported():
    rep = exact_count(ProblemInstance(10**6, 3, *THIRD, 10**6**0.9))
    assert rep.ratio == pytest.approx(rep.exact / rep.main_term)
    assert 0.5 <= rep.ratio <= 1.5


def test_h_threshold():
    assert h_threshold(math.e, 3) == pytest.approx(math.e ** (5 / 6))
    v = h_threshold(10**9, 3)
    assert v == pytest.approx(1e9 ** (5 / 6) * math.log(1e9) ** 10, rel=1e-12)
    assert 4e20 < v < 5e20 and v > 10**9


def test_sinc_integrals():
    val, tail = sinc3_infinite()
    assert abs(val - 3 * math.pi / 8) <= 1e-9 + tail
    assert sinc3_integral(0) == 0
    assert j_integral(1.0, 200.0) == pytest.approx(3, rel=1e-8)
    assert abs(j_integral(10.0, 20.0) / 300 - 1) <= 10 * 20.0**-6
    with pytest.raises(DomainError):
        j_integral(1.0, 0.5)
