import math
from fractions import Fraction

import pytest

from tiledsurf import exact
from tiledsurf.exact import (
    BudgetExceeded,
    brute_force_fixed_point_mean,
    ExactDistribution,
    brute_force_dist,
    class_law,
    exact_dist,
    lclt_density,
    special_class_probs,
    tail_bound,
    tail_check,
    theory,
    tv_distance,
    uniform_cycle_dist,
    vertex_genfun,
    word_probability,
)
from tiledsurf.partitions import class_size, partitions_of, witten_zeta

F = Fraction


def test_vertex_genfun_examples():
    assert vertex_genfun(2, 2) == [0, 0, 4]
    assert vertex_genfun(3, 2) == [0, 18, 0, 18]
    for k in (2, 3, 4, 5):
        assert vertex_genfun(1, k) == [0, 1]


def test_vertex_genfun_frozen_values():
    # commuting pairs in S_n number n! * p(n): 24 * 5 = 120 for n = 4
    assert vertex_genfun(4, 2) == [0, 0, 456, 0, 120]
    assert vertex_genfun(3, 3) == [0, 108, 0, 108]
    assert vertex_genfun(4, 3) == [0, 0, 10944, 0, 2880]
    for n in range(1, 8):
        assert vertex_genfun(n, 2)[n] == math.factorial(n) * len(partitions_of(n))
    assert sum(vertex_genfun(6, 4)) == math.factorial(6) ** 4


def test_exact_dist_examples():
    assert exact_dist(3, 2).as_dict() == {1: F(1, 2), 3: F(1, 2)}
    assert exact_dist(2, 2).as_dict() == {2: F(1)}
    assert exact_dist(3, 3) == exact_dist(3, 2)


@pytest.mark.parametrize("n,k", [(n, 2) for n in range(1, 6)] + [(n, 3) for n in range(1, 5)])
def test_generating_function_matches_enumeration(n, k):
    assert exact_dist(n, k) == brute_force_dist(n, k)


def test_brute_force_joint_law_for_odd_k():
    d = brute_force_dist(3, 3)
    assert sum(d.joint_ab.values()) == 1
    # cycles of a and b total the number of vertices
    by_total: dict = {}
    for (a, b), p in d.joint_ab.items():
        by_total[a + b] = by_total.get(a + b, 0) + p
    assert sum(by_total.values()) == 1
    assert brute_force_dist(3, 2).joint_ab is None


def test_brute_force_budget(monkeypatch):
    with pytest.raises(BudgetExceeded):
        brute_force_dist(5, 2, budget=1000)
    monkeypatch.setenv("TSL_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        brute_force_dist(4, 2)
    monkeypatch.setenv("TSL_BUDGET", "1e6")
    assert brute_force_dist(4, 2) == exact_dist(4, 2)


def test_parity_of_support():
    for n in range(1, 10):
        for k in (2, 3, 4):
            assert all((n - v) % 2 == 0 for v in exact_dist(n, k).support)


def test_distribution_accessors():
    d = exact_dist(3, 2)
    assert d.mean() == 2 and d.variance() == 1 and d.moment(2) == 5
    assert d.tail(2) == F(1, 2) and d.pmf(2) == 0
    assert d.to_csv() == "value,numerator,denominator,float_prob\n1,1,2,0.5\n3,1,2,0.5\n"
    with pytest.raises(ValueError):
        ExactDistribution((1,), (F(1, 2),))


def test_word_probability_examples():
    assert word_probability(3, 2, (1, 1, 1)) == F(1, 2)
    assert word_probability(3, 2, (2, 1)) == 0
    total = sum(class_size(mu) * word_probability(5, 2, mu) for mu in partitions_of(5) if mu.is_even_class())
    assert total == 1
    with pytest.raises(ValueError):
        word_probability(3, 2, (2, 1, 1))


def test_class_sums_normalised():
    for n in range(1, 10):
        for k in (2, 3):
            assert sum(class_size(mu) * word_probability(n, k, mu) for mu in partitions_of(n)) == 1


def test_class_law_matches_generating_function():
    for n in range(1, 9):
        for k in (2, 3, 4):
            assert class_law(n, k) == exact_dist(n, k)


def test_tv_distance_frozen():
    assert tv_distance(3, 2) == F(1, 6)
    assert tv_distance(4, 2) == F(1, 6)
    assert [tv_distance(n, 2) for n in range(5, 10)] == [
        F(1, 15), F(5, 48), F(109, 1680), F(281, 5040), F(835, 18144),
    ]
    assert tv_distance(1, 2) == 0


def test_tv_distance_decreasing_from_six():
    values = [tv_distance(n, 2) for n in range(6, 12)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_tv_larger_k_not_worse():
    assert tv_distance(5, 3) <= tv_distance(5, 2)
    assert tv_distance(7, 4) < tv_distance(7, 2)


def test_uniform_cycle_dist_examples():
    assert uniform_cycle_dist(3).as_dict() == {1: F(1, 3), 2: F(1, 2), 3: F(1, 6)}
    assert uniform_cycle_dist(3, "alternating").as_dict() == {1: F(2, 3), 3: F(1, 3)}
    assert uniform_cycle_dist(1, "alternating").as_dict() == {1: F(1)}
    with pytest.raises(ValueError):
        uniform_cycle_dist(3, "cyclic")


def test_uniform_cycle_dist_routes_agree():
    for n in (2, 7, 15, 40):
        for g in ("symmetric", "alternating"):
            assert uniform_cycle_dist(n, g) == exact.uniform_cycle_dist_stirling(n, g)


def test_uniform_cycle_mean_large_n():
    d = uniform_cycle_dist(1000)
    assert d.mean() == exact.harmonic(1000)
    assert abs(float(d.mean()) - (math.log(1000) + exact.EULER_GAMMA)) < 0.05
    a = uniform_cycle_dist(1000, "alternating")
    assert abs(float(a.mean()) - (math.log(1000) + exact.EULER_GAMMA)) < 0.05


def test_special_class_probs():
    p4 = special_class_probs(4)
    assert p4.derangement == F(1, 4)
    assert p4.all_transpositions == F(1, 4)
    assert p4.single_cycle == F(2, 3)
    assert special_class_probs(1).derangement == 0
    gaps = [abs(float(special_class_probs(n).derangement) - math.exp(-1)) for n in range(6, 13)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_special_class_probs_match_enumeration():
    from itertools import permutations

    from tiledsurf.perm import Permutation

    n = 6
    even = [Permutation(p) for p in permutations(range(n)) if Permutation(p).is_even()]
    der = sum(1 for p in even if all(p(i) != i for i in range(n)))
    inv = sum(1 for p in even if p.cycle_type().parts[0] == 2)
    cyc = sum(1 for p in even if sum(1 for c in p.cycles() if len(c) > 1) == 1)
    got = special_class_probs(n)
    assert (got.derangement, got.all_transpositions, got.single_cycle) == (
        F(der, len(even)), F(inv, len(even)), F(cyc, len(even)),
    )


def test_theory_values():
    t = theory(1000, 2)
    assert t.expected_genus == pytest.approx(497.258, abs=5e-4)
    assert t.var_genus == pytest.approx(1.460, abs=5e-4)
    assert t.expected_cone_points == pytest.approx(math.log(1000) + exact.EULER_GAMMA - 1)
    assert t.expected_fixed_points == F(1000, 999)
    one = theory(1, 2)
    assert one.A == 1 and one.B == 0
    assert theory(1000, 3).expected_genus == pytest.approx(1000 - math.log(1000) - exact.EULER_GAMMA + 1)
    assert theory(1000, 4).expected_cone_points == pytest.approx(math.log(1000) + exact.EULER_GAMMA)
    assert theory(1000, 3).expected_cone_points == pytest.approx(2 * math.log(1000) + 2 * exact.EULER_GAMMA - 2)
    assert theory(1000, 5).expected_cone_points == pytest.approx(2 * math.log(1000) + 2 * exact.EULER_GAMMA)
    assert theory(1000, 5).var_genus == pytest.approx(math.log(1000) / 2 + exact.EULER_GAMMA / 2 - math.pi**2 / 12)
    assert theory(4, 2).expected_fixed_points is None


def test_harmonic_bracketing():
    # A(n) - log(n) decreases to gamma and stays above it
    prev = math.inf
    for n in (10, 100, 1000, 10**4, 10**5, 10**6):
        d = exact.harmonic_float(n) - math.log(n)
        assert exact.EULER_GAMMA < d < prev
        prev = d
    t = theory(50, 2)
    assert t.B == t.A - exact.harmonic2(50)


def test_expected_cone_points_relation():
    # E[s] = E[C] - E[F] for k = 2, with E[F] = 1 + 1/(n-1)
    for n in (5, 6, 7, 8):
        d = exact_dist(n, 2)
        if n <= 6:
            assert brute_force_fixed_point_mean(n) == exact.nica_fixed_points(n)
        assert d.mean() - exact.nica_fixed_points(n) > 0


def test_lclt_density():
    n = 10**4
    A = exact.harmonic_float(n)
    B = A - exact.harmonic2_float(n)
    l = round(A)
    l += (n - l) % 2
    assert lclt_density(l, n) == pytest.approx(2 / math.sqrt(2 * math.pi * B) * math.exp(-((l - A) ** 2) / (2 * B)))
    total = sum(lclt_density(l, n) for l in range(0, 40) if (n - l) % 2 == 0 and abs(l - A) <= 4 * math.sqrt(B))
    assert abs(total - 1) < 0.02
    with pytest.raises(ValueError):
        lclt_density(3, 10)


def test_tail_check():
    assert tail_check(3, 2, 3) == F(1, 2)
    assert tail_check(5, 2, 6) == 0
    d8 = exact_dist(8, 2)
    assert all(d8.tail(t) <= tail_bound(8, t) for t in range(0, 10))
    assert all(exact_dist(n, 2).tail(t) <= tail_bound(n, t) for n in range(2, 12) for t in range(n + 2))


def test_moment_transfer_gap_shrinks():
    gaps = [abs(exact_dist(n, 2).mean() - uniform_cycle_dist(n, "alternating").mean()) for n in range(5, 10)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_witten_zeta_decay():
    values = [witten_zeta(n, 1) - 2 for n in range(10, 21)]
    assert all(b < a for a, b in zip(values, values[1:]))
