from fractions import Fraction
from functools import lru_cache
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tiledsurf.partitions import (
    Partition,
    class_size,
    content_polynomial,
    diagram,
    dim_irrep,
    hook_product,
    mn_character,
    partitions_of,
    schur_at_ones,
    witten_zeta,
    z_order,
)


def pentagonal_counts(N):
    p = [1] + [0] * N
    for n in range(1, N + 1):
        k, total = 1, 0
        while True:
            g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


@lru_cache(maxsize=None)
def count_syt(shape):
    # standard Young tableaux by removing the largest entry from a corner
    if sum(shape) == 0:
        return 1
    total = 0
    for i, row in enumerate(shape):
        if row and (i + 1 == len(shape) or shape[i + 1] < row):
            total += count_syt(tuple(x - (j == i) for j, x in enumerate(shape)))
    return total


partitions = st.integers(1, 9).flatmap(lambda n: st.sampled_from(partitions_of(n)))


def test_partition_normalises_trailing_zeros():
    assert Partition((3, 1, 0)) == Partition((3, 1))
    assert Partition.parse("5,3,3,2,1").parts == (5, 3, 3, 2, 1)
    assert str(Partition((5, 3, 3, 2, 1))) == "5,3,3,2,1"
    assert Partition.parse("") == Partition(())
    assert Partition.from_parts([1, 3, 0, 2]) == Partition((3, 2, 1))
    assert Partition((3, 3, 1)).multiplicities() == {1: 1, 3: 2}


@pytest.mark.parametrize("parts", [(1, 2), (3, -1), (2, 0, 1)])
def test_partition_validation(parts):
    with pytest.raises(ValueError):
        Partition(parts)


def test_partitions_of_small():
    assert [p.parts for p in partitions_of(3)] == [(3,), (2, 1), (1, 1, 1)]
    assert partitions_of(0) == [Partition(())]
    assert len(partitions_of(10)) == 42
    with pytest.raises(ValueError):
        partitions_of(-1)


def test_partition_counts_match_pentagonal_recurrence():
    p = pentagonal_counts(60)
    assert all(len(partitions_of(n)) == p[n] for n in range(61))


def test_partitions_are_reverse_lex_and_unique():
    ps = [p.parts for p in partitions_of(12)]
    assert ps == sorted(ps, reverse=True)
    assert len(set(ps)) == len(ps)


def test_diagram_worked_example_tableau():
    d = diagram((5, 3, 3, 2, 1))
    assert d.hook[0] == (9, 7, 5, 2, 1)
    assert d.content[0] == (0, 1, 2, 3, 4)
    assert d.hook == ((9, 7, 5, 2, 1), (6, 4, 2), (5, 3, 1), (3, 1), (1,))


def test_diagram_simple_shapes():
    assert diagram((6,)).hook == ((6, 5, 4, 3, 2, 1),)
    assert diagram((6,)).hook_product == factorial(6)
    assert diagram((2, 1)).hook == ((3, 1), (1,))
    assert hook_product((2, 1)) == 3


def test_dim_irrep_examples():
    assert dim_irrep((7,)) == 1 and dim_irrep((1,) * 7) == 1
    assert dim_irrep((2, 1)) == 2
    assert dim_irrep(Partition((5, 3, 3, 2, 1))) == factorial(14) // (9 * 7 * 5 * 2 * 6 * 4 * 2 * 5 * 3 * 3)


@given(partitions)
def test_dim_irrep_counts_standard_tableaux(lam):
    assert dim_irrep(lam) == count_syt(lam.parts)


def test_sum_of_squared_degrees():
    for n in range(1, 11):
        assert sum(dim_irrep(l) ** 2 for l in partitions_of(n)) == factorial(n)


def test_character_examples():
    assert mn_character((2, 1), (3,)) == -1
    assert mn_character((2, 1), (2, 1)) == 0
    assert mn_character((2, 1), (1, 1, 1)) == 2
    for mu in partitions_of(6):
        assert mn_character((6,), mu) == 1
        assert mn_character((1,) * 6, mu) == (-1) ** (6 - len(mu))
    with pytest.raises(ValueError):
        mn_character((2, 1), (2,))


def test_character_table_s4_frozen():
    order = [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    table = [[mn_character(l, m) for m in order] for l in order]
    assert table == [
        [1, 1, 1, 1, 1],
        [-1, 0, -1, 1, 3],
        [0, -1, 2, 0, 2],
        [1, 0, -1, -1, 3],
        [-1, 1, 1, -1, 1],
    ]


def test_character_degree_matches_hook_formula():
    for n in range(1, 13):
        for lam in partitions_of(n):
            assert mn_character(lam, (1,) * n) == factorial(n) // hook_product(lam.parts) == dim_irrep(lam)


def test_character_orthogonality():
    for n in range(1, 9):
        P = partitions_of(n)
        for a in P:
            for b in P:
                s = sum(class_size(m) * mn_character(a, m) * mn_character(b, m) for m in P)
                assert s == (factorial(n) if a == b else 0)


def test_class_sizes():
    assert class_size((1,) * 5) == 1
    assert class_size((3,)) == 2 and z_order((3,)) == 3
    assert z_order((2, 2, 1)) == 8
    for n in range(1, 13):
        assert sum(class_size(m) for m in partitions_of(n)) == factorial(n)


def test_schur_at_ones():
    assert schur_at_ones((2, 1), 2) == 2
    assert schur_at_ones((1,) * 4, 3) == 0
    assert schur_at_ones((5,), 1) == 1
    assert schur_at_ones((2, 1), 3) == 8


@given(partitions, st.integers(0, 6))
def test_schur_numerator_is_integral(lam, m):
    value = schur_at_ones(lam, m) * hook_product(lam.parts)
    assert value.denominator == 1
    if len(lam) > m:
        assert value == 0


def test_witten_zeta():
    assert witten_zeta(3, 1) == Fraction(5, 2)
    assert witten_zeta(2, 1) == 2
    values = [witten_zeta(n, 1) for n in range(10, 21)]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert 2 < values[-1] < Fraction(22, 10)
    assert witten_zeta(4, 0.5) == pytest.approx(2 + 2 / 3**0.5 + 1 / 2**0.5)
    with pytest.raises(ValueError):
        witten_zeta(3, 0)


def test_content_polynomial():
    assert content_polynomial((2,)) == [0, 1, 1]  # q (q + 1)
    assert content_polynomial((1, 1)) == [0, -1, 1]
    assert content_polynomial((2, 1)) == [0, -1, 0, 1]


@given(partitions)
def test_conjugate_is_involution(lam):
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().n == lam.n
    assert dim_irrep(lam.conjugate()) == dim_irrep(lam)
