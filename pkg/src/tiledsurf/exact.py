"""Exact laws of vertex counts and the closed-form theory values.

Everything here is exact rational arithmetic except ``theory`` and
``lclt_density``, which return 64-bit floats.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional

import numpy as np

from . import kernels
from .partitions import (
    Partition,
    class_size,
    content_polynomial,
    dim_irrep,
    hook_product,
    mn_character,
    partitions_of,
)

EULER_GAMMA = 0.57721566490153286061
INV_E = math.exp(-1.0)
DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ExactDistribution:
    """Finite law with exact rational probabilities, support sorted ascending."""

    support: tuple[int, ...]
    prob: tuple[Fraction, ...]
    joint_ab: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self):
        if sum(self.prob, Fraction(0)) != 1:
            raise ValueError("probabilities must sum to 1")

    @classmethod
    def from_counts(cls, counts: dict, total=None, joint_ab=None) -> "ExactDistribution":
        total = sum(counts.values()) if total is None else total
        keys = sorted(k for k, v in counts.items() if v)
        return cls(tuple(keys), tuple(Fraction(counts[k], total) for k in keys), joint_ab)

    def pmf(self, value: int) -> Fraction:
        return dict(zip(self.support, self.prob)).get(value, Fraction(0))

    def as_dict(self) -> dict[int, Fraction]:
        return dict(zip(self.support, self.prob))

    def moment(self, r: int) -> Fraction:
        return sum((p * v**r for v, p in zip(self.support, self.prob)), Fraction(0))

    def mean(self) -> Fraction:
        return self.moment(1)

    def variance(self) -> Fraction:
        m = self.mean()
        return self.moment(2) - m * m

    def tail(self, t: int) -> Fraction:
        """Pr[X >= t]."""
        return sum((p for v, p in zip(self.support, self.prob) if v >= t), Fraction(0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "numerator", "denominator", "float_prob"])
        for v, p in zip(self.support, self.prob):
            w.writerow([v, p.numerator, p.denominator, repr(float(p))])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "support": list(self.support),
            "prob": [f"{p.numerator}/{p.denominator}" for p in self.prob],
        }


def _poly_add(acc: list[int], poly: list[int], scale: int):
    if len(acc) < len(poly):
        acc.extend([0] * (len(poly) - len(acc)))
    for d, a in enumerate(poly):
        acc[d] += scale * a


def vertex_genfun(n: int, k: int) -> list[int]:
    """Coefficients (index = power of q) of sum over k-tuples of q^(cycles of the chain word).

    Even k: n! * sum_lam H_lam^(k-2) prod(q + content).
    Odd k: (n!)^2 * sum_lam H_lam^(k-3) prod(q + content).
    """
    if n < 1 or k < 2:
        raise ValueError("need n >= 1 and k >= 2")
    acc: list[int] = []
    if k % 2 == 0:
        power, front = k - 2, factorial(n)
    else:
        power, front = k - 3, factorial(n) ** 2
    for lam in partitions_of(n):
        _poly_add(acc, content_polynomial(lam), hook_product(lam.parts) ** power)
    out = [front * a for a in acc]
    assert sum(out) == factorial(n) ** k
    return out


def exact_dist(n: int, k: int) -> ExactDistribution:
    """Law of the cycle count of the chain word on uniform k-tuples in S_n."""
    coeffs = vertex_genfun(n, k)
    total = factorial(n) ** k
    counts = {d: a for d, a in enumerate(coeffs) if a}
    for d in counts:
        if (n - d) % 2:
            raise AssertionError(f"odd support value {d} for n={n}")
    return ExactDistribution.from_counts(counts, total)


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("TSL_BUDGET")
    return int(float(raw)) if raw else default


@lru_cache(maxsize=16)
def _all_perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64)


def _iter_tuples(n: int, k: int, chunk: int = 200_000):
    """Yield stacks of shape (k, batch, n) enumerating every k-tuple of S_n."""
    P = _all_perms(n)
    m = len(P)
    total = m**k
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = np.unravel_index(idx, (m,) * k)
        yield np.stack([P[d] for d in digits])


def brute_force_dist(n: int, k: int, budget: Optional[int] = None) -> ExactDistribution:
    """Exhaustive law of the chain-word cycle count.

    For odd ``k`` the result also carries ``joint_ab``: counts of
    ``(cycles of a, cycles of b)`` normalised to exact probabilities.
    """
    budget = budget_from_env() if budget is None else budget
    total = factorial(n) ** k
    if total > budget:
        raise BudgetExceeded(f"(n!)^k = {total} exceeds budget {budget}")
    counts: Counter = Counter()
    joint: Counter = Counter()
    for stack in _iter_tuples(n, k):
        a = kernels.word_rows(stack, "a")
        inv = [kernels.invert_rows(x) for x in stack]
        b = inv[0]
        for x in inv[1:]:
            b = kernels.compose_rows(b, x)
        c = kernels.compose_rows(a, b)
        cc = kernels.cycle_stats(c)[:, kernels.NCYCLES]
        counts.update(Counter(cc.tolist()))
        if k % 2:
            ca = kernels.cycle_stats(a)[:, kernels.NCYCLES]
            cb = kernels.cycle_stats(b)[:, kernels.NCYCLES]
            joint.update(Counter(zip(ca.tolist(), cb.tolist())))
    joint_ab = {key: Fraction(v, total) for key, v in sorted(joint.items())} if k % 2 else None
    return ExactDistribution.from_counts(dict(counts), total, joint_ab)


def brute_force_fixed_point_mean(n: int, budget: Optional[int] = None) -> Fraction:
    """Exact E[# fixed points of [sigma, tau]] over all pairs in S_n."""
    budget = budget_from_env() if budget is None else budget
    total = factorial(n) ** 2
    if total > budget:
        raise BudgetExceeded(f"(n!)^2 = {total} exceeds budget {budget}")
    fixed = 0
    for stack in _iter_tuples(n, 2):
        c = kernels.word_rows(stack, "c")
        fixed += int(kernels.cycle_stats(c)[:, kernels.NFIXED].sum())
    return Fraction(fixed, total)


def _word_exponent(k: int) -> int:
    return k - 1 if k % 2 == 0 else k - 2


def word_probability_formula(n: int, k: int, mu) -> Fraction:
    """(1/n!) sum over irreducibles of chi(mu) / chi(1)^e, e = k-1 (even k) or k-2 (odd k)."""
    e = _word_exponent(k)
    s = sum(
        (Fraction(mn_character(lam, mu), dim_irrep(lam) ** e) for lam in partitions_of(n)),
        Fraction(0),
    )
    return s / factorial(n)


def word_probability(n: int, k: int, mu) -> Fraction:
    """Probability that the chain word equals a fixed permutation of cycle type ``mu``."""
    mu = mu if isinstance(mu, Partition) else Partition.from_parts(mu)
    if mu.n != n:
        raise ValueError("mu must be a partition of n")
    if not mu.is_even_class():
        return Fraction(0)
    return word_probability_formula(n, k, mu)


def class_law(n: int, k: int) -> ExactDistribution:
    """Cycle-count law assembled from per-class probabilities."""
    counts: dict[int, Fraction] = {}
    for mu in partitions_of(n):
        p = class_size(mu) * word_probability(n, k, mu)
        if p:
            counts[len(mu)] = counts.get(len(mu), Fraction(0)) + p
    keys = sorted(counts)
    return ExactDistribution(tuple(keys), tuple(counts[x] for x in keys))


def tv_distance(n: int, k: int) -> Fraction:
    """Total variation distance between the chain-word law and uniform on A_n."""
    if n == 1:
        return Fraction(0)
    u = Fraction(2, factorial(n))
    total = Fraction(0)
    for mu in partitions_of(n):
        size = class_size(mu)
        p = word_probability(n, k, mu)
        target = u if mu.is_even_class() else Fraction(0)
        total += size * abs(p - target)
    return total / 2


@lru_cache(maxsize=None)
def _stirling_row(n: int) -> tuple[int, ...]:
    # unsigned Stirling numbers of the first kind c(n, m), m = 0..n
    row = [1]
    for i in range(1, n + 1):
        nxt = [0] * (i + 1)
        for m, a in enumerate(row):
            nxt[m + 1] += a
            nxt[m] += (i - 1) * a
        row = nxt
    return tuple(row)


def _cycle_type_prob(mu: Partition) -> Fraction:
    return Fraction(1, math.prod(j**x * factorial(x) for j, x in mu.multiplicities().items()))


PARTITION_SUM_LIMIT = 40


def uniform_cycle_dist(n: int, group: str = "symmetric") -> ExactDistribution:
    """Law of the number of cycles of a uniform element of S_n or A_n.

    Up to ``PARTITION_SUM_LIMIT`` the law is the cycle-type formula summed over
    partitions; beyond it the Stirling-number recurrence gives the same numbers.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if group not in ("symmetric", "alternating"):
        raise ValueError("group must be 'symmetric' or 'alternating'")
    alt = group == "alternating"
    counts: dict[int, Fraction] = {}
    if n <= PARTITION_SUM_LIMIT:
        for mu in partitions_of(n):
            if alt and not mu.is_even_class():
                continue
            p = _cycle_type_prob(mu) * (2 if alt and n > 1 else 1)
            counts[len(mu)] = counts.get(len(mu), Fraction(0)) + p
    else:
        nf = factorial(n)
        for m, c in enumerate(_stirling_row(n)):
            if not c or (alt and (n - m) % 2):
                continue
            counts[m] = Fraction(c * (2 if alt else 1), nf)
    keys = sorted(counts)
    return ExactDistribution(tuple(keys), tuple(counts[x] for x in keys))


def uniform_cycle_dist_stirling(n: int, group: str = "symmetric") -> ExactDistribution:
    nf = factorial(n)
    alt = group == "alternating"
    counts = {
        m: Fraction(c * (2 if alt and n > 1 else 1), nf)
        for m, c in enumerate(_stirling_row(n))
        if c and not (alt and (n - m) % 2)
    }
    keys = sorted(counts)
    return ExactDistribution(tuple(keys), tuple(counts[x] for x in keys))


@dataclass(frozen=True)
class SpecialClassProbs:
    derangement: Fraction
    all_transpositions: Fraction
    single_cycle: Fraction


def _even_derangements(n: int) -> int:
    d = [1, 0]
    for i in range(2, n + 1):
        d.append((i - 1) * (d[-1] + d[-2]))
    return (d[n] + (-1) ** (n - 1) * (n - 1)) // 2


def special_class_probs(n: int) -> SpecialClassProbs:
    """Uniform-A_n probabilities of three class families.

    ``all_transpositions``: at least one 2-cycle and no longer cycles.
    ``single_cycle``: exactly one cycle of length >= 2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return SpecialClassProbs(Fraction(0), Fraction(0), Fraction(0))
    # doubled cycle-type formula: 2 / (l * (n - l)!) for one l-cycle, l odd
    cyc = sum((Fraction(2, l * factorial(n - l)) for l in range(3, n + 1, 2)), Fraction(0))
    # 2 / ((n - 2m)! * m! * 2^m) for m transpositions, m even
    inv = sum(
        (Fraction(2, factorial(n - 2 * m) * factorial(m) * 2**m) for m in range(2, n // 2 + 1, 2)),
        Fraction(0),
    )
    der = Fraction(_even_derangements(n) * 2, factorial(n))
    return SpecialClassProbs(der, inv, cyc)


@lru_cache(maxsize=64)
def harmonic(n: int) -> Fraction:
    s = Fraction(0)
    for i in range(1, n + 1):
        s += Fraction(1, i)
    return s


@lru_cache(maxsize=64)
def harmonic2(n: int) -> Fraction:
    s = Fraction(0)
    for i in range(1, n + 1):
        s += Fraction(1, i * i)
    return s


def harmonic_float(n: int) -> float:
    return math.fsum(1.0 / i for i in range(1, n + 1))


def harmonic2_float(n: int) -> float:
    return math.fsum(1.0 / (i * i) for i in range(1, n + 1))


@dataclass(frozen=True)
class TheoryPrediction:
    n: int
    k: int
    A: Fraction
    B: Fraction
    expected_genus: float
    var_genus: float
    expected_cone_points: float
    expected_fixed_points: Optional[Fraction]
    gamma: float = EULER_GAMMA
    inv_e: float = INV_E

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "A": float(self.A),
            "B": float(self.B),
            "expected_genus": self.expected_genus,
            "var_genus": self.var_genus,
            "expected_cone_points": self.expected_cone_points,
            "expected_fixed_points": None
            if self.expected_fixed_points is None
            else float(self.expected_fixed_points),
            "gamma": self.gamma,
            "inv_e": self.inv_e,
        }


def expected_genus(n: int, k: int) -> float:
    L = math.log(n)
    if k % 2 == 0:
        return (k - 1) * n / 2 - L / 2 - EULER_GAMMA / 2 + 1
    return (k - 1) * n / 2 - L - EULER_GAMMA + 1


def var_genus(n: int, k: int) -> float:
    L = math.log(n)
    if k % 2 == 0:
        return L / 4 + EULER_GAMMA / 4 - math.pi**2 / 24
    return L / 2 + EULER_GAMMA / 2 - math.pi**2 / 12


def expected_cone_points(n: int, k: int) -> float:
    L = math.log(n)
    if k == 2:
        return L + EULER_GAMMA - 1
    if k % 2 == 0:
        return L + EULER_GAMMA
    if k == 3:
        return 2 * L + 2 * EULER_GAMMA - 2
    return 2 * L + 2 * EULER_GAMMA


def nica_fixed_points(n: int) -> Fraction:
    """E[fixed points of a random commutator] = 1 + 1/(n-1), valid for n > 4."""
    return 1 + Fraction(1, n - 1)


def theory(n: int, k: int) -> TheoryPrediction:
    if n < 1 or k < 2:
        raise ValueError("need n >= 1 and k >= 2")
    A = harmonic(n)
    return TheoryPrediction(
        n=n,
        k=k,
        A=A,
        B=A - harmonic2(n),
        expected_genus=expected_genus(n, k),
        var_genus=var_genus(n, k),
        expected_cone_points=expected_cone_points(n, k),
        expected_fixed_points=nica_fixed_points(n) if k == 2 and n > 4 else None,
    )


def lclt_density(l: int, n: int) -> float:
    """Leading term 2 exp(-(l - A)^2 / 2B) / sqrt(2 pi B) for Pr[C = l], n - l even."""
    if (n - l) % 2:
        raise ValueError(f"n - l must be even (n={n}, l={l})")
    A = harmonic_float(n)
    B = A - harmonic2_float(n)
    return 2.0 * math.exp(-((l - A) ** 2) / (2.0 * B)) / math.sqrt(2.0 * math.pi * B)


TAIL_CONSTANT = 4


def tail_check(n: int, k: int, t: int) -> Fraction:
    """Exact Pr[C >= t] for the chain word."""
    return exact_dist(n, k).tail(t)


def tail_bound(n: int, t: int, c: int = TAIL_CONSTANT) -> Fraction:
    return Fraction(c * n, 2**t)
