"""Permutations of {0, ..., n-1}.

Composition is right to left: ``compose(p, q)(i) == p(q(i))``. With this
convention the commutator of two gluings is
``c(x) = sigma(tau(sigma^-1(tau^-1(x))))``. Text I/O uses 1-based labels in
cycle notation, e.g. ``"(1,2,3,4)(5,6)"``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .partitions import CycleType, Partition


class PermutationError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(x) for x in self.image)
        n = len(image)
        if n == 0:
            raise PermutationError("a permutation needs degree n >= 1")
        if sorted(image) != list(range(n)):
            raise PermutationError(f"not a bijection on 0..{n - 1}: {image}")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_array(cls, arr) -> "Permutation":
        return cls(tuple(int(x) for x in arr))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __str__(self) -> str:
        return format_cycles(self)

    def inverse(self) -> "Permutation":
        out = [0] * self.n
        for i, x in enumerate(self.image):
            out[x] = i
        return Permutation(tuple(out))

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycles including fixed points, each starting at its smallest element."""
        seen = [False] * self.n
        out = []
        for i in range(self.n):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.image[j]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> CycleType:
        return Partition.from_parts(len(c) for c in self.cycles())

    def is_even(self) -> bool:
        return (self.n - len(self.cycles())) % 2 == 0

    def to_array(self) -> np.ndarray:
        return np.asarray(self.image, dtype=np.int64)


def identity(n: int) -> Permutation:
    return Permutation.identity(n)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``r(i) = p(q(i))``."""
    if p.n != q.n:
        raise PermutationError(f"degree mismatch: {p.n} != {q.n}")
    return Permutation(tuple(p.image[x] for x in q.image))


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


class WordKind(enum.Enum):
    """Word maps on k letters."""

    chain_c = "c"  # x1...xk x1^-1...xk^-1
    forward_a = "a"  # x1...xk
    backward_b = "b"  # x1^-1...xk^-1


def evaluate_word(kind: WordKind | str, perms: Sequence[Permutation]) -> Permutation:
    kind = WordKind(kind) if not isinstance(kind, WordKind) else kind
    if not perms:
        raise PermutationError("empty permutation tuple")
    n = perms[0].n
    if any(p.n != n for p in perms):
        raise PermutationError("all permutations must share a degree")
    if kind is WordKind.chain_c and len(perms) < 2:
        raise PermutationError("the chain word needs k >= 2")
    out = identity(n)
    if kind in (WordKind.chain_c, WordKind.forward_a):
        for p in perms:
            out = compose(out, p)
    if kind in (WordKind.chain_c, WordKind.backward_b):
        for p in perms:
            out = compose(out, p.inverse())
    return out


def commutator(sigma: Permutation, tau: Permutation) -> Permutation:
    return evaluate_word(WordKind.chain_c, (sigma, tau))


def cycle_type(p: Permutation) -> CycleType:
    return p.cycle_type()


def fixed_points(p: Permutation) -> set[int]:
    return {i for i, x in enumerate(p.image) if x == i}


def is_derangement(p: Permutation) -> bool:
    return not fixed_points(p)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x != y:
            if y < x:
                x, y = y, x
            self.parent[y] = x


def orbits(generators: Sequence[Permutation]) -> list[frozenset[int]]:
    """Orbits of the group generated by ``generators``, sorted by smallest point."""
    if not generators:
        raise PermutationError("orbits needs at least one generator")
    n = generators[0].n
    if any(g.n != n for g in generators):
        raise PermutationError("all generators must share a degree")
    uf = _UnionFind(n)
    for g in generators:
        for i, x in enumerate(g.image):
            uf.union(i, x)
    groups: dict[int, set[int]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), set()).add(i)
    return [frozenset(groups[r]) for r in sorted(groups)]


def is_transitive(generators: Sequence[Permutation]) -> bool:
    return len(orbits(generators)) == 1


def make_rng(seed: int, *substream: int) -> np.random.Generator:
    """Deterministic PCG64 generator for ``seed`` and an optional substream path.

    Substreams come from ``SeedSequence(seed, spawn_key=substream)`` so
    ``make_rng(s, i)`` for different ``i`` are independent and reproducible.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=tuple(substream))))


def sample_uniform(n: int, rng: np.random.Generator) -> Permutation:
    """Uniform permutation of degree ``n`` via numpy's Fisher-Yates shuffle."""
    if n < 1:
        raise PermutationError("n must be >= 1")
    return Permutation.from_array(rng.permutation(n))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Permutation:
    """Parse 1-based cycle notation; omitted labels are fixed points.

    >>> parse_cycles("(1,2,3)", 4).image
    (1, 2, 0, 3)
    """
    stripped = re.sub(r"\s+", "", text)
    if _CYCLE_RE.sub("", stripped):
        raise PermutationError(f"malformed cycle string {text!r}")
    image = list(range(n))
    used: set[int] = set()
    for body in _CYCLE_RE.findall(stripped):
        if not body:
            raise PermutationError(f"empty cycle in {text!r}")
        try:
            labels = [int(tok) for tok in body.split(",")]
        except ValueError:
            raise PermutationError(f"malformed cycle string {text!r}") from None
        for x in labels:
            if not 1 <= x <= n:
                raise PermutationError(f"label {x} out of range 1..{n} in {text!r}")
            if x in used:
                raise PermutationError(f"label {x} repeated in {text!r}")
            used.add(x)
        for a, b in zip(labels, labels[1:] + labels[:1]):
            image[a - 1] = b - 1
    return Permutation(tuple(image))


def format_cycles(p: Permutation) -> str:
    """Canonical 1-based cycle notation with fixed points written out."""
    return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in p.cycles())


def max_label(texts: Iterable[str]) -> int:
    """Largest label mentioned in a collection of cycle strings (0 if none)."""
    best = 0
    for t in texts:
        for tok in re.findall(r"\d+", t):
            best = max(best, int(tok))
    return best
