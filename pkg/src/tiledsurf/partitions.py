"""Integer partitions, Young diagrams and symmetric group characters.

All quantities are exact: Python integers and ``fractions.Fraction``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, Sequence


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive integers.

    Trailing zeros are dropped on construction so ``Partition((3, 1, 0))``
    equals ``Partition((3, 1))``.
    """

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(x <= 0 for x in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def _trusted(cls, parts: tuple[int, ...]) -> "Partition":
        # skips validation; only for tuples produced by this module
        obj = object.__new__(cls)
        obj.__dict__["parts"] = parts
        return obj

    @classmethod
    def from_parts(cls, parts: Sequence[int]) -> "Partition":
        """Build from parts in any order (zeros allowed)."""
        return cls(tuple(sorted((int(x) for x in parts if x), reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"5,3,3,2,1"``; the empty string is the empty partition."""
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(int(x) for x in text.split(",")))

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))

    def multiplicities(self) -> dict[int, int]:
        """``{j: xi_j}`` with ``xi_j`` the number of parts equal to ``j``."""
        return dict(sorted(Counter(self.parts).items()))

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for x in self.parts if x > j) for j in range(self.parts[0])))

    def is_even_class(self) -> bool:
        """True if permutations with this cycle type lie in the alternating group."""
        return (self.n - len(self.parts)) % 2 == 0

    def cells(self) -> Iterator[tuple[int, int]]:
        """Cells ``(i, j)``, 0-based row and column."""
        for i, row in enumerate(self.parts):
            for j in range(row):
                yield i, j


CycleType = Partition


def _as_tuple(lam) -> tuple[int, ...]:
    if isinstance(lam, Partition):
        return lam.parts
    return Partition(tuple(lam)).parts


def partitions_of(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order.

    >>> [str(p) for p in partitions_of(3)]
    ['3', '2,1', '1,1,1']
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    return [Partition._trusted(p) for p in _zs1(n)]


def _zs1(n: int) -> Iterator[tuple[int, ...]]:
    # Zoghbi-Stojmenovic ZS1: descending parts, reverse-lexicographic order
    if n == 0:
        yield ()
        return
    x = [1] * (n + 1)
    x[1] = n
    m = h = 1
    yield (n,)
    while x[1] != 1:
        if x[h] == 2:
            m += 1
            x[h] = 1
            h -= 1
        else:
            r = x[h] - 1
            t = m - h + 1
            x[h] = r
            while t >= r:
                h += 1
                x[h] = r
                t -= r
            if t == 0:
                m = h
            else:
                m = h + 1
                if t > 1:
                    h += 1
                    x[h] = t
        yield tuple(x[1 : m + 1])


@dataclass(frozen=True)
class YoungDiagram:
    shape: Partition
    hook: tuple[tuple[int, ...], ...]
    content: tuple[tuple[int, ...], ...]
    hook_product: int


def diagram(lam) -> YoungDiagram:
    """Hook lengths, contents and hook product of ``lam``.

    >>> diagram((5, 3, 3, 2, 1)).hook[0]
    (9, 7, 5, 2, 1)
    """
    shape = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    conj = shape.conjugate().parts
    hooks = tuple(
        tuple((row - j) + (conj[j] - i) - 1 for j in range(row)) for i, row in enumerate(shape.parts)
    )
    contents = tuple(tuple(j - i for j in range(row)) for i, row in enumerate(shape.parts))
    return YoungDiagram(shape, hooks, contents, prod(h for row in hooks for h in row))


@lru_cache(maxsize=None)
def hook_product(lam: tuple[int, ...]) -> int:
    return diagram(lam).hook_product


def dim_irrep(lam) -> int:
    """Degree of the irreducible character indexed by ``lam`` (hook-length formula)."""
    t = _as_tuple(lam)
    q, r = divmod(factorial(sum(t)), hook_product(t))
    if r:
        raise ArithmeticError(f"hook product of {t} does not divide n!")
    return q


def _beta(lam: tuple[int, ...]) -> list[int]:
    L = len(lam)
    return [lam[i] + (L - 1 - i) for i in range(L)]


def _from_beta(beta: list[int]) -> tuple[int, ...]:
    beta = sorted(beta, reverse=True)
    L = len(beta)
    parts = [beta[i] - (L - 1 - i) for i in range(L)]
    while parts and parts[-1] == 0:
        parts.pop()
    return tuple(parts)


@lru_cache(maxsize=None)
def _mn(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    if not mu:
        return 1 if not lam else 0
    r, rest = mu[0], mu[1:]
    beta = _beta(lam)
    occupied = set(beta)
    total = 0
    # removing a border strip of length r = sliding one bead r places down
    for b in beta:
        nb = b - r
        if nb < 0 or nb in occupied:
            continue
        height = sum(1 for x in beta if nb < x < b)
        smaller = _from_beta([x for x in beta if x != b] + [nb])
        term = _mn(smaller, rest)
        total += -term if height % 2 else term
    return total


def mn_character(lam, mu) -> int:
    """Irreducible character value chi^lam at the class of cycle type ``mu``.

    Border-strip (Murnaghan-Nakayama) recursion, memoized on ``(lam, mu)``.
    """
    lt, mt = _as_tuple(lam), _as_tuple(mu)
    if sum(lt) != sum(mt):
        raise ValueError(f"size mismatch: {lt} and {mt}")
    return _mn(lt, mt)


def z_order(mu) -> int:
    """Centralizer order prod_j j^xi_j * xi_j!."""
    t = _as_tuple(mu)
    return prod(j**x * factorial(x) for j, x in Counter(t).items())


def class_size(mu) -> int:
    t = _as_tuple(mu)
    q, r = divmod(factorial(sum(t)), z_order(t))
    assert r == 0
    return q


def schur_at_ones(lam, m: int) -> Fraction:
    """Principal specialization s_lam(1^m) = prod (m + content) / hook."""
    d = diagram(lam if isinstance(lam, Partition) else Partition(tuple(lam)))
    num = prod(m + c for row in d.content for c in row)
    return Fraction(num, d.hook_product)


def witten_zeta(n: int, s):
    """Sum of dim(chi)^-s over the irreducible characters of S_n.

    Exact ``Fraction`` for integer ``s``, float otherwise.
    """
    if n < 1 or s <= 0:
        raise ValueError("need n >= 1 and s > 0")
    if isinstance(s, int):
        return sum((Fraction(1, dim_irrep(lam) ** s) for lam in partitions_of(n)), Fraction(0))
    return sum(float(dim_irrep(lam)) ** (-s) for lam in partitions_of(n))


def content_polynomial(lam) -> list[int]:
    """Integer coefficients (lowest degree first) of prod over cells of (q + content)."""
    poly = [1]
    for i, j in (lam if isinstance(lam, Partition) else Partition(tuple(lam))).cells():
        c = j - i
        nxt = [0] * (len(poly) + 1)
        for d, a in enumerate(poly):
            nxt[d + 1] += a
            nxt[d] += c * a
        poly = nxt
    return poly
