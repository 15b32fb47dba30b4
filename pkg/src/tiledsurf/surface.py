"""Polygon-tiled surfaces built from k gluing permutations.

A surface of ``n`` regular 2k-gons is encoded by ``k`` permutations; ``k = 2``
gives square-tiled surfaces with ``sigma`` (right neighbour) and ``tau``
(top neighbour). Vertices are read off word maps: for even ``k`` the cycles
of ``c = x1...xk x1^-1...xk^-1``, for odd ``k`` the cycles of
``a = x1...xk`` together with those of ``b = x1^-1...xk^-1``.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .perm import (
    Permutation,
    PermutationError,
    WordKind,
    evaluate_word,
    format_cycles,
    orbits,
    parse_cycles,
)


class SurfaceError(ValueError):
    pass


@dataclass(frozen=True)
class TiledSurface:
    k: int
    gluings: tuple[Permutation, ...]

    def __post_init__(self):
        gluings = tuple(self.gluings)
        if self.k < 2:
            raise SurfaceError("k must be >= 2")
        if len(gluings) != self.k:
            raise SurfaceError(f"expected {self.k} gluings, got {len(gluings)}")
        if len({g.n for g in gluings}) != 1:
            raise SurfaceError("all gluings must share the same degree")
        object.__setattr__(self, "gluings", gluings)

    @property
    def n(self) -> int:
        return self.gluings[0].n

    @property
    def sigma(self) -> Permutation:
        return self.gluings[0]

    @property
    def tau(self) -> Permutation:
        return self.gluings[1]

    def relabel(self, g: Permutation) -> "TiledSurface":
        """Simultaneous conjugation ``x -> g x g^-1`` of all gluings."""
        gi = g.inverse()
        return TiledSurface(self.k, tuple(g * x * gi for x in self.gluings))

    def to_dict(self) -> dict:
        return {"k": self.k, "n": self.n, "gluings": [format_cycles(g) for g in self.gluings]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def build(k: int, perms: Sequence[Permutation]) -> TiledSurface:
    try:
        return TiledSurface(k, tuple(perms))
    except PermutationError as exc:  # pragma: no cover - perms are already validated
        raise SurfaceError(str(exc)) from exc


def from_cycles(k: int, texts: Sequence[str], n: int) -> TiledSurface:
    return build(k, [parse_cycles(t, n) for t in texts])


def from_dict(data: dict) -> TiledSurface:
    return from_cycles(int(data["k"]), list(data["gluings"]), int(data["n"]))


def from_json(text: str) -> TiledSurface:
    return from_dict(json.loads(text))


@dataclass(frozen=True)
class VertexCycle:
    word: str  # "c", "a" or "b"
    squares: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.squares)


def vertex_cycles(S: TiledSurface) -> list[VertexCycle]:
    if S.k % 2 == 0:
        c = evaluate_word(WordKind.chain_c, S.gluings)
        return [VertexCycle("c", cyc) for cyc in c.cycles()]
    a = evaluate_word(WordKind.forward_a, S.gluings)
    b = evaluate_word(WordKind.backward_b, S.gluings)
    return [VertexCycle("a", cyc) for cyc in a.cycles()] + [VertexCycle("b", cyc) for cyc in b.cycles()]


def angle_over_pi(k: int, length: int) -> int:
    """Cone angle divided by pi of a vertex whose word cycle has ``length``."""
    return 2 * (k - 1) * length if k % 2 == 0 else (k - 1) * length


def zero_order(k: int, length: int) -> int:
    # (k - 1) is even for odd k, so the order is always an integer
    return angle_over_pi(k, length) // 2 - 1


def stratum_label(alphas: Sequence[int]) -> str:
    """``H(3,1)``; a cone-free surface gets ``H(0)``."""
    return "H(" + (",".join(map(str, alphas)) if alphas else "0") + ")"


@dataclass(frozen=True)
class Component:
    n: int
    genus: int
    cone_points: int
    stratum: tuple[int, ...]
    squares: tuple[int, ...]


@dataclass(frozen=True)
class TopologySummary:
    k: int
    n: int
    V: int
    E: int
    F: int
    euler: int
    g_stat: int
    vertex_angles: tuple[tuple[int, int, int], ...]  # (cycle length, angle / pi, count)
    cone_points: int
    stratum: tuple[int, ...]
    components: tuple[Component, ...] = field(default=())
    connected: bool = True

    @property
    def stratum_label(self) -> str:
        return stratum_label(self.stratum)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "V": self.V,
            "E": self.E,
            "F": self.F,
            "euler": self.euler,
            "g_stat": self.g_stat,
            "vertex_angles": [
                {"length": l, "angle_over_pi": a, "count": c} for l, a, c in self.vertex_angles
            ],
            "cone_points": self.cone_points,
            "stratum": list(self.stratum),
            "stratum_label": self.stratum_label,
            "components": [
                {
                    "n": c.n,
                    "genus": c.genus,
                    "cone_points": c.cone_points,
                    "stratum": list(c.stratum),
                    "squares": [x + 1 for x in c.squares],
                }
                for c in self.components
            ],
            "connected": self.connected,
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _genus(V: int, k: int, F: int) -> int:
    euler = V - k * F + F
    if euler % 2:
        raise AssertionError("odd Euler characteristic")
    return 1 - euler // 2


def topology(S: TiledSurface) -> TopologySummary:
    k, n = S.k, S.n
    cycles = vertex_cycles(S)
    V = len(cycles)
    E, F = k * n, n
    euler = V - E + F
    g_stat = _genus(V, k, n)

    by_length = Counter(c.length for c in cycles)
    angles = tuple((l, angle_over_pi(k, l), by_length[l]) for l in sorted(by_length))
    cone = [c for c in cycles if angle_over_pi(k, c.length) > 2]
    stratum = tuple(sorted((zero_order(k, c.length) for c in cone), reverse=True))

    comps = []
    for orb in orbits(S.gluings):
        inside = [c for c in cycles if c.squares[0] in orb]
        ccone = [c for c in inside if angle_over_pi(k, c.length) > 2]
        comps.append(
            Component(
                n=len(orb),
                genus=_genus(len(inside), k, len(orb)),
                cone_points=len(ccone),
                stratum=tuple(sorted((zero_order(k, c.length) for c in ccone), reverse=True)),
                squares=tuple(sorted(orb)),
            )
        )
    return TopologySummary(
        k=k,
        n=n,
        V=V,
        E=E,
        F=F,
        euler=euler,
        g_stat=g_stat,
        vertex_angles=angles,
        cone_points=len(cone),
        stratum=stratum,
        components=tuple(comps),
        connected=len(comps) == 1,
    )


def genus_from_word_counts(S: TiledSurface) -> int:
    """G = (k-1)n/2 - (vertex count)/2 + 1 with the vertex count taken from word cycles."""
    k, n = S.k, S.n
    if k % 2 == 0:
        count = len(evaluate_word(WordKind.chain_c, S.gluings).cycles())
    else:
        count = len(evaluate_word(WordKind.forward_a, S.gluings).cycles()) + len(
            evaluate_word(WordKind.backward_b, S.gluings).cycles()
        )
    twice = (k - 1) * n - count + 2
    assert twice % 2 == 0
    return twice // 2


def genus_statistic(S: TiledSurface) -> int:
    g = topology(S).g_stat
    assert g == genus_from_word_counts(S)
    return g
