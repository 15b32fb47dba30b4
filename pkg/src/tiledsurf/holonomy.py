"""Holonomy tori on square-tiled surfaces.

Two routes are provided: the combinatorial predicate on the commutator and
an independent straight-line tracer that develops saddle connections square
by square with integer arithmetic only.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from .perm import Permutation, commutator, fixed_points, orbits
from .surface import TiledSurface, topology


class UnsupportedSurface(ValueError):
    pass


def _require_squares(S: TiledSurface):
    if S.k != 2:
        raise UnsupportedSurface("holonomy is only implemented for square-tiled surfaces (k = 2)")


def is_holonomy_torus(S: TiledSurface) -> bool:
    """True iff every fixed point of [sigma, tau] is also fixed by sigma and tau."""
    _require_squares(S)
    c = commutator(S.sigma, S.tau)
    return all(S.sigma(i) == i and S.tau(i) == i for i in fixed_points(c))


def visibility_sufficient(S: TiledSurface) -> bool:
    """Sufficient test for being a visibility torus: 4g + 2s - 4 > n."""
    _require_squares(S)
    t = topology(S)
    return 4 * t.g_stat + 2 * t.cone_points - 4 > S.n


def _marked_classes(sigma: Permutation, tau: Permutation) -> dict[int, int]:
    """Map square -> id of the marked vertex at its bottom-left corner.

    Cone points are marked; a component without cone points gets one marked
    vertex, the bottom-left corner of its smallest square.
    """
    c = commutator(sigma, tau)
    cls = {}
    for cid, cyc in enumerate(c.cycles()):
        if len(cyc) > 1:
            for i in cyc:
                cls[i] = cid
    for orb in orbits((sigma, tau)):
        if not any(i in cls for i in orb):
            cls[min(orb)] = -1 - min(orb)
    return cls


def _segment_end(sigma, tau, j: int, p: int, q: int) -> int:
    """Square whose bottom-left corner ends the unit segment (0,0)->(p,q) started in ``j``.

    ``p, q >= 0`` and ``gcd(p, q) == 1``, so the segment meets no lattice point
    strictly inside. Crossing ``x = a`` moves right, crossing ``y = b`` moves up.
    """
    if q == 0:
        return sigma(j)
    if p == 0:
        return tau(j)
    a, b = 1, 1
    while a < p or b < q:
        # next crossing: x = a at t = a/p versus y = b at t = b/q
        if b >= q or (a < p and a * q < b * p):
            j = sigma(j)
            a += 1
        else:
            j = tau(j)
            b += 1
    return sigma(tau(j))


def _trace_quadrant(sigma: Permutation, tau: Permutation, R: int) -> set[tuple[int, int]]:
    marked = _marked_classes(sigma, tau)
    starts = list(marked)
    found = set()
    for p in range(R + 1):
        for q in range(R + 1):
            if (p, q) == (0, 0) or gcd(p, q) != 1:
                continue
            for i in starts:
                j, m = i, 0
                while True:
                    m += 1
                    if m * max(p, q) > R:
                        break
                    j = _segment_end(sigma, tau, j, p, q)
                    if j in marked:
                        found.add((m * p, m * q))
                        break
    return found


def enumerate_holonomy(S: TiledSurface, R: int) -> set[tuple[int, int]]:
    """Holonomy vectors of saddle connections with max-norm at most ``R``.

    The other three quadrants are traced on the reflected surfaces
    ``(sigma^-1, tau)``, ``(sigma, tau^-1)`` and ``(sigma^-1, tau^-1)``.
    """
    _require_squares(S)
    if R < 1:
        raise ValueError("radius must be >= 1")
    s, t = S.sigma, S.tau
    si, ti = s.inverse(), t.inverse()
    out = set()
    for (a, b), (sx, sy) in (((s, t), (1, 1)), ((si, t), (-1, 1)), ((s, ti), (1, -1)), ((si, ti), (-1, -1))):
        out |= {(sx * x, sy * y) for x, y in _trace_quadrant(a, b, R)}
    return out


def primitive_vectors(R: int) -> set[tuple[int, int]]:
    return {
        (x, y)
        for x in range(-R, R + 1)
        for y in range(-R, R + 1)
        if (x, y) != (0, 0) and gcd(x, y) == 1
    }


@dataclass(frozen=True)
class HolonomyReport:
    is_holonomy_torus: bool
    visibility_sufficient: bool
    radius: Optional[int] = None
    vectors: tuple[tuple[int, int], ...] = field(default=())
    oracle_holonomy_consistent: Optional[bool] = None
    oracle_visibility_consistent: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            "is_holonomy_torus": self.is_holonomy_torus,
            "visibility_sufficient": self.visibility_sufficient,
            "radius": self.radius,
            "vectors": [list(v) for v in self.vectors],
            "oracle_holonomy_consistent": self.oracle_holonomy_consistent,
            "oracle_visibility_consistent": self.oracle_visibility_consistent,
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def holonomy_report(S: TiledSurface, radius: Optional[int] = None) -> HolonomyReport:
    """Predicates, plus the tracer cross-check when ``radius`` is given.

    The tracer agrees with the predicate when it finds a non-primitive vector
    exactly for non-holonomy tori, and when it finds every primitive vector
    inside the radius whenever the visibility criterion holds. Agreement is
    only claimed up to ``radius``.
    """
    hol = is_holonomy_torus(S)
    vis = visibility_sufficient(S)
    if radius is None:
        return HolonomyReport(hol, vis)
    vecs = enumerate_holonomy(S, radius)
    has_nonprimitive = any(gcd(x, y) != 1 for x, y in vecs)
    hol_ok = hol != has_nonprimitive
    vis_ok = (not vis) or primitive_vectors(radius) <= vecs
    return HolonomyReport(hol, vis, radius, tuple(sorted(vecs)), hol_ok, vis_ok)
