"""Exact DOF-region computation for the two-user interference channel.

Everything here is integer or rational arithmetic: regions are intersections
of integer halfspaces, vertices are exact rational points, and the sum-DOF
linear program is solved by evaluating the objective at every vertex.  The
inner region is the convex hull of the achievable integer points; the outer
region is the converse halfspace intersection; the two coincide, and a
closed-form minimum gives the same sum DOF, which the verification sweeps
check exhaustively.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple

from .channel import AntennaConfig, CognitionScenario


class Halfspace(NamedTuple):
    """The halfplane a1*d1 + a2*d2 <= b with integer coefficients."""

    a1: int
    a2: int
    b: int

    def holds(self, point: "DofPoint") -> bool:
        return self.a1 * point.d1 + self.a2 * point.d2 <= self.b

    def normalized(self) -> "Halfspace":
        g = gcd(gcd(abs(self.a1), abs(self.a2)), abs(self.b))
        if g > 1:
            return Halfspace(self.a1 // g, self.a2 // g, self.b // g)
        return self


class DofPoint(NamedTuple):
    """A degrees-of-freedom pair, exact rationals."""

    d1: Fraction
    d2: Fraction


NONNEGATIVITY = (Halfspace(-1, 0, 0), Halfspace(0, -1, 0))


def _pos(x: int) -> int:
    return x if x > 0 else 0


def _point(d1, d2) -> DofPoint:
    return DofPoint(Fraction(d1), Fraction(d2))


def _cross(o: DofPoint, a: DofPoint, b: DofPoint) -> Fraction:
    return (a.d1 - o.d1) * (b.d2 - o.d2) - (a.d2 - o.d2) * (b.d1 - o.d1)


def _convex_hull(points: Iterable[tuple[int, int]]) -> list[DofPoint]:
    """Monotone-chain hull, counterclockwise, collinear interiors dropped."""
    pts = sorted({_point(x, y) for x, y in points})
    if len(pts) <= 2:
        return pts
    lower: list[DofPoint] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[DofPoint] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) >= 3 else sorted(set(hull))


def _ccw_sorted(points: set[DofPoint]) -> list[DofPoint]:
    """Sort points counterclockwise around their centroid, exactly."""
    pts = list(points)
    if len(pts) <= 2:
        return sorted(pts)
    n = len(pts)
    cx = sum(p.d1 for p in pts) / n
    cy = sum(p.d2 for p in pts) / n

    def compare(p: DofPoint, q: DofPoint) -> int:
        px, py = p.d1 - cx, p.d2 - cy
        qx, qy = q.d1 - cx, q.d2 - cy
        hp = 0 if (py > 0 or (py == 0 and px > 0)) else 1
        hq = 0 if (qy > 0 or (qy == 0 and qx > 0)) else 1
        if hp != hq:
            return -1 if hp < hq else 1
        cross = px * qy - py * qx
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        # Same ray from the centroid: nearer point first, for determinism.
        dp = px * px + py * py
        dq = qx * qx + qy * qy
        return -1 if dp < dq else (0 if dp == dq else 1)

    ordered = sorted(pts, key=functools.cmp_to_key(compare))
    # Rotate so the lexicographically smallest vertex leads.
    start = ordered.index(min(ordered))
    return ordered[start:] + ordered[:start]


def _drop_collinear(ordered: list[DofPoint]) -> list[DofPoint]:
    if len(ordered) <= 2:
        return ordered
    kept: list[DofPoint] = []
    n = len(ordered)
    for i, cur in enumerate(ordered):
        prev = ordered[(i - 1) % n]
        nxt = ordered[(i + 1) % n]
        if _cross(prev, cur, nxt) != 0:
            kept.append(cur)
    if len(kept) >= 3:
        return kept
    # Fully collinear region: keep the extreme endpoints only.
    flat = sorted(ordered)
    return [flat[0]] if flat[0] == flat[-1] else [flat[0], flat[-1]]


def _recession_direction(halfspaces: Iterable[Halfspace]) -> tuple[int, int] | None:
    """A nonzero direction the region can recede along, if any.

    Any extreme ray of the recession cone is orthogonal to some constraint
    normal, so checking both rotations of every normal is exhaustive.
    """
    hs = list(halfspaces)
    candidates = set()
    for h in hs:
        candidates.add((-h.a2, h.a1))
        candidates.add((h.a2, -h.a1))
    for rx, ry in candidates:
        if rx == 0 and ry == 0:
            continue
        if all(h.a1 * rx + h.a2 * ry <= 0 for h in hs):
            return (rx, ry)
    return None


@dataclass(frozen=True)
class Region2D:
    """A bounded convex 2-D region: integer halfspaces plus exact vertices.

    Vertices are counterclockwise, deduplicated, and start at the
    lexicographically smallest one; degenerate regions keep only segment
    endpoints.  The nonnegativity halfspaces are always part of the list.
    """

    halfspaces: tuple[Halfspace, ...]
    vertices: tuple[DofPoint, ...]

    @classmethod
    def from_halfspaces(cls, halfspaces: Iterable[Halfspace]) -> "Region2D":
        hs = _with_nonnegativity(halfspaces)
        direction = _recession_direction(hs)
        if direction is not None:
            raise ValueError(f"region is unbounded or empty (recedes along {direction})")
        found: set[DofPoint] = set()
        for h, g in itertools.combinations(hs, 2):
            det = h.a1 * g.a2 - h.a2 * g.a1
            if det == 0:
                continue
            x = Fraction(h.b * g.a2 - h.a2 * g.b, det)
            y = Fraction(h.a1 * g.b - h.b * g.a1, det)
            candidate = DofPoint(x, y)
            if all(other.holds(candidate) for other in hs):
                found.add(candidate)
        if not found:
            raise ValueError("region is empty")
        vertices = _drop_collinear(_ccw_sorted(found))
        return cls(halfspaces=tuple(hs), vertices=tuple(vertices))

    @classmethod
    def from_integer_points(cls, points: Iterable[tuple[int, int]]) -> "Region2D":
        pts = list(points)
        if not pts:
            raise ValueError("region is empty")
        hull = _convex_hull(pts)
        halfspaces = list(NONNEGATIVITY)
        if len(hull) == 1:
            (p,) = hull
            halfspaces += [
                Halfspace(1, 0, int(p.d1)),
                Halfspace(0, 1, int(p.d2)),
                Halfspace(-1, 0, -int(p.d1)),
                Halfspace(0, -1, -int(p.d2)),
            ]
        elif len(hull) == 2:
            p, q = hull
            ex, ey = int(q.d1 - p.d1), int(q.d2 - p.d2)
            # The carrier line from both sides, then caps at the endpoints.
            halfspaces += [
                Halfspace(ey, -ex, int(ey * p.d1 - ex * p.d2)),
                Halfspace(-ey, ex, int(-ey * p.d1 + ex * p.d2)),
                Halfspace(ex, ey, int(ex * q.d1 + ey * q.d2)),
                Halfspace(-ex, -ey, int(-ex * p.d1 - ey * p.d2)),
            ]
        else:
            n = len(hull)
            for i in range(n):
                p, q = hull[i], hull[(i + 1) % n]
                ex, ey = int(q.d1 - p.d1), int(q.d2 - p.d2)
                halfspaces.append(Halfspace(ey, -ex, int(ey * p.d1 - ex * p.d2)))
        normalized = _dedup([h.normalized() for h in halfspaces])
        start = hull.index(min(hull))
        vertices = hull[start:] + hull[:start]
        return cls(halfspaces=tuple(normalized), vertices=tuple(vertices))

    def contains(self, point: DofPoint) -> bool:
        return all(h.holds(point) for h in self.halfspaces)

    def is_subset_of(self, other: "Region2D") -> bool:
        return all(other.contains(v) for v in self.vertices)

    def to_json_dict(
        self,
        config: AntennaConfig | None = None,
        scenario: CognitionScenario | None = None,
    ) -> dict:
        data: dict = {}
        if config is not None:
            data["config"] = config.to_json_dict()
        if scenario is not None:
            data["scenario"] = list(scenario.bits)
        data["halfspaces"] = [{"a1": h.a1, "a2": h.a2, "b": h.b} for h in self.halfspaces]
        data["vertices"] = [[_frac_str(v.d1), _frac_str(v.d2)] for v in self.vertices]
        data["sum_dof"] = _frac_str(sum_dof_lp(self))
        return data


def _frac_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _dedup(halfspaces: Iterable[Halfspace]) -> list[Halfspace]:
    seen: dict[Halfspace, None] = {}
    for h in halfspaces:
        seen.setdefault(h, None)
    return list(seen)


def _with_nonnegativity(halfspaces: Iterable[Halfspace]) -> list[Halfspace]:
    return _dedup(list(NONNEGATIVITY) + [h.normalized() for h in halfspaces])


@dataclass(frozen=True)
class AchievableSet:
    """The achievable integer DOF pairs for one configuration and scenario."""

    points: frozenset[tuple[int, int]]
    config: AntennaConfig
    scenario: CognitionScenario

    def __contains__(self, point: tuple[int, int]) -> bool:
        return tuple(point) in self.points


def inner_points(config: AntennaConfig, scenario: CognitionScenario) -> AchievableSet:
    """Enumerate the achievable integer DOF pairs.

    A pair (d1, d2) is achievable by zero forcing when the two transmit-side
    dimension constraints and the two receive-side separation constraints all
    hold; the enumeration box [0, m1+m2]^2 provably contains every solution.
    """
    m1, m2, n1, n2 = config.counts
    t1, t2, r1, r2 = scenario.bits
    w2_overflow = _pos(t1 * m1 + m2 - n1)  # streams of W2 that cannot be nulled at rx1
    w1_overflow = _pos(m1 + t2 * m2 - n2)
    box = m1 + m2
    points = set()
    for d1 in range(box + 1):
        for d2 in range(box + 1):
            if t1 * d1 + d2 > t1 * m1 + m2:
                continue
            if d1 + t2 * d2 > m1 + t2 * m2:
                continue
            if d1 + (0 if r1 else _pos(d2 - w2_overflow)) > n1:
                continue
            if d2 + (0 if r2 else _pos(d1 - w1_overflow)) > n2:
                continue
            points.add((d1, d2))
    return AchievableSet(points=frozenset(points), config=config, scenario=scenario)


def inner_region(config: AntennaConfig, scenario: CognitionScenario) -> Region2D:
    """Convex hull of the achievable integer points."""
    return Region2D.from_integer_points(inner_points(config, scenario).points)


def outer_region(config: AntennaConfig, scenario: CognitionScenario) -> Region2D:
    """Converse region: intersection of the known DOF upper bounds.

    The two sum bounds tied to a cognitive transmitter are dropped exactly
    when that transmitter is cognitive, matching the closed-form minimum in
    dof_formula; a cognitive receiver on the same side relaxes max(...) to a
    sum of the two counts.
    """
    m1, m2, n1, n2 = config.counts
    halfspaces = [
        Halfspace(1, 1, m1 + m2),
        Halfspace(1, 1, n1 + n2),
        Halfspace(1, 0, n1),
        Halfspace(0, 1, n2),
    ]
    if not scenario.t2:
        halfspaces.append(Halfspace(1, 0, m1))
        halfspaces.append(Halfspace(1, 1, (m1 + n2) if scenario.r2 else max(m1, n2)))
    if not scenario.t1:
        halfspaces.append(Halfspace(0, 1, m2))
        halfspaces.append(Halfspace(1, 1, (m2 + n1) if scenario.r1 else max(m2, n1)))
    return Region2D.from_halfspaces(halfspaces)


def regions_equal(a: Region2D, b: Region2D) -> bool:
    """Exact equality of canonicalized regions, as vertex sets."""
    return set(a.vertices) == set(b.vertices)


def sum_dof_lp(region: Region2D) -> Fraction:
    """Maximize d1 + d2 over the region by checking every vertex."""
    if not region.vertices:
        raise ValueError("region has no vertices; empty regions have no maximum")
    direction = _recession_direction(region.halfspaces)
    if direction is not None:
        raise ValueError(f"region is unbounded (recedes along {direction})")
    return max(v.d1 + v.d2 for v in region.vertices)


def dof_formula(config: AntennaConfig, scenario: CognitionScenario) -> int:
    """Closed-form total DOF under cognitive message sharing.

    Minimum of the transmit-side and receive-side antenna sums plus, for each
    non-cognitive transmitter, the matching sum bound (relaxed when the same
    side's receiver is cognitive).  Bounds attached to a cognitive
    transmitter do not apply at all.
    """
    m1, m2, n1, n2 = config.counts
    terms = [m1 + m2, n1 + n2]
    if not scenario.t2:
        terms.append((m1 + n2) if scenario.r2 else max(m1, n2))
    if not scenario.t1:
        terms.append((m2 + n1) if scenario.r1 else max(m2, n1))
    return min(terms)


def dof_cooperation(config: AntennaConfig) -> int:
    """Total DOF with full-duplex cooperation among all four nodes.

    Cooperation does not help: the value equals the no-cognition DOF.
    """
    m1, m2, n1, n2 = config.counts
    return min(m1 + m2, n1 + n2, max(m1, n2), max(m2, n1))


def dof_cooperation_upper_bounds(config: AntennaConfig) -> tuple[int, int]:
    """The two genie upper bounds (max(m1, n2), max(m2, n1))."""
    return (max(config.m1, config.n2), max(config.m2, config.n1))


def lemma5_holds(c: int, d: int, box: int) -> bool:
    """Check the clipped-sum identity on the integer box [0, box]^2.

    The set {a + (b - (c - d)^+)^+ <= d} must coincide with
    {a <= d and a + b <= max(c, d)}.  Requires box >= c + d so the box covers
    everywhere the two sets could differ.
    """
    if min(c, d) < 0:
        raise ValueError("c and d must be nonnegative")
    if box < c + d:
        raise ValueError(f"box {box} too small; need at least c + d = {c + d}")
    shift = _pos(c - d)
    for a in range(box + 1):
        for b in range(box + 1):
            lhs = a + _pos(b - shift) <= d
            rhs = a <= d and a + b <= max(c, d)
            if lhs != rhs:
                return False
    return True


# The cognition-ordering chain, as scenario bit 4-tuples [t1, t2, r1, r2]:
# cognitive rx2, then cognitive t2 (alone, with rx2, with rx1), then both
# cognitive transmitters.
_ORDERING_CHAIN = (
    (0, 0, 0, 1),
    (0, 1, 0, 0),
    (0, 1, 0, 1),
    (0, 1, 1, 0),
    (1, 1, 0, 0),
)


def scenario_ordering_holds(config: AntennaConfig) -> bool:
    """Check that more cognition never hurts, along the canonical chain.

    Verifies both the closed-form DOF chain
    eta(0,0,0,1) <= eta(0,1,0,0) = eta(0,1,0,1) <= eta(0,1,1,0) <= eta(1,1,0,0)
    and the region-inclusion chain for the same scenarios (with the middle
    pair equal as regions).
    """
    scenarios = [CognitionScenario.from_bits(bits) for bits in _ORDERING_CHAIN]
    etas = [dof_formula(config, s) for s in scenarios]
    if not (etas[0] <= etas[1] == etas[2] <= etas[3] <= etas[4]):
        return False
    regions = [outer_region(config, s) for s in scenarios]
    if not regions[0].is_subset_of(regions[1]):
        return False
    if not regions_equal(regions[1], regions[2]):
        return False
    if not regions[2].is_subset_of(regions[3]):
        return False
    return regions[3].is_subset_of(regions[4])
