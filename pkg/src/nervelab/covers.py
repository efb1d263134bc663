"""Covers of the codomain: intervals on a compact real interval or point subsets
of a finite metric space, with size, Lebesgue number, cover maps and towers."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import networkx as nx
import numpy as np

from .complex import vertex_key

DEFAULT_POINT_GUARD = 20


def guard_limit(default: int) -> int:
    """Brute-force guard; ``NERVELAB_GUARD_LIMIT`` overrides every default."""
    env = os.environ.get("NERVELAB_GUARD_LIMIT")
    return int(env) if env else default


class CoverError(ValueError):
    pass


class NoContainerError(CoverError):
    def __init__(self, alpha):
        super().__init__(f"cover element {alpha!r} lies in no element of the target cover")
        self.alpha = alpha


class GuardExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class RealInterval:
    lo: float
    hi: float
    kind = "real"

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise CoverError(f"empty codomain [{self.lo}, {self.hi}]")

    @property
    def diameter(self) -> float:
        return self.hi - self.lo

    def distance(self, a: float, b: float) -> float:
        return abs(a - b)

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi


@dataclass(frozen=True, eq=False)
class FiniteMetric:
    points: tuple
    dist: np.ndarray = field(repr=False)
    kind = "finite"

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        n = len(self.points)
        if d.shape != (n, n):
            raise CoverError("distance matrix shape does not match the point list")
        if len(set(self.points)) != n:
            raise CoverError("duplicate point ids")
        if not np.allclose(d, d.T, atol=0) or np.any(d < 0) or np.any(np.diag(d) != 0):
            raise CoverError("distance matrix must be symmetric, nonnegative, zero on the diagonal")
        # triangle inequality: d[i,j] <= d[i,k] + d[k,j]
        if n and np.any(d[:, None, :] > d[:, :, None] + d[None, :, :] + 1e-12):
            raise CoverError("distance matrix violates the triangle inequality")
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    @classmethod
    def cycle(cls, n: int) -> "FiniteMetric":
        """Shortest-path metric of the n-cycle with unit edges, points 0..n-1."""
        i = np.arange(n)
        diff = np.abs(i[:, None] - i[None, :])
        return cls(tuple(range(n)), np.minimum(diff, n - diff).astype(float))

    @classmethod
    def from_graph(cls, g: nx.Graph, weight: str | None = None) -> "FiniteMetric":
        pts = sorted(g.nodes, key=vertex_key)
        lengths = dict(nx.all_pairs_dijkstra_path_length(g, weight=weight or "weight"))
        d = np.array([[lengths[a][b] for b in pts] for a in pts], dtype=float)
        return cls(tuple(pts), d)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteMetric) and self.points == other.points
                and np.array_equal(self.dist, other.dist))

    def __hash__(self) -> int:
        return hash(self.points)

    def index(self, p) -> int:
        return self._index[p]

    def __contains__(self, p) -> bool:
        return p in self._index

    def contains(self, p) -> bool:
        return p in self._index

    def distance(self, p, q) -> float:
        return float(self.dist[self._index[p], self._index[q]])

    @property
    def diameter(self) -> float:
        return float(self.dist.max()) if len(self.points) else 0.0

    def subset_diameter(self, pts) -> float:
        idx = [self._index[p] for p in pts]
        if len(idx) < 2:
            return 0.0
        return float(self.dist[np.ix_(idx, idx)].max())


Codomain = RealInterval | FiniteMetric


@dataclass(frozen=True, eq=False)
class Cover:
    """Indexed family of codomain subsets whose union is the codomain.

    Real codomain: each element is an open interval ``(a, b)``.
    Finite codomain: each element is a frozenset of point ids.
    """

    codomain: Codomain
    elements: tuple
    ids: tuple = None
    centers: tuple = None

    def __post_init__(self):
        Z = self.codomain
        if not self.elements:
            raise CoverError("cover has no elements")
        if self.ids is None:
            object.__setattr__(self, "ids", tuple(range(len(self.elements))))
        if len(self.ids) != len(self.elements):
            raise CoverError("ids and elements differ in length")
        if isinstance(Z, RealInterval):
            elems = tuple((float(a), float(b)) for a, b in self.elements)
            for a, b in elems:
                if not (a < b and a < Z.hi and b > Z.lo):
                    raise CoverError(f"interval ({a}, {b}) misses the codomain")
            object.__setattr__(self, "elements", elems)
            gap = _first_uncovered(elems, Z)
            if gap is not None:
                raise CoverError(f"cover misses codomain point {gap}")
        else:
            elems = tuple(frozenset(e) for e in self.elements)
            for e in elems:
                if not e:
                    raise CoverError("empty cover element")
                bad = [p for p in e if p not in Z]
                if bad:
                    raise CoverError(f"cover element references unknown point {bad[0]!r}")
            covered = set().union(*elems)
            missing = [p for p in Z.points if p not in covered]
            if missing:
                raise CoverError(f"cover misses codomain point {missing[0]!r}")
            object.__setattr__(self, "elements", elems)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def is_real(self) -> bool:
        return isinstance(self.codomain, RealInterval)

    def contains_value(self, alpha: int, value) -> bool:
        e = self.elements[alpha]
        if self.is_real:
            return e[0] < value < e[1]
        return value in e

    def element_diameter(self, alpha: int) -> float:
        e = self.elements[alpha]
        if self.is_real:
            return e[1] - e[0]
        return self.codomain.subset_diameter(e)

    def element_contains_set(self, alpha: int, values) -> bool:
        return all(self.contains_value(alpha, v) for v in values)

    def element_subset(self, alpha: int, other: "Cover", beta: int) -> bool:
        """Is element ``alpha`` of this cover inside element ``beta`` of ``other`` (as subsets of Z)?"""
        if self.is_real:
            (a, b), (c, d) = self.elements[alpha], other.elements[beta]
            Z = self.codomain
            left_ok = c < Z.lo if a < Z.lo else c <= a
            right_ok = d > Z.hi if b > Z.hi else d >= b
            return left_ok and right_ok
        return self.elements[alpha] <= other.elements[beta]

    def label(self, alpha: int):
        """Deterministic representative point of an element: interval midpoint clipped
        to the codomain, or the ball centre if known, else the element's point of least eccentricity (ties: smallest id)."""
        e = self.elements[alpha]
        Z = self.codomain
        if self.is_real:
            return min(max((e[0] + e[1]) / 2, Z.lo), Z.hi)
        if self.centers is not None:
            return self.centers[alpha]
        pts = sorted(e, key=vertex_key)
        return min(pts, key=lambda p: (max(Z.distance(p, q) for q in pts), pts.index(p)))


def _first_uncovered(intervals, Z: RealInterval):
    """A point of [lo, hi] not covered by the open intervals, or None."""
    t = Z.lo
    while True:
        reach = max((b for a, b in intervals if a < t), default=t)
        if reach <= t:
            return t
        if reach > Z.hi:
            return None
        t = reach


def s_max(cover: Cover) -> float:
    return max(cover.element_diameter(a) for a in range(len(cover)))


# ---------------------------------------------------------------------------
# Lebesgue number


def _lebesgue_sup_real(cover: Cover) -> float:
    """Supremum of δ such that every closed subinterval of Z of length δ lies in an element."""
    Z = cover.codomain
    lo, hi = Z.lo, Z.hi
    ivs = cover.elements
    for a, b in ivs:
        if a < lo and b > hi:
            return math.inf
    breaks = sorted({a for a, _ in ivs if lo <= a < hi})
    pieces = []  # (left, right, H) for t in (left, right]; H = max b over a < t
    h_point = max(b for a, b in ivs if a < lo)
    pieces.append((lo, lo, h_point))
    edges = [lo] + [p for p in breaks if p > lo] + [hi]
    for left, right in zip(edges, edges[1:]):
        if right <= left:
            continue
        H = max(b for a, b in ivs if a <= left)
        pieces.append((left, right, H))
    best = math.inf
    for left, right, H in pieces:
        if left == right:
            # the single point t = lo: [lo, lo+δ] needs H > lo + δ
            cand = max(0.0, H - lo)
            if cand <= hi - lo:
                best = min(best, cand)
            continue
        a0 = max(0.0, H - right)
        if a0 <= hi - right:
            best = min(best, a0)
        if H <= hi:
            best = min(best, hi - right)
    return best


def _maximal_cliques(dist: np.ndarray, threshold: float):
    g = nx.Graph()
    g.add_nodes_from(range(dist.shape[0]))
    iu, ju = np.nonzero(np.triu(dist <= threshold, k=1))
    g.add_edges_from(zip(iu.tolist(), ju.tolist()))
    return nx.find_cliques(g)


def set_family_lebesgue(dist: np.ndarray, elements: Sequence[frozenset], pairs_only: bool = False,
                        guard: int = DEFAULT_POINT_GUARD) -> tuple[float, tuple | None]:
    """Smallest diameter of a point subset contained in no element, with a witness.

    ``dist`` is a finite (pseudo)metric on points ``0..n-1`` and ``elements``
    are index sets covering them.  Returns ``inf`` when every subset fits.
    """
    dist = np.asarray(dist, dtype=float)
    n = dist.shape[0]
    if pairs_only:
        best, witness = math.inf, None
        for i, j in combinations(range(n), 2):
            if dist[i, j] < best and not any(i in e and j in e for e in elements):
                best, witness = float(dist[i, j]), (i, j)
        return best, witness
    limit = guard_limit(guard)
    if n > limit:
        raise GuardExceeded(f"exact Lebesgue number limited to {limit} points")
    for d in np.unique(dist[np.isfinite(dist)]):
        for clique in _maximal_cliques(dist, d):
            cs = frozenset(clique)
            if not any(cs <= e for e in elements):
                return float(d), tuple(sorted(clique))
    return math.inf, None


def _lebesgue_sup_finite(cover: Cover, pairs_only: bool = False) -> tuple[float, tuple | None]:
    Z = cover.codomain
    idx_elems = [frozenset(Z.index(p) for p in e) for e in cover.elements]
    value, witness = set_family_lebesgue(Z.dist, idx_elems, pairs_only)
    if witness is not None:
        witness = tuple(sorted((Z.points[i] for i in witness), key=vertex_key))
    return value, witness


def lebesgue_sup(cover: Cover, mode: str = "exact") -> float:
    """Uncapped supremum form of the Lebesgue number (``inf`` when one element is all of Z)."""
    if cover.is_real:
        return _lebesgue_sup_real(cover)
    if mode not in ("exact", "pairs_upper_bound"):
        raise ValueError(f"unknown Lebesgue mode {mode!r}")
    return _lebesgue_sup_finite(cover, pairs_only=mode == "pairs_upper_bound")[0]


def lebesgue_number(cover: Cover, mode: str = "exact") -> float:
    """Lebesgue number of the cover, capped at the codomain diameter.

    ``exact`` on a finite codomain enumerates maximal cliques of the threshold
    graphs and is guarded by the number of points; ``pairs_upper_bound`` only
    tests 2-point subsets.
    """
    return min(lebesgue_sup(cover, mode), cover.codomain.diameter)


# ---------------------------------------------------------------------------
# cover maps and towers


class CoverMap:
    """Index map ξ with U_α ⊆ V_ξ(α), validated on construction."""

    def __init__(self, source: Cover, target: Cover, assignment: Sequence[int]):
        assignment = tuple(int(b) for b in assignment)
        if len(assignment) != len(source):
            raise CoverError("cover map must assign every source element")
        for a, b in enumerate(assignment):
            if not 0 <= b < len(target) or not source.element_subset(a, target, b):
                raise CoverError(f"element {a} is not contained in target element {b}")
        self.source = source
        self.target = target
        self.assignment = assignment

    def __repr__(self) -> str:
        return f"CoverMap({dict(enumerate(self.assignment))})"

    def __getitem__(self, alpha: int) -> int:
        return self.assignment[alpha]

    def compose(self, after: "CoverMap") -> "CoverMap":
        """``after ∘ self``."""
        return CoverMap(self.source, after.target, [after.assignment[b] for b in self.assignment])


def identity_cover_map(U: Cover) -> CoverMap:
    return CoverMap(U, U, range(len(U)))


def cover_map(U: Cover, V: Cover) -> CoverMap:
    """Map each element of U to the smallest-index element of V containing it."""
    out = []
    for a in range(len(U)):
        for b in range(len(V)):
            if U.element_subset(a, V, b):
                out.append(b)
                break
        else:
            raise NoContainerError(a)
    return CoverMap(U, V, out)


class TowerOfCovers:
    def __init__(self, scales: Sequence[float], covers: Sequence[Cover], maps: Sequence[CoverMap] | None = None):
        scales = tuple(float(e) for e in scales)
        if len(scales) != len(covers) or not scales:
            raise CoverError("one cover per scale is required")
        if any(b <= a for a, b in zip(scales, scales[1:])):
            raise CoverError("scales must be strictly increasing")
        if maps is None:
            maps = [cover_map(covers[i], covers[i + 1]) for i in range(len(covers) - 1)]
        if len(maps) != len(covers) - 1:
            raise CoverError("one cover map per consecutive pair is required")
        for i, m in enumerate(maps):
            if m.source is not covers[i] or m.target is not covers[i + 1]:
                raise CoverError(f"map {i} does not join consecutive covers")
        self.scales = scales
        self.covers = tuple(covers)
        self.maps = tuple(maps)

    def __len__(self) -> int:
        return len(self.covers)

    @property
    def resolution(self) -> float:
        return self.scales[0]

    def map_between(self, i: int, j: int) -> CoverMap:
        if not 0 <= i <= j < len(self.covers):
            raise CoverError("need i <= j inside the tower")
        m = identity_cover_map(self.covers[i])
        for step in self.maps[i:j]:
            m = m.compose(step)
        return m

    def scale_index(self, eps: float) -> int | None:
        for i, e in enumerate(self.scales):
            if math.isclose(e, eps, rel_tol=1e-12, abs_tol=1e-12):
                return i
        return None


# ---------------------------------------------------------------------------
# special constructions


def _closed_ball(Z: FiniteMetric, center, radius: float) -> frozenset:
    row = Z.dist[Z.index(center)]
    return frozenset(Z.points[i] for i in np.flatnonzero(row <= radius + 1e-12))


def delta_sample(Z: FiniteMetric, delta: float) -> list:
    """Greedy δ-sample seeded at the smallest point id.

    After the seed, repeatedly take the point whose closed δ-ball covers the most
    still-uncovered points (ties: smallest id) until every point is within δ.
    """
    pts = sorted(Z.points, key=vertex_key)
    balls = {p: _closed_ball(Z, p, delta) for p in pts}
    centers = [pts[0]]
    uncovered = set(pts) - balls[pts[0]]
    while uncovered:
        best = max(pts, key=lambda p: (len(balls[p] & uncovered), -pts.index(p)))
        centers.append(best)
        uncovered -= balls[best]
    return centers


def delta_net_cover(Z: FiniteMetric, delta: float) -> Cover:
    if delta <= 0:
        raise CoverError("delta must be positive")
    centers = delta_sample(Z, delta)
    return Cover(Z, tuple(_closed_ball(Z, p, 2 * delta) for p in centers), tuple(centers), tuple(centers))


def all_balls_cover(Z: FiniteMetric, delta: float) -> Cover:
    """Closed δ-balls around every point; the nerve is the intrinsic Čech complex at δ."""
    if delta <= 0:
        raise CoverError("delta must be positive")
    pts = sorted(Z.points, key=vertex_key)
    return Cover(Z, tuple(_closed_ball(Z, p, delta) for p in pts), tuple(pts), tuple(pts))


def uniform_interval_cover(Z: RealInterval, length: float, shift: float | None = None) -> Cover:
    """Open intervals of the given length centred at lo, lo+shift, lo+2·shift, ..."""
    shift = length / 2 if shift is None else shift
    if length <= 0 or not 0 < shift < length:
        raise CoverError("need 0 < shift < length")
    elems = []
    k = 0
    while True:
        c = Z.lo + k * shift
        elems.append((c - length / 2, c + length / 2))
        if c + length / 2 > Z.hi:
            break
        k += 1
    return Cover(Z, tuple(elems))


def good_tower(Z: Codomain, c: float, s: float, n_scales: int) -> TowerOfCovers:
    """A (c, s)-good tower with scales s·c^i.

    Only c = 2 is built in: balls of radius ε/2 around every point (finite Z)
    or uniform intervals of length ε and shift ε/2 (real Z).
    """
    if c != 2:
        raise CoverError(f"no built-in (c, s)-good tower for c = {c}")
    if s <= 0 or n_scales < 1:
        raise CoverError("need s > 0 and at least one scale")
    scales = [s * c ** i for i in range(n_scales)]
    if isinstance(Z, FiniteMetric):
        covers = [all_balls_cover(Z, e / 2) for e in scales]
        maps = [CoverMap(covers[i], covers[i + 1], range(len(Z.points))) for i in range(n_scales - 1)]
        return TowerOfCovers(scales, covers, maps)
    covers = [uniform_interval_cover(Z, e) for e in scales]
    return TowerOfCovers(scales, covers)


@dataclass
class GoodnessReport:
    ok: bool
    scale: float | None = None
    reason: str = ""
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_cs_good(tower: TowerOfCovers, c: float, s: float) -> GoodnessReport:
    """Check s_max(U_ε) <= ε at every scale and λ(U_cε) >= ε where cε is stored."""
    if not math.isclose(tower.scales[0], s, rel_tol=1e-12, abs_tol=1e-12):
        raise CoverError(f"tower resolution {tower.scales[0]} differs from s = {s}")
    tol = 1e-12
    for eps, U in zip(tower.scales, tower.covers):
        size = s_max(U)
        if size > eps + tol:
            alpha = max(range(len(U)), key=U.element_diameter)
            return GoodnessReport(False, eps, f"s_max {size} > {eps}", (U.ids[alpha],))
    for eps in tower.scales:
        j = tower.scale_index(c * eps)
        if j is None:
            continue
        U = tower.covers[j]
        if U.is_real:
            lam, witness = _lebesgue_sup_real(U), None
        else:
            lam, witness = _lebesgue_sup_finite(U)
        if lam < eps - tol:
            return GoodnessReport(False, eps, f"Lebesgue number {lam} of scale {c * eps} < {eps}", witness)
    return GoodnessReport(True)
