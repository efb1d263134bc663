"""Persistence over Z/2: Čech filtrations of finite (pseudo)metric spaces,
homology towers of simplicial maps, diagrams and the bottleneck distance."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import gf2
from .complex import homology_basis, induced_homology_matrix
from .covers import FiniteMetric


class NonFunctorialError(ValueError):
    pass


@dataclass(frozen=True)
class Filtration:
    """Simplices (tuples of point ids) with appearance scales, faces first."""

    points: tuple
    simplices: tuple
    scales: tuple
    resolution: float = 0.0

    def __post_init__(self):
        seen = {}
        for s, t in zip(self.simplices, self.scales):
            for face in combinations(s, len(s) - 1) if len(s) > 1 else ():
                if face not in seen or seen[face] > t:
                    raise ValueError(f"face {face} of {s} appears after it")
            seen[s] = t
        if any(b < a for a, b in zip(self.scales, self.scales[1:])):
            raise ValueError("scales must be nondecreasing in filtration order")

    def __len__(self) -> int:
        return len(self.simplices)


def _as_matrix(metric) -> tuple[tuple, np.ndarray]:
    if isinstance(metric, FiniteMetric):
        return metric.points, metric.dist
    return tuple(metric.points), np.asarray(metric.matrix, dtype=float)


def cech_filtration(metric, dim_cap: int = 2, scales: Sequence[float] | None = None) -> Filtration:
    """Witnessed Čech filtration with closed balls.

    A simplex appears at ``min_w max_i d(w, y_i)``.  With explicit ``scales`` each
    appearance is rounded up to the next listed scale and later simplices dropped.
    """
    if dim_cap < 1:
        raise ValueError("dim_cap must be at least 1")
    points, d = _as_matrix(metric)
    n = len(points)
    entries = []
    for k in range(dim_cap + 1):
        for s in combinations(range(n), k + 1):
            t = float(d[:, list(s)].max(axis=1).min())
            entries.append((t, k, s))
    if scales is not None:
        grid = sorted(float(x) for x in scales)
        rounded = []
        for t, k, s in entries:
            i = bisect.bisect_left(grid, t - 1e-12)
            if i < len(grid):
                rounded.append((grid[i], k, s))
        entries = rounded
    entries.sort()
    simplices = tuple(tuple(points[i] for i in s) for _, _, s in entries)
    res = min(scales) if scales is not None else 0.0
    return Filtration(tuple(points), simplices, tuple(t for t, _, _ in entries), res)


@dataclass(frozen=True)
class PersistenceDiagram:
    dim: int
    points: tuple  # sorted (birth, death) pairs; death may be inf
    mode: str = "scale"  # or "index"
    scales: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        pts = tuple(sorted((float(b), float(d)) for b, d in self.points))
        for b, d in pts:
            if not d > b:
                raise ValueError(f"death {d} must exceed birth {b}")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def finite(self) -> list:
        return [p for p in self.points if math.isfinite(p[1])]

    def essential(self) -> list:
        return [p for p in self.points if not math.isfinite(p[1])]

    def to_scales(self) -> "PersistenceDiagram":
        """Replace tower indices by the attached scales."""
        if self.mode != "index":
            return self
        sc = self.scales
        return PersistenceDiagram(self.dim, [(sc[int(b)], d if math.isinf(d) else sc[int(d)]) for b, d in self.points], "scale")


def persistence_diagram(filt: Filtration, k: int) -> PersistenceDiagram:
    """Standard column reduction; zero-length pairs are dropped."""
    index = {s: i for i, s in enumerate(filt.simplices)}
    cols = []
    for s in filt.simplices:
        v = 0
        if len(s) > 1:
            for face in combinations(s, len(s) - 1):
                v ^= 1 << index[face]
        cols.append(v)
    low_owner: dict[int, int] = {}
    killed = set()
    pairs = []
    for j, col in enumerate(cols):
        while col:
            low = col.bit_length() - 1
            if low not in low_owner:
                break
            col ^= cols[low_owner[low]]
        cols[j] = col
        if col:
            low = col.bit_length() - 1
            low_owner[low] = j
            killed.add(low)
            if len(filt.simplices[low]) == k + 1:
                b, d = filt.scales[low], filt.scales[j]
                if d > b:
                    pairs.append((b, d))
    for i, s in enumerate(filt.simplices):
        if len(s) == k + 1 and not cols[i] and i not in killed:
            pairs.append((filt.scales[i], math.inf))
    return PersistenceDiagram(k, pairs, "scale")


# ---------------------------------------------------------------------------
# towers


@dataclass
class TowerModule:
    dim: int
    bettis: list
    steps: list  # steps[i]: matrix (list of column bitsets) from H(K_i) to H(K_{i+1})
    ranks: dict  # (i, j) -> rank of the composite i -> j
    scales: tuple

    @property
    def length(self) -> int:
        return len(self.bettis)


def _columns(matrix: list[list[int]], ncols: int) -> list[int]:
    return [gf2.from_indices(i for i, row in enumerate(matrix) if row[j]) for j in range(ncols)]


def module_from_steps(bettis: Sequence[int], steps: Sequence[list[int]], scales=None, dim: int = 1) -> TowerModule:
    """Rank table of a module given by step matrices as column bitsets."""
    n = len(bettis)
    ranks = {}
    for i in range(n):
        comp = [1 << c for c in range(bettis[i])]
        ranks[(i, i)] = bettis[i]
        for j in range(i + 1, n):
            comp = gf2.compose(steps[j - 1], comp)
            ranks[(i, j)] = gf2.rank(comp)
    return TowerModule(dim, list(bettis), list(steps), ranks, tuple(scales) if scales is not None else tuple(range(n)))


def tower_module(tower, k: int = 1) -> TowerModule:
    bases = [homology_basis(K, k) for K in tower.complexes]
    steps = []
    for i, m in enumerate(tower.maps):
        mat = induced_homology_matrix(m, k, bases[i], bases[i + 1])
        steps.append(_columns(mat, bases[i].betti))
    return module_from_steps([b.betti for b in bases], steps, tower.scales, k)


def tower_diagram(module: TowerModule) -> PersistenceDiagram:
    n = module.length

    def r(i, j):
        return module.ranks[(i, j)] if i >= 0 else 0

    bars = []
    for i in range(n):
        for j in range(i + 1, n):
            mult = r(i, j - 1) - r(i, j) - r(i - 1, j - 1) + r(i - 1, j)
            if mult < 0:
                raise NonFunctorialError(f"negative multiplicity for bar [{i}, {j})")
            bars.extend([(i, j)] * mult)
        mult = r(i, n - 1) - r(i - 1, n - 1)
        if mult < 0:
            raise NonFunctorialError(f"negative multiplicity for bar [{i}, inf)")
        bars.extend([(i, math.inf)] * mult)
    return PersistenceDiagram(module.dim, bars, "index", module.scales)


# ---------------------------------------------------------------------------
# distances and rescaling


def _perfect_matching_within(cost: np.ndarray, t: float) -> bool:
    adj = csr_matrix(cost <= t)
    match = maximum_bipartite_matching(adj, perm_type="column")
    return bool((match >= 0).all())


def bottleneck_distance(D1: PersistenceDiagram, D2: PersistenceDiagram) -> float:
    """Exact bottleneck distance under the sup norm, diagonal allowed."""
    e1 = sorted(b for b, _ in D1.essential())
    e2 = sorted(b for b, _ in D2.essential())
    if len(e1) != len(e2):
        return math.inf
    ess = max((abs(a - b) for a, b in zip(e1, e2)), default=0.0)
    p = np.array(D1.finite(), dtype=float).reshape(-1, 2)
    q = np.array(D2.finite(), dtype=float).reshape(-1, 2)
    n1, n2 = len(p), len(q)
    if n1 + n2 == 0:
        return ess
    big = np.inf
    size = n1 + n2
    cost = np.full((size, size), big)
    if n1 and n2:
        cost[:n1, :n2] = np.maximum(np.abs(p[:, None, 0] - q[None, :, 0]), np.abs(p[:, None, 1] - q[None, :, 1]))
    for i in range(n1):
        cost[i, n2 + i] = (p[i, 1] - p[i, 0]) / 2
    for j in range(n2):
        cost[n1 + j, j] = (q[j, 1] - q[j, 0]) / 2
    cost[n1:, n2:] = 0.0
    candidates = np.unique(cost[np.isfinite(cost)])
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching_within(cost, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(ess, float(candidates[lo]))


def restrict_to_resolution(D: PersistenceDiagram, s: float) -> PersistenceDiagram:
    """View a scale diagram from resolution s on: births below s move to s, bars dead by s vanish."""
    pts = [(max(b, s), d) for b, d in D.points if d > s]
    return PersistenceDiagram(D.dim, pts, D.mode)


def log_scale(D: PersistenceDiagram, resolution: float | None = None) -> PersistenceDiagram:
    """Natural log of every coordinate; births of exactly 0 are clamped to ``resolution`` first."""
    if D.mode == "index":
        D = D.to_scales()
    pts = []
    for b, d in D.points:
        if b < 0 or d < 0:
            raise ValueError("negative coordinate cannot be log-scaled")
        if b == 0:
            if resolution is None or resolution <= 0:
                raise ValueError("zero birth needs a positive resolution")
            b = resolution
        pts.append((math.log(b), math.log(d) if math.isfinite(d) else math.inf))
    return PersistenceDiagram(D.dim, pts, "log")


def approx_diagram_from_basis(sizes: Sequence[float], resolution: float | None = None) -> PersistenceDiagram:
    """One bar (0, s_i) per positive generator size."""
    if any(s < 0 for s in sizes):
        raise ValueError("sizes must be nonnegative")
    return PersistenceDiagram(1, [(0.0, float(s)) for s in sizes if s > 0], "scale")


def mapper_tower_scale_diagram(module: TowerModule) -> PersistenceDiagram:
    """Tower diagram expressed in scales (index i becomes ε_i)."""
    return tower_diagram(module).to_scales()
