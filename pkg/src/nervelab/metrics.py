"""Path-diameter pseudometrics (d_f on the domain, d_δ on mapper vertices),
representative labelings, correspondences and their distortion."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx
import numpy as np

from .complex import SimplicialComplex, vertex_key
from .covers import FiniteMetric, GuardExceeded, RealInterval, guard_limit, s_max
from .pullback import DomainFunction, Mapper, representatives, vertex_projection

DEFAULT_VALUE_GUARD = 15


class InfiniteDistanceError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PseudoMetric:
    points: tuple
    matrix: np.ndarray = field(repr=False)
    mode: str = "exact"

    def __post_init__(self):
        d = np.asarray(self.matrix, dtype=float)
        if d.shape != (len(self.points), len(self.points)):
            raise ValueError("matrix shape does not match points")
        object.__setattr__(self, "matrix", d)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    @property
    def has_infinite(self) -> bool:
        return bool(np.isinf(self.matrix).any())

    def __call__(self, p, q) -> float:
        return float(self.matrix[self._index[p], self._index[q]])

    def index(self, p) -> int:
        return self._index[p]

    def validate(self, tol: float = 1e-9) -> None:
        d = self.matrix
        if np.any(np.diag(d) != 0) or not np.array_equal(d, d.T) or np.any(d < 0):
            raise ValueError("not symmetric, nonnegative with zero diagonal")
        fin = np.where(np.isinf(d), 1e300, d)
        if np.any(fin[:, None, :] > fin[:, :, None] + fin[None, :, :] + tol):
            raise ValueError("triangle inequality fails")

    def restrict(self, points: Sequence) -> "PseudoMetric":
        idx = [self._index[p] for p in points]
        return PseudoMetric(tuple(points), self.matrix[np.ix_(idx, idx)], self.mode)


# ---------------------------------------------------------------------------
# real-valued sweep


def _real_sweep(K: SimplicialComplex, values: Sequence[float], top_dim: int) -> np.ndarray:
    """min over [m, M] (vertex values) such that x, y share a component of f^{-1}[m, M].

    Each simplex meets the slab in a convex piece; pieces of a simplex and its
    facet are glued whenever both are nonempty, which gives the slab's
    connectivity for PL functions.
    """
    n = len(K.vertices)
    vals = np.asarray(values, dtype=float)
    levels = np.unique(vals)
    cells = []  # (lo, hi, dim, index)
    for k in range(top_dim + 1):
        for j, s in enumerate(K.simplices(k)):
            vs = vals[list(s)]
            cells.append((vs.min(), vs.max(), k, j))
    node = {(k, j): t for t, (_, _, k, j) in enumerate(cells)}
    facets: list[list[int]] = [[] for _ in cells]
    for t, (_, _, k, j) in enumerate(cells):
        if k == 0:
            continue
        s = K.simplices(k)[j]
        for i in range(len(s)):
            facets[t].append(node[(k - 1, K.index(k - 1, s[:i] + s[i + 1:]))])
    cofacets: list[list[int]] = [[] for _ in cells]
    for t, fs in enumerate(facets):
        for u in fs:
            cofacets[u].append(t)
    vertex_cell = [node[(0, i)] for i in range(n)]
    order_by_lo = sorted(range(len(cells)), key=lambda t: cells[t][0])

    D = np.full((n, n), np.inf)
    for ai, m in enumerate(levels):
        parent = list(range(len(cells)))
        active = [False] * len(cells)

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        ptr = 0
        for M in levels[ai:]:
            while ptr < len(order_by_lo) and cells[order_by_lo[ptr]][0] <= M:
                t = order_by_lo[ptr]
                ptr += 1
                if cells[t][1] < m:
                    continue
                active[t] = True
                for u in facets[t] + cofacets[t]:
                    if active[u]:
                        ru, rt = find(u), find(t)
                        if ru != rt:
                            parent[ru] = rt
            on = (vals >= m) & (vals <= M)
            idx = np.flatnonzero(on)
            roots = np.array([find(vertex_cell[i]) for i in idx])
            same = roots[:, None] == roots[None, :]
            sub = D[np.ix_(idx, idx)]
            D[np.ix_(idx, idx)] = np.where(same, np.minimum(sub, M - m), sub)
    return D


def _finite_exact(K: SimplicialComplex, Z: FiniteMetric, values: Sequence) -> np.ndarray:
    distinct = sorted(set(values), key=vertex_key)
    limit = guard_limit(DEFAULT_VALUE_GUARD)
    if len(distinct) > limit:
        raise GuardExceeded(f"exact d_f limited to {limit} distinct values")
    n = len(K.vertices)
    vidx = [Z.index(v) for v in distinct]
    sub = Z.dist[np.ix_(vidx, vidx)]
    pos = {v: i for i, v in enumerate(distinct)}
    vclass = np.array([pos[v] for v in values])
    g = K.graph()
    D = np.full((n, n), np.inf)
    for t in np.unique(sub):
        h = nx.Graph()
        h.add_nodes_from(range(len(distinct)))
        iu, ju = np.nonzero(np.triu(sub <= t, k=1))
        h.add_edges_from(zip(iu.tolist(), ju.tolist()))
        for clique in nx.find_cliques(h):
            keep = np.flatnonzero(np.isin(vclass, clique))
            for comp in nx.connected_components(g.subgraph(keep.tolist())):
                c = sorted(comp)
                block = D[np.ix_(c, c)]
                D[np.ix_(c, c)] = np.minimum(block, t)
    return D


def _ball_anchored(K: SimplicialComplex, dist_to_centres: np.ndarray) -> np.ndarray:
    """2r for the least r such that x, y connect inside the preimage of some closed ball.

    ``dist_to_centres[c, v]`` is the codomain distance from centre c to f(v).
    """
    n = len(K.vertices)
    edges = K.edges()
    D = np.full((n, n), np.inf)
    for row in dist_to_centres:
        order = np.argsort(row, kind="stable")
        parent = list(range(n))
        active = np.zeros(n, dtype=bool)

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        k = 0
        radii = np.unique(row)
        for r in radii:
            while k < n and row[order[k]] <= r:
                active[order[k]] = True
                k += 1
            for a, b in edges:
                if active[a] and active[b]:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[ra] = rb
            idx = np.flatnonzero(active)
            roots = np.array([find(i) for i in idx])
            same = roots[:, None] == roots[None, :]
            sub = D[np.ix_(idx, idx)]
            D[np.ix_(idx, idx)] = np.where(same, np.minimum(sub, 2 * r), sub)
    return D


def df_metric(K: SimplicialComplex, f: DomainFunction, mode: str = "exact") -> PseudoMetric:
    """Map-induced pseudometric on the domain vertices.

    Real codomain, ``exact``: threshold sweep over vertex values, using all
    simplices up to dimension 2.  Finite codomain, ``exact``: maximal cliques
    of the value threshold graphs (guarded).  ``approx`` on either codomain:
    ball-anchored estimate with d_f <= estimate <= 2 d_f.  Disconnected
    vertex pairs get ``inf``.
    """
    if mode not in ("exact", "approx"):
        raise ValueError(f"unknown mode {mode!r}")
    if K.dim > 2:
        raise ValueError("d_f is computed on complexes of dimension at most 2")
    Z = f.codomain
    if mode == "exact":
        if isinstance(Z, RealInterval):
            D = _real_sweep(K, f.values, min(K.dim_cap, 2))
        else:
            D = _finite_exact(K, Z, f.values)
    else:
        if isinstance(Z, RealInterval):
            vals = np.asarray(f.values)
            centres = np.unique(vals)
            D = _ball_anchored(K, np.abs(centres[:, None] - vals[None, :]))
        else:
            cols = [Z.index(v) for v in f.values]
            D = _ball_anchored(K, Z.dist[:, cols])
    np.fill_diagonal(D, 0.0)
    return PseudoMetric(K.vertices, D, mode)


def cycle_support_metric_size(z, d: PseudoMetric) -> float:
    """Largest pairwise distance among the vertices of a chain's support."""
    verts = sorted(z.vertex_ids(), key=vertex_key)
    if not verts:
        raise ValueError("empty chain has no size")
    idx = [d.index(v) for v in verts]
    return float(d.matrix[np.ix_(idx, idx)].max())


def subset_size(vertices, d: PseudoMetric) -> float:
    idx = [d.index(v) for v in vertices]
    return float(d.matrix[np.ix_(idx, idx)].max()) if idx else 0.0


# ---------------------------------------------------------------------------
# mapper side


@dataclass(frozen=True)
class VertexLabeling:
    """Per nerve vertex: codomain label z_α and domain representative x_{α,i}."""

    codomain_labels: dict
    domain_reps: dict


def default_labeling(m: Mapper) -> VertexLabeling:
    pb = m.pullback
    U = pb.cover
    labels = {lab: U.label(lab[0]) for lab in pb.labels}
    return VertexLabeling(labels, representatives(pb))


def d_delta_metric(m: Mapper, labeling: VertexLabeling | None = None, mode: str = "exact") -> PseudoMetric:
    """Vertex-path diameter metric on the nerve, with vertex values given by the labels."""
    labeling = labeling or default_labeling(m)
    N = m.nerve
    Z = m.pullback.cover.codomain
    values = [labeling.codomain_labels[v] for v in N.vertices]
    f = DomainFunction(N, Z, dict(zip(N.vertices, values)))
    if isinstance(Z, RealInterval) and mode == "exact":
        D = _real_sweep(N, f.values, 1)
        np.fill_diagonal(D, 0.0)
        return PseudoMetric(N.vertices, D, "exact")
    skeleton = SimplicialComplex(N.vertices, N.simplex_ids(1), 1)
    f1 = DomainFunction(skeleton, Z, dict(zip(N.vertices, values)))
    return df_metric(skeleton, f1, mode)


@dataclass(frozen=True)
class Correspondence:
    pairs: tuple  # (domain vertex, nerve vertex)

    def left(self) -> set:
        return {a for a, _ in self.pairs}

    def right(self) -> set:
        return {b for _, b in self.pairs}


def build_correspondence(m: Mapper, labeling: VertexLabeling | None = None) -> Correspondence:
    labeling = labeling or default_labeling(m)
    proj = vertex_projection(m.pullback)
    pairs = set(proj.items())
    pairs.update((x, v) for v, x in labeling.domain_reps.items())
    ordered = sorted(pairs, key=lambda p: (vertex_key(p[0]), vertex_key(p[1])))
    S = Correspondence(tuple(ordered))
    if S.left() != set(m.pullback.complex.vertices) or S.right() != set(m.nerve.vertices):
        raise AssertionError("correspondence is not total on both sides")
    return S


def correspondence_distortion(S: Correspondence, dX: PseudoMetric, dY: PseudoMetric) -> float:
    xs = np.array([dX.index(a) for a, _ in S.pairs])
    ys = np.array([dY.index(b) for _, b in S.pairs])
    A = dX.matrix[np.ix_(xs, xs)]
    B = dY.matrix[np.ix_(ys, ys)]
    if np.isinf(A).any() or np.isinf(B).any():
        raise InfiniteDistanceError("distortion over infinite distances is undefined")
    return float(np.abs(A - B).max()) if len(xs) else 0.0


@dataclass
class ClaimReport:
    delta: float
    claim1: float  # max |d_f(x,x') - d_δ(p x, p x')|
    claim2: float  # max |d_f(x, x_v) - d_δ(p x, v)|
    claim3: float  # max |d_f(x_v, x_w) - d_δ(v, w)|
    observation0: float  # max d_δ(p(x_v), v)
    distortion: float

    def holds(self, tol: float = 1e-9) -> dict:
        d = self.delta
        return {
            "claim1": self.claim1 <= d + tol,
            "claim2": self.claim2 <= 3 * d + tol,
            "claim3": self.claim3 <= 5 * d + tol,
            "observation0": self.observation0 <= 2 * d + tol,
            "distortion": self.distortion <= 5 * d + tol,
        }


def claim_report(m: Mapper, df: PseudoMetric, dd: PseudoMetric | None = None,
                 labeling: VertexLabeling | None = None) -> ClaimReport:
    """Measure each term of the correspondence argument; δ is the s_max of the cover used."""
    labeling = labeling or default_labeling(m)
    dd = dd or d_delta_metric(m, labeling)
    proj = vertex_projection(m.pullback)
    X = list(m.pullback.complex.vertices)
    V = list(m.nerve.vertices)
    xi = [df.index(x) for x in X]
    pxi = [dd.index(proj[x]) for x in X]
    ri = [df.index(labeling.domain_reps[v]) for v in V]
    vi = [dd.index(v) for v in V]
    DF, DD = df.matrix, dd.matrix
    c1 = np.abs(DF[np.ix_(xi, xi)] - DD[np.ix_(pxi, pxi)]).max()
    c2 = np.abs(DF[np.ix_(xi, ri)] - DD[np.ix_(pxi, vi)]).max()
    c3 = np.abs(DF[np.ix_(ri, ri)] - DD[np.ix_(vi, vi)]).max()
    obs = max(DD[dd.index(proj[labeling.domain_reps[v]]), dd.index(v)] for v in V)
    S = build_correspondence(m, labeling)
    dis = correspondence_distortion(S, df, dd)
    return ClaimReport(s_max(m.pullback.cover), float(c1), float(c2), float(c3), float(obs), dis)
