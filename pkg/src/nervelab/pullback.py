"""Pullback covers, nerves, mapper and multiscale mapper, plus the discrete
projection onto the nerve and the chain maps between domain and nerve."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

import networkx as nx
import numpy as np

from . import gf2
from .complex import Chain, SimplicialComplex, VertexMap, homology_basis
from .covers import Codomain, Cover, CoverError, RealInterval, TowerOfCovers, set_family_lebesgue


class EdgeNotCovered(ValueError):
    def __init__(self, x, y):
        super().__init__(f"edge ({x!r}, {y!r}) lies in no single pullback element")
        self.edge = (x, y)


class DomainFunction:
    """Vertex values of a map from a complex into a codomain."""

    def __init__(self, K: SimplicialComplex, codomain: Codomain, values: Mapping):
        missing = [v for v in K.vertices if v not in values]
        if missing:
            raise CoverError(f"function has no value at vertex {missing[0]!r}")
        vals = []
        for v in K.vertices:
            x = values[v]
            if isinstance(codomain, RealInterval):
                x = float(x)
            if not codomain.contains(x):
                raise CoverError(f"value {x!r} at vertex {v!r} lies outside the codomain")
            vals.append(x)
        self.complex = K
        self.codomain = codomain
        self.values = tuple(vals)  # indexed by vertex position

    def __getitem__(self, v: Hashable):
        return self.values[self.complex.vertex_index[v]]

    @property
    def is_real(self) -> bool:
        return isinstance(self.codomain, RealInterval)

    def as_dict(self) -> dict:
        return dict(zip(self.complex.vertices, self.values))


def _components(K: SimplicialComplex, members: Sequence[int]) -> list[list[int]]:
    parent = {v: v for v in members}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in K.edges():
        if a in parent and b in parent:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in sorted(members):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda g: g[0])


@dataclass(frozen=True, eq=False)
class PullbackCover:
    """Components of vertex preimages; ``labels[k] = (α, i)`` names ``sets[k]``."""

    complex: SimplicialComplex
    function: DomainFunction
    cover: Cover
    labels: tuple
    sets: tuple  # frozensets of vertex positions

    def __len__(self) -> int:
        return len(self.sets)

    def element_vertices(self, k: int) -> list:
        return [self.complex.vertices[v] for v in sorted(self.sets[k])]

    def containing(self, v: int) -> list[int]:
        return [k for k, s in enumerate(self.sets) if v in s]

    def component_of(self, alpha: int, v: int) -> int:
        """Element index of the component of f^{-1}(U_alpha) holding vertex position v."""
        for k, (a, _) in enumerate(self.labels):
            if a == alpha and v in self.sets[k]:
                return k
        raise KeyError((alpha, v))


def pullback_cover(K: SimplicialComplex, f: DomainFunction, U: Cover) -> PullbackCover:
    if f.complex is not K:
        raise CoverError("function is defined on a different complex")
    if f.codomain != U.codomain:
        raise CoverError("function and cover use different codomains")
    hit = [False] * len(K.vertices)
    labels, sets = [], []
    for alpha in range(len(U)):
        pre = [v for v, x in enumerate(f.values) if U.contains_value(alpha, x)]
        for v in pre:
            hit[v] = True
        for i, comp in enumerate(_components(K, pre)):
            labels.append((alpha, i))
            sets.append(frozenset(comp))
    for v, ok in enumerate(hit):
        if not ok:
            raise CoverError(f"value {f.values[v]!r} of vertex {K.vertices[v]!r} lies in no cover element")
    return PullbackCover(K, f, U, tuple(labels), tuple(sets))


def nerve_of_sets(names: Sequence[Hashable], sets: Sequence[frozenset], dim_cap: int = 3) -> SimplicialComplex:
    """Nerve of a family of subsets of a common ground set.

    A set of elements spans a simplex iff some ground point lies in all of
    them, so the maximal candidates are the per-point membership lists.
    """
    members: dict = {}
    for k, s in enumerate(sets):
        for x in s:
            members.setdefault(x, []).append(names[k])
    return SimplicialComplex(list(names), members.values(), dim_cap)


def nerve(cover_like, dim_cap: int = 3) -> SimplicialComplex:
    if isinstance(cover_like, PullbackCover):
        return nerve_of_sets(cover_like.labels, cover_like.sets, dim_cap)
    if isinstance(cover_like, Cover) and not cover_like.is_real:
        return nerve_of_sets(cover_like.ids, cover_like.elements, dim_cap)
    if isinstance(cover_like, Cover):
        return real_cover_nerve(cover_like, dim_cap)
    raise TypeError(f"cannot take the nerve of {type(cover_like).__name__}")


def real_cover_nerve(U: Cover, dim_cap: int = 3) -> SimplicialComplex:
    """Nerve of an interval cover restricted to the codomain (intervals meet iff they share a point of Z)."""
    Z = U.codomain
    clipped = [(max(a, Z.lo), min(b, Z.hi), a < Z.lo, b > Z.hi) for a, b in U.elements]
    # a family of intervals has a common point iff every pair does (Helly in R)
    def meet(i, j):
        a1, b1, lc1, rc1 = clipped[i]
        a2, b2, lc2, rc2 = clipped[j]
        lo = max(a1, a2)
        hi = min(b1, b2)
        if lo < hi:
            return True
        if lo > hi:
            return False
        left_closed = (lc1 or a1 < lo) and (lc2 or a2 < lo)
        right_closed = (rc1 or b1 > hi) and (rc2 or b2 > hi)
        return left_closed and right_closed
    g = nx.Graph()
    g.add_nodes_from(range(len(U)))
    g.add_edges_from((i, j) for i in range(len(U)) for j in range(i + 1, len(U)) if meet(i, j))
    return SimplicialComplex(list(U.ids), [[U.ids[i] for i in c] for c in nx.find_cliques(g)], dim_cap)


@dataclass(frozen=True, eq=False)
class Mapper:
    pullback: PullbackCover
    nerve: SimplicialComplex

    @property
    def dim_cap(self) -> int:
        return self.nerve.dim_cap


def mapper(K: SimplicialComplex, f: DomainFunction, U: Cover, dim_cap: int = 3) -> Mapper:
    pb = pullback_cover(K, f, U)
    return Mapper(pb, nerve(pb, dim_cap))


class SimplicialTower:
    """Complexes at increasing scales joined by simplicial maps."""

    def __init__(self, scales: Sequence[float], complexes: Sequence[SimplicialComplex],
                 maps: Sequence[VertexMap], mappers: Sequence[Mapper] | None = None):
        if len(scales) != len(complexes) or len(maps) != len(complexes) - 1:
            raise ValueError("need one complex per scale and one map per consecutive pair")
        for i, m in enumerate(maps):
            if m.source is not complexes[i] or m.target is not complexes[i + 1]:
                raise ValueError(f"map {i} does not join consecutive complexes")
        self.scales = tuple(scales)
        self.complexes = tuple(complexes)
        self.maps = tuple(maps)
        self.mappers = tuple(mappers) if mappers is not None else None

    def __len__(self) -> int:
        return len(self.complexes)

    def map_between(self, i: int, j: int) -> VertexMap:
        K = self.complexes[i]
        m = VertexMap(K, K, {v: v for v in K.vertices})
        for step in self.maps[i:j]:
            m = m.compose(step)
        return m


def multiscale_mapper(K: SimplicialComplex, f: DomainFunction, tower: TowerOfCovers, dim_cap: int = 3) -> SimplicialTower:
    mappers = [mapper(K, f, U, dim_cap) for U in tower.covers]
    maps = []
    for i, xi in enumerate(tower.maps):
        src, dst = mappers[i], mappers[i + 1]
        assignment = {}
        for k, (alpha, comp) in enumerate(src.pullback.labels):
            v = min(src.pullback.sets[k])
            target = dst.pullback.component_of(xi[alpha], v)
            assignment[(alpha, comp)] = dst.pullback.labels[target]
        maps.append(VertexMap(src.nerve, dst.nerve, assignment))
    return SimplicialTower(tower.scales, [m.nerve for m in mappers], maps, mappers)


# ---------------------------------------------------------------------------
# projection and chain maps


def vertex_projection(pb: PullbackCover) -> dict:
    """Domain vertex id -> label of the minimal (α, i) element containing it."""
    out = {}
    for v, x in enumerate(pb.complex.vertices):
        out[x] = pb.labels[min(pb.containing(v))]
    return out


def representatives(pb: PullbackCover) -> dict:
    """Nerve vertex -> smallest domain vertex of its element."""
    return {lab: pb.complex.vertices[min(s)] for lab, s in zip(pb.labels, pb.sets)}


def _edge_chain(N: SimplicialComplex, path: Sequence) -> set:
    out: set = set()
    for a, b in zip(path, path[1:]):
        if a != b:
            out ^= {N.to_positions((a, b))}
    return out


def push_cycle(z: Chain, m: Mapper) -> Chain:
    """Image in the nerve of a domain 1-chain under the projection-based chain map."""
    pb, N = m.pullback, m.nerve
    K = pb.complex
    proj = [min(pb.containing(v)) for v in range(len(K.vertices))]
    support: set = set()
    for x, y in z.support:
        common = [k for k in range(len(pb)) if x in pb.sets[k] and y in pb.sets[k]]
        if not common:
            raise EdgeNotCovered(K.vertices[x], K.vertices[y])
        w = pb.labels[common[0]]
        support ^= _edge_chain(N, [pb.labels[proj[x]], w, pb.labels[proj[y]]])
    return Chain(N, 1, frozenset(support))


def _bfs_path(K: SimplicialComplex, allowed: frozenset, start: int, goal: int) -> list[int]:
    adj: dict[int, list[int]] = {v: [] for v in allowed}
    for a, b in K.edges():
        if a in allowed and b in allowed:
            adj[a].append(b)
            adj[b].append(a)
    prev = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if v == goal:
            break
        for w in sorted(adj[v]):
            if w not in prev:
                prev[w] = v
                queue.append(w)
    if goal not in prev:
        raise ValueError("element is not connected")
    path = [goal]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def pull_cycle(gamma: Chain, m: Mapper) -> Chain:
    """Lift a nerve 1-chain to the domain.

    A nerve edge {u, u'} becomes a path from the representative of u to the
    smallest shared vertex inside V_u, then on to the representative of u'
    inside V_u'.
    """
    pb, N = m.pullback, m.nerve
    K = pb.complex
    reps = [min(s) for s in pb.sets]
    # nerve vertex positions follow the label order
    pos = [pb.labels.index(lab) for lab in N.vertices]
    support: set = set()
    for a, b in gamma.support:
        u, w = pos[a], pos[b]
        meet = min(pb.sets[u] & pb.sets[w])
        path = _bfs_path(K, pb.sets[u], reps[u], meet) + _bfs_path(K, pb.sets[w], meet, reps[w])[1:]
        for x, y in zip(path, path[1:]):
            support ^= {(min(x, y), max(x, y))}
    return Chain(K, 1, frozenset(support))


def check_mesh(K: SimplicialComplex, f: DomainFunction, U: Cover) -> tuple | None:
    """First simplex (vertex ids) whose values fit in no single cover element, else None."""
    for k in range(1, K.dim_cap + 1):
        for s in K.simplices(k):
            vals = [f.values[i] for i in s]
            if not any(U.element_contains_set(a, vals) for a in range(len(U))):
                return tuple(K.vertices[i] for i in s)
    return None


def h1_pushforward_rank(m: Mapper) -> tuple[int, int]:
    """(rank of pushed domain H1 basis in H1(nerve), β1(nerve))."""
    dom = homology_basis(m.pullback.complex, 1)
    tgt = homology_basis(m.nerve, 1)
    cols = [gf2.from_indices(i for i, c in enumerate(tgt.coordinates(push_cycle(z, m))) if c) for z in dom.cycles]
    return gf2.rank(cols), tgt.betti


def pullback_lebesgue(pb: PullbackCover, d: np.ndarray, mode: str = "exact") -> float:
    """Lebesgue number of the pullback cover measured in a pseudometric on domain vertices."""
    value, _ = set_family_lebesgue(d, pb.sets, pairs_only=mode == "pairs_upper_bound")
    finite = d[np.isfinite(d)]
    return min(value, float(finite.max()) if finite.size else 0.0)
