"""Reeb graphs of PL real functions on complexes of dimension at most 2.

The graph is stored subdivided: one node per component of each critical
level f = c (vertex values) and one node per component of each open slab
between consecutive values.  Slab nodes have exactly one neighbour below and
one above, so the result is a simple graph and a ``SimplicialComplex``.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

from . import gf2
from .complex import Chain, SimplicialComplex, homology_basis, is_null_homologous, vertex_key
from .generators import SizedBasis, minimal_generator_basis
from .metrics import PseudoMetric, df_metric
from .pullback import DomainFunction


class _UF:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self):
        out: dict = {}
        for x in sorted(self.parent):
            out.setdefault(self.find(x), []).append(x)
        return sorted(out.values())


@dataclass(frozen=True, eq=False)
class ReebGraph:
    complex: SimplicialComplex  # subdivided graph on node ids
    values: dict  # node id -> f-value (slab nodes carry the slab midpoint)
    absorbed: dict  # level node id -> domain vertex ids
    q: dict  # domain vertex id -> level node id
    edge_paths: dict  # domain edge (position pair) -> node path

    def betti1(self) -> int:
        return homology_basis(self.complex, 1).betti

    def vertex_nodes(self) -> list:
        return [n for n in self.complex.vertices if self.absorbed.get(n)]

    def contracted(self) -> nx.MultiGraph:
        """Multigraph with vertex-free degree-2 nodes suppressed."""
        g = nx.MultiGraph()
        g.add_nodes_from(self.complex.vertices)
        g.add_edges_from(self.complex.simplex_ids(1))
        for n in list(g.nodes):
            if self.absorbed.get(n) or g.degree(n) != 2:
                continue
            nbrs = [v for _, v in g.edges(n)]
            if n in nbrs:
                continue
            g.remove_node(n)
            g.add_edge(nbrs[0], nbrs[1])
        return g


def reeb_graph(K: SimplicialComplex, f: DomainFunction) -> ReebGraph:
    if K.dim > 2:
        raise ValueError("Reeb graphs are built for complexes of dimension at most 2")
    if not f.is_real:
        raise ValueError("Reeb graphs need a real-valued function")
    vals = np.asarray(f.values, dtype=float)
    levels = sorted(set(vals.tolist()))
    edges = K.edges()
    tris = K.simplices(2)

    level_of: list[dict] = []  # per level: item -> node id
    nodes_val, absorbed = {}, {}
    for k, c in enumerate(levels):
        items = [("v", i) for i in range(len(vals)) if vals[i] == c]
        items += [("e", j) for j, (a, b) in enumerate(edges) if min(vals[a], vals[b]) < c < max(vals[a], vals[b])]
        uf = _UF(items)
        for a, b in edges:
            if vals[a] == c and vals[b] == c:
                uf.union(("v", a), ("v", b))
        for t in tris:
            here = [("v", i) for i in t if vals[i] == c]
            for x, y in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
                j = K.index(1, (x, y))
                if ("e", j) in uf.parent:
                    here.append(("e", j))
            for x in here[1:]:
                uf.union(here[0], x)
        mapping = {}
        for i, grp in enumerate(uf.groups()):
            nid = ("L", k, i)
            nodes_val[nid] = c
            absorbed[nid] = sorted((K.vertices[x] for kind, x in grp if kind == "v"), key=vertex_key)
            for it in grp:
                mapping[it] = nid
        level_of.append(mapping)

    def level_node(k: int, j: int) -> tuple:
        """Level-k node met by edge j (through an endpoint or a crossing point)."""
        a, b = edges[j]
        c = levels[k]
        for x in (a, b):
            if vals[x] == c:
                return level_of[k][("v", x)]
        return level_of[k][("e", j)]

    graph_edges = []
    slab_of: list[dict] = []
    for k in range(len(levels) - 1):
        lo, hi = levels[k], levels[k + 1]
        items = [j for j, (a, b) in enumerate(edges) if min(vals[a], vals[b]) <= lo and max(vals[a], vals[b]) >= hi]
        uf = _UF(items)
        for t in tris:
            here = [K.index(1, p) for p in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2]))]
            here = [j for j in here if j in uf.parent]
            for j in here[1:]:
                uf.union(here[0], j)
        mapping = {}
        for i, grp in enumerate(uf.groups()):
            nid = ("M", k, i)
            nodes_val[nid] = (lo + hi) / 2
            absorbed[nid] = []
            for j in grp:
                mapping[j] = nid
            graph_edges.append((nid, level_node(k, grp[0])))
            graph_edges.append((nid, level_node(k + 1, grp[0])))
        slab_of.append(mapping)

    R = SimplicialComplex(list(nodes_val), graph_edges, 1)
    q = {K.vertices[i]: level_of[levels.index(vals[i])][("v", i)] for i in range(len(vals))}
    paths = {}
    for j, (a, b) in enumerate(edges):
        if vals[a] > vals[b]:
            a, b = b, a
        ka, kb = levels.index(vals[a]), levels.index(vals[b])
        path = [q[K.vertices[a]]]
        for k in range(ka, kb):
            path.append(slab_of[k][j])
            path.append(level_node(k + 1, j))
        paths[edges[j]] = path
    return ReebGraph(R, nodes_val, absorbed, q, paths)


def push_to_reeb(R: ReebGraph, z: Chain) -> Chain:
    """Image of a domain 1-chain under the quotient map."""
    support: set = set()
    for e in z.support:
        path = R.edge_paths[e]
        for x, y in zip(path, path[1:]):
            if x != y:
                support ^= {R.complex.to_positions((x, y))}
    return Chain(R.complex, 1, frozenset(support))


def reeb_metric(R: ReebGraph, df: PseudoMetric, tol: float = 1e-9) -> tuple[PseudoMetric, float]:
    """d_f descended to vertex-bearing nodes, plus the largest discrepancy over representative choices."""
    nodes = R.vertex_nodes()
    reps = [R.absorbed[n] for n in nodes]
    M = np.zeros((len(nodes), len(nodes)))
    spread = 0.0
    for i, ri in enumerate(reps):
        ii = [df.index(v) for v in ri]
        for j, rj in enumerate(reps):
            jj = [df.index(v) for v in rj]
            block = df.matrix[np.ix_(ii, jj)]
            M[i, j] = block[0, 0]
            spread = max(spread, float(block.max() - block.min()))
    return PseudoMetric(tuple(nodes), M), spread


@dataclass
class ReebReport:
    reeb_betti1: int
    positive: int
    zero_sizes_null: bool
    positive_rank: int

    @property
    def ok(self) -> bool:
        return (self.zero_sizes_null and self.reeb_betti1 == self.positive
                and self.positive_rank == self.positive)


def reeb_h1_check(K: SimplicialComplex, f: DomainFunction, basis: SizedBasis | None = None) -> ReebReport:
    R = reeb_graph(K, f)
    if basis is None:
        basis = minimal_generator_basis(K, df_metric(K, f), "exact")
    tgt = homology_basis(R.complex, 1)
    null_ok = True
    cols = []
    for z, s in zip(basis.cycles, basis.sizes):
        img = push_to_reeb(R, z)
        if s == 0:
            null_ok &= is_null_homologous(R.complex, img)
        else:
            cols.append(gf2.from_indices(i for i, c in enumerate(tgt.coordinates(img)) if c))
    positive = sum(1 for s in basis.sizes if s > 0)
    return ReebReport(tgt.betti, positive, null_ok, gf2.rank(cols))
