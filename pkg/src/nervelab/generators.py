"""Class sizes and minimal H1 generator bases under a pseudometric, and the
survival classification of generators against a cover."""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from . import gf2
from .complex import Chain, SimplicialComplex, betti, homology_basis, is_null_homologous
from .covers import Cover, GuardExceeded, guard_limit, lebesgue_number, s_max
from .metrics import PseudoMetric
from .pullback import Mapper, push_cycle

BOUNDARY_RANK_GUARD = 20
EDGE_GUARD = 30


def _size_of_bits(K: SimplicialComplex, bits: int, dm: np.ndarray) -> float:
    verts = sorted({v for i in gf2.bits(bits) for v in K.simplices(1)[i]})
    if not verts:
        return 0.0
    return float(dm[np.ix_(verts, verts)].max())


def _position_matrix(K: SimplicialComplex, d: PseudoMetric) -> np.ndarray:
    idx = [d.index(v) for v in K.vertices]
    return d.matrix[np.ix_(idx, idx)]


def class_size(K: SimplicialComplex, d: PseudoMetric, z: Chain, mode: str = "exact") -> float:
    """Smallest support diameter over the class of z (exact), or a local-search upper bound (greedy)."""
    if not z.is_cycle():
        raise ValueError("class size needs a cycle")
    dm = _position_matrix(K, d)
    bounds = gf2.EchelonBasis()
    gens = [c for c in K.boundary_columns(2) if bounds.add(c)] if K.dim_cap >= 2 else []
    zb = z.to_bits()
    if mode == "exact":
        limit = guard_limit(BOUNDARY_RANK_GUARD)
        if len(gens) > limit:
            raise GuardExceeded(f"exact class size limited to boundary rank {limit}")
        best = _size_of_bits(K, zb, dm)
        for mask in range(1, 1 << len(gens)):
            v = zb ^ gf2.apply(gens, mask)
            best = min(best, _size_of_bits(K, v, dm))
        return best
    if mode != "greedy":
        raise ValueError(f"unknown mode {mode!r}")
    tri = K.boundary_columns(2) if K.dim_cap >= 2 else []
    cur = zb
    key = (_size_of_bits(K, cur, dm), bin(cur).count("1"))
    improved = True
    while improved:
        improved = False
        for t in tri:
            cand = cur ^ t
            k2 = (_size_of_bits(K, cand, dm), bin(cand).count("1"))
            if k2 < key:
                cur, key, improved = cand, k2, True
    return key[0]


@dataclass
class SizedBasis:
    cycles: list
    sizes: list
    mode: str

    def __len__(self) -> int:
        return len(self.cycles)


def _simple_cycles(K: SimplicialComplex) -> list[int]:
    limit = guard_limit(EDGE_GUARD)
    if len(K.edges()) > limit:
        raise GuardExceeded(f"exact generator basis limited to {limit} edges")
    out = []
    for cyc in nx.simple_cycles(K.graph()):
        if len(cyc) < 3:
            continue
        v = 0
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            v ^= 1 << K.index(1, (min(a, b), max(a, b)))
        out.append(v)
    return out


def _tree_cycles(K: SimplicialComplex, dm: np.ndarray) -> list[int]:
    g = K.graph()
    for a, b in g.edges:
        g[a][b]["weight"] = float(dm[a, b])
    out = set()
    for root in g.nodes:
        paths = nx.single_source_dijkstra_path(g, root, weight="weight")
        tree = set()
        for p in paths.values():
            tree.update((min(a, b), max(a, b)) for a, b in zip(p, p[1:]))
        for a, b in K.edges():
            if (a, b) in tree or a not in paths or b not in paths:
                continue
            v = 1 << K.index(1, (a, b))
            for p in (paths[a], paths[b]):
                for x, y in zip(p, p[1:]):
                    v ^= 1 << K.index(1, (min(x, y), max(x, y)))
            if v:
                out.add(v)
    return sorted(out)


def minimal_generator_basis(K: SimplicialComplex, d: PseudoMetric, mode: str = "exact") -> SizedBasis:
    """Greedy matroid selection over candidate cycles sorted by size.

    ``exact`` uses every simple cycle of the 1-skeleton (guarded by edge
    count); ``greedy`` uses fundamental cycles of shortest-path trees.
    """
    dm = _position_matrix(K, d)
    if mode == "exact":
        cands = _simple_cycles(K)
    elif mode == "greedy":
        cands = _tree_cycles(K, dm)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    target = betti(K, 1)
    basis = gf2.EchelonBasis()
    if K.dim_cap >= 2:
        for c in K.boundary_columns(2):
            basis.add(c)
    keyed = sorted(cands, key=lambda v: (_size_of_bits(K, v, dm), bin(v).count("1"), v))
    cycles, sizes = [], []
    for v in keyed:
        if len(cycles) == target:
            break
        if basis.add(v):
            cycles.append(Chain.from_bits(K, 1, v))
            sizes.append(_size_of_bits(K, v, dm))
    if len(cycles) != target:
        raise AssertionError("candidate cycles do not span H1")
    return SizedBasis(cycles, sizes, mode)


DEAD = "DEAD"
SURVIVES = "SURVIVES-INDEPENDENT"
UNDETERMINED = "UNDETERMINED"


@dataclass
class SurvivalReport:
    lebesgue: float
    s_max: float
    entries: list = field(default_factory=list)  # dicts: size, verdict, null, ok
    independent_ok: bool = True

    @property
    def ok(self) -> bool:
        return self.independent_ok and all(e["ok"] for e in self.entries)


def classify_survival(basis: SizedBasis, m: Mapper, cover: Cover | None = None) -> SurvivalReport:
    U = cover or m.pullback.cover
    lam, smax = lebesgue_number(U), s_max(U)
    N = m.nerve
    report = SurvivalReport(lam, smax)
    tgt = homology_basis(N, 1)
    survivors = []
    for z, s in zip(basis.cycles, basis.sizes):
        img = push_cycle(z, m)
        null = is_null_homologous(N, img)
        if s < lam:
            verdict, ok = DEAD, null
        elif s > 4 * smax:
            verdict, ok = SURVIVES, not null
            survivors.append(img)
        else:
            verdict, ok = UNDETERMINED, True
        report.entries.append({"size": s, "verdict": verdict, "null": null, "ok": ok})
    cols = [gf2.from_indices(i for i, c in enumerate(tgt.coordinates(g)) if c) for g in survivors]
    report.independent_ok = gf2.rank(cols) == len(survivors)
    return report
