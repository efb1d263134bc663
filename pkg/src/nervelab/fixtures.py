"""Named example instances and seeded random instance generators."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np

from .complex import SimplicialComplex, build_complex
from .covers import (Cover, FiniteMetric, RealInterval, TowerOfCovers, all_balls_cover,
                     good_tower, uniform_interval_cover)
from .pullback import DomainFunction


@dataclass
class Instance:
    complex: SimplicialComplex
    function: DomainFunction
    cover: Cover | None = None
    name: str = ""


def cycle_complex(n: int, dim_cap: int = 2) -> SimplicialComplex:
    return build_complex(range(n), [[i, (i + 1) % n] for i in range(n)], dim_cap)


def fix_tent(dim_cap: int = 2) -> Instance:
    K = cycle_complex(8, dim_cap)
    Z = RealInterval(0.0, 4.0)
    f = DomainFunction(K, Z, dict(enumerate([0, 1, 2, 3, 4, 3, 2, 1])))
    return Instance(K, f, fix_cover4(Z), "tent")


def fix_cover4(Z: RealInterval | None = None) -> Cover:
    Z = Z or RealInterval(0.0, 4.0)
    return Cover(Z, ((-0.5, 1.5), (0.5, 2.5), (1.5, 3.5), (2.5, 4.5)))


def fix_tent_coarse() -> Instance:
    """Tent with a single interval covering everything; codomain widened so λ = 5."""
    K = cycle_complex(8)
    Z = RealInterval(-0.5, 4.5)
    f = DomainFunction(K, Z, dict(enumerate([0, 1, 2, 3, 4, 3, 2, 1])))
    return Instance(K, f, Cover(Z, ((-1.0, 5.0),)), "tent-coarse")


def pinch_cover(Z: FiniteMetric) -> Cover:
    arcs = [frozenset(range(12)) - {3 * i, 3 * i + 1, 3 * i + 2} for i in range(4)]
    return Cover(Z, tuple(arcs))


def fix_pinch(dim_cap: int = 3) -> Instance:
    K = cycle_complex(12, dim_cap)
    Z = FiniteMetric.cycle(12)
    f = DomainFunction(K, Z, {i: i for i in range(12)})
    return Instance(K, f, pinch_cover(Z), "pinch")


def fix_eight(dim_cap: int = 2) -> Instance:
    K = build_complex(list("abcdeg"), [["a", "b"], ["b", "c"], ["c", "a"], ["a", "d"], ["d", "e"],
                                        ["e", "g"], ["g", "a"]], dim_cap)
    Z = RealInterval(0.0, 2.0)
    f = DomainFunction(K, Z, dict(a=0, b=0, c=0, d=1, e=2, g=1))
    U = Cover(Z, ((-0.5, 1.5), (0.5, 2.5)))
    return Instance(K, f, U, "eight")


def cylinder() -> Instance:
    """Two stacked triangle strips around a 3-cycle, height function 0, 1, 2."""
    rings = [[f"{r}{i}" for i in range(3)] for r in "abc"]
    tris = []
    for lo, hi in zip(rings, rings[1:]):
        for i in range(3):
            j = (i + 1) % 3
            tris += [[lo[i], lo[j], hi[i]], [lo[j], hi[i], hi[j]]]
    K = build_complex(sum(rings, []), tris, 2)
    Z = RealInterval(0.0, 2.0)
    f = DomainFunction(K, Z, {v: float("abc".index(v[0])) for v in K.vertices})
    return Instance(K, f, Cover(Z, ((-0.75, 1.25), (0.75, 2.75))), "cylinder")


# random instances ------------------------------------------------------------------


def random_connected_graph(rng: np.random.Generator, n: int, extra: int) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for v in range(1, n):
        g.add_edge(v, int(rng.integers(0, v)))
    tries = 0
    while extra > 0 and tries < 50 * (extra + 1):
        tries += 1
        a, b = (int(x) for x in rng.integers(0, n, size=2))
        if a != b and not g.has_edge(a, b):
            g.add_edge(a, b)
            extra -= 1
    return g


def random_complex(rng: np.random.Generator, n: int, extra: int, fill: float = 0.0,
                   dim_cap: int = 2) -> SimplicialComplex:
    """Connected graph, with each of its triangles filled with probability ``fill``."""
    g = random_connected_graph(rng, n, extra)
    simplices = [list(e) for e in g.edges]
    if fill > 0:
        for c in sorted(nx.enumerate_all_cliques(g)):
            if len(c) == 3 and rng.random() < fill:
                simplices.append(c)
    return build_complex(range(n), simplices, dim_cap)


def two_root_values(K: SimplicialComplex, rng: np.random.Generator) -> dict:
    """Half the sum of hop distances to two random roots: adjacent values differ by at most 1."""
    g = K.graph()
    a, b = (int(x) for x in rng.integers(0, len(K.vertices), size=2))
    da = nx.single_source_shortest_path_length(g, a)
    db = nx.single_source_shortest_path_length(g, b)
    return {K.vertices[v]: (da[v] + db[v]) / 2 for v in g.nodes}


def random_real_instance(rng: np.random.Generator, n: int = 12, extra: int = 4, fill: float = 0.0,
                         dim_cap: int = 2, length: float | None = None, shift: float | None = None) -> Instance:
    """Random 2-complex with a half-integer PL function and a uniform interval cover.

    Lengths and shifts are dyadic with overlap above 1, so every simplex has its
    values inside one cover element and all arithmetic is exact.
    """
    K = random_complex(rng, n, extra, fill, dim_cap)
    vals = two_root_values(K, rng)
    lo, hi = min(vals.values()), max(vals.values())
    Z = RealInterval(lo, hi)
    f = DomainFunction(K, Z, vals)
    if length is None:
        length = float(rng.choice([1.5, 2.0, 2.5, 3.0, 4.0]))
    if shift is None:
        options = [h for h in (0.25, 0.5, 0.75, 1.0, 1.5, 2.0) if length - h > 1 and h <= length / 2]
        shift = float(rng.choice(options))
    return Instance(K, f, uniform_interval_cover(Z, length, shift), "random-real")


def random_ball_instance(rng: np.random.Generator, n: int = 12, extra: int = 4, fill: float = 0.0,
                         m: int = 8, radius: float | None = None, dim_cap: int = 2) -> Instance:
    """Graph mapped into the m-cycle metric by hop distance mod m, with all closed balls of radius >= 1."""
    K = random_complex(rng, n, extra, fill, dim_cap)
    root = int(rng.integers(0, n))
    hops = nx.single_source_shortest_path_length(K.graph(), root)
    Z = FiniteMetric.cycle(m)
    f = DomainFunction(K, Z, {K.vertices[v]: hops[v] % m for v in hops})
    r = float(rng.choice([1.0, 2.0])) if radius is None else radius
    return Instance(K, f, all_balls_cover(Z, r), "random-ball")


def interval_tower(Z: RealInterval, length: float, n_scales: int) -> TowerOfCovers:
    """Uniform interval covers of lengths length·2^i, shift half the length."""
    scales = [length * 2 ** i for i in range(n_scales)]
    return TowerOfCovers(scales, [uniform_interval_cover(Z, L) for L in scales])


def ball_tower_for(Z: FiniteMetric, s: float = 2.0) -> TowerOfCovers:
    """(2, s)-good ball tower long enough that its last balls cover everything."""
    n = 1
    while s * 2 ** (n - 1) / 2 < Z.diameter:
        n += 1
    return good_tower(Z, 2, s, n)


def random_one_complex_duplicates(rng: np.random.Generator, n: int = 10, extra: int = 4,
                                  levels: int = 3) -> Instance:
    """Graph with integer values drawn from few levels, so flat edges and shared values are common."""
    K = random_complex(rng, n, extra, 0.0, 2)
    vals = {v: float(rng.integers(0, levels)) for v in K.vertices}
    Z = RealInterval(0.0, float(levels - 1))
    return Instance(K, DomainFunction(K, Z, vals), None, "random-dup")


def random_ring_instance(rng: np.random.Generator, height: int = 8, pendants: int = 4, chords: int = 3,
                         length: float = 1.25, shift: float = 0.25, rings: int = 1) -> Instance:
    """Tent-valued cycles of 2·height vertices glued at vertex 0, plus pendant vertices and short chords.

    Each ring carries one large generator; chords between vertices whose values
    differ by at most 1 add small ones.
    """
    n = 2 * height
    vals = {0: 0.0}
    edges = []
    for r in range(rings):
        ids = [0] + [r * (n - 1) + i for i in range(1, n)]
        for i in range(1, n):
            vals[ids[i]] = float(min(i, n - i))
        edges += [(ids[i], ids[(i + 1) % n]) for i in range(n)]
    base = len(vals)
    for p in range(pendants):
        v = base + p
        u = int(rng.integers(0, v))
        vals[v] = vals[u] + float(rng.choice([-1.0, -0.5, 0.0, 0.5, 1.0]))
        edges.append((u, v))
    have = {frozenset(e) for e in edges}
    tries = 0
    while chords > 0 and tries < 200:
        tries += 1
        a, b = (int(x) for x in rng.integers(0, len(vals), size=2))
        if a != b and frozenset((a, b)) not in have and abs(vals[a] - vals[b]) <= 1:
            edges.append((a, b))
            have.add(frozenset((a, b)))
            chords -= 1
    K = build_complex(range(len(vals)), [list(e) for e in edges], 2)
    Z = RealInterval(min(vals.values()), max(vals.values()))
    return Instance(K, DomainFunction(K, Z, vals), uniform_interval_cover(Z, length, shift), "random-ring")


def random_wrap_instance(rng: np.random.Generator, m: int = 12, pendants: int = 3, chords: int = 2,
                         radius: float = 1.0) -> Instance:
    """An m-cycle mapped onto the m-cycle metric, with pendants and chords of value distance <= 1."""
    Z = FiniteMetric.cycle(m)
    vals = {i: i for i in range(m)}
    edges = [(i, (i + 1) % m) for i in range(m)]
    for p in range(pendants):
        v = m + p
        u = int(rng.integers(0, v))
        vals[v] = (vals[u] + int(rng.integers(-1, 2))) % m
        edges.append((u, v))
    have = {frozenset(e) for e in edges}
    tries = 0
    while chords > 0 and tries < 200:
        tries += 1
        a, b = (int(x) for x in rng.integers(0, len(vals), size=2))
        if a != b and frozenset((a, b)) not in have and Z.distance(vals[a], vals[b]) <= 1:
            edges.append((a, b))
            have.add(frozenset((a, b)))
            chords -= 1
    K = build_complex(range(len(vals)), [list(e) for e in edges], 2)
    return Instance(K, DomainFunction(K, Z, vals), all_balls_cover(Z, radius), "random-wrap")
