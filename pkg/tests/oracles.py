"""Independent brute-force oracles.

Nothing here reuses the package's Z/2 linear algebra; everything is dense
numpy elimination or exhaustive enumeration.
"""

from __future__ import annotations

import math
from itertools import combinations

import networkx as nx
import numpy as np


# dense Z/2 ------------------------------------------------------------------------


def rank2(a: np.ndarray) -> int:
    """Rank over Z/2: columns packed into Python ints, xor basis keyed by lowest set bit."""
    m = np.array(a, dtype=np.uint8) & 1
    if m.size == 0:
        return 0
    packed = np.packbits(m, axis=0, bitorder="little")
    basis: dict[int, int] = {}
    for j in range(m.shape[1]):
        v = int.from_bytes(packed[:, j].tobytes(), "little")
        while v:
            low = v & -v
            if low not in basis:
                basis[low] = v
                break
            v ^= basis[low]
    return len(basis)


def kernel2(a: np.ndarray) -> np.ndarray:
    """Columns spanning the null space of a over Z/2."""
    m = (np.array(a, dtype=np.uint8) & 1).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = np.zeros(cols, dtype=np.uint8)
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = m[i, fc]
        basis.append(v)
    return np.array(basis, dtype=np.uint8).T.reshape(cols, len(basis))


# persistence by persistent Betti numbers -------------------------------------------


def brute_force_diagram(simplices, scales, k):
    """Diagram from persistent Betti numbers of the sublevel complexes.

    beta^{a,b} = dim Z_k(K_a) - dim(B_k(K_b) restricted to chains of K_a), and a
    boundary of K_b lies in K_a iff its coordinates outside K_a vanish.
    """
    simplices = [tuple(s) for s in simplices]
    grid = sorted(set(scales))
    kk = [i for i, s in enumerate(simplices) if len(s) == k + 1]
    up = [i for i, s in enumerate(simplices) if len(s) == k + 2]
    down = [i for i, s in enumerate(simplices) if len(s) == k]
    pos = {s: i for i, s in enumerate(simplices)}

    def bd(rows, cols):
        m = np.zeros((len(rows), len(cols)), dtype=np.uint8)
        ri = {r: a for a, r in enumerate(rows)}
        for b, c in enumerate(cols):
            s = simplices[c]
            for face in combinations(s, len(s) - 1):
                if pos[face] in ri:
                    m[ri[pos[face]], b] = 1
        return m

    d_k = bd(down, kk) if k > 0 else np.zeros((0, len(kk)), dtype=np.uint8)
    d_up = bd(kk, up)
    kscale = np.array([scales[i] for i in kk])
    uscale = np.array([scales[i] for i in up])

    def pbetti(a, b):
        ina = kscale <= a
        n_a = int(ina.sum())
        if n_a == 0:
            return 0
        z = n_a - rank2(d_k[:, ina])
        D = d_up[:, uscale <= b]
        inside = rank2(D) - rank2(D[~ina])
        return z - inside

    n = len(grid)
    beta = {(i, j): pbetti(grid[i], grid[j]) for i in range(n) for j in range(i, n)}

    def b(i, j):
        return beta[(i, j)] if i >= 0 else 0

    pts = []
    for i in range(n):
        for j in range(i + 1, n):
            mult = b(i, j - 1) - b(i, j) - b(i - 1, j - 1) + b(i - 1, j)
            pts += [(grid[i], grid[j])] * mult
        pts += [(grid[i], math.inf)] * (b(i, n - 1) - b(i - 1, n - 1))
    return sorted(pts)


def random_filtration(rng, n_vertices, max_simplices, dim=2):
    """Random simplicial filtration with faces first, built by random insertion."""
    cands = [c for k in range(1, dim + 2) for c in combinations(range(n_vertices), k)]
    order = rng.permutation(len(cands))
    present, simplices = set(), []
    progress = True
    while progress and len(simplices) < max_simplices:
        progress = False
        for i in order:
            s = cands[i]
            if s in present or len(simplices) >= max_simplices:
                continue
            if all(f in present for f in combinations(s, len(s) - 1)) or len(s) == 1:
                if len(s) > 1 and rng.random() < 0.35:
                    continue
                present.add(s)
                simplices.append(s)
                progress = True
    t, scales = 0.0, []
    for _ in simplices:
        t += float(rng.choice([0.0, 0.0, 0.0, 0.5, 1.0]))
        scales.append(t)
    return simplices, scales


# tower modules ------------------------------------------------------------------------


def matrix_product_diagram(bettis, mats):
    """Bars of a module given by dense step matrices, via explicit composite ranks."""
    n = len(bettis)
    r = {}
    for i in range(n):
        comp = np.eye(bettis[i], dtype=np.int64)
        r[(i, i)] = bettis[i]
        for j in range(i + 1, n):
            comp = (mats[j - 1].astype(np.int64) @ comp) % 2
            r[(i, j)] = rank2(comp)

    def R(i, j):
        return r[(i, j)] if i >= 0 else 0

    bars = []
    for i in range(n):
        for j in range(i + 1, n):
            bars += [(i, j)] * (R(i, j - 1) - R(i, j) - R(i - 1, j - 1) + R(i - 1, j))
        bars += [(i, math.inf)] * (R(i, n - 1) - R(i - 1, n - 1))
    return sorted((float(a), float(b)) for a, b in bars)


# d_f by path enumeration -----------------------------------------------------------------


def path_df(graph: nx.Graph, values: dict, spread) -> dict:
    """min over simple paths of ``spread(values on the path)``."""
    out = {}
    nodes = sorted(graph.nodes)
    for a, b in combinations(nodes, 2):
        best = math.inf
        for p in nx.all_simple_paths(graph, a, b):
            best = min(best, spread([values[v] for v in p]))
        out[(a, b)] = out[(b, a)] = best
    for a in nodes:
        out[(a, a)] = 0.0
    return out


# Lebesgue number ---------------------------------------------------------------------------


def brute_lebesgue_real(lo, hi, intervals, step=0.125):
    """Largest t on the grid such that every [a, a+t] inside [lo, hi] lies in one open interval."""
    D = hi - lo
    grid_t = np.arange(0, D + step / 2, step)
    grid_a = np.arange(lo, hi + step / 4, step / 4)
    best = 0.0
    for t in grid_t:
        ok = True
        for a in grid_a:
            b = min(a + t, hi)
            if not any(x < a and b < y for x, y in intervals):
                ok = False
                break
        if ok:
            best = float(t)
        else:
            break
    return best


def brute_lebesgue_finite(dist: np.ndarray, elements) -> float:
    """Smallest diameter of a subset contained in no element (inf if none), by full enumeration."""
    n = len(dist)
    best = math.inf
    for k in range(1, n + 1):
        for sub in combinations(range(n), k):
            s = set(sub)
            if any(s <= set(e) for e in elements):
                continue
            d = max((dist[i, j] for i in sub for j in sub), default=0.0)
            best = min(best, float(d))
    return best
