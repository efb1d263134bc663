"""Finite simplicial complexes, Z/2 chains, homology bases and simplicial maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from . import gf2


class ComplexError(ValueError):
    """Invalid complex construction or out-of-range dimension."""


class NotSimplicialError(ValueError):
    def __init__(self, witness):
        super().__init__(f"image of simplex {witness!r} is not a simplex of the target")
        self.witness = witness


class NotACycleError(ValueError):
    pass


def vertex_key(v):
    """Sort key that orders ints, strings and tuples (nerve vertices) deterministically."""
    if isinstance(v, bool):
        return (0, int(v))
    if isinstance(v, (int, float, np.integer, np.floating)):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(vertex_key(x) for x in v))
    return (3, repr(v))


class SimplicialComplex:
    """Finite abstract simplicial complex closed under faces up to ``dim_cap``.

    Vertices are kept in canonical order (``vertex_key``) and simplices are
    tuples of vertex positions, sorted lexicographically within each dimension.
    """

    def __init__(self, vertices: Sequence[Hashable], simplices: Iterable[Iterable[Hashable]], dim_cap: int = 2):
        if dim_cap < 0:
            raise ComplexError("dim_cap must be >= 0")
        vertices = list(vertices)
        if not vertices:
            raise ComplexError("no vertices")
        if len(set(vertices)) != len(vertices):
            seen, dup = set(), None
            for v in vertices:
                if v in seen:
                    dup = v
                    break
                seen.add(v)
            raise ComplexError(f"duplicate vertex id {dup!r}")
        self.vertices: tuple = tuple(sorted(vertices, key=vertex_key))
        self.vertex_index: dict = {v: i for i, v in enumerate(self.vertices)}
        self.dim_cap = dim_cap

        faces: list[set[tuple[int, ...]]] = [set() for _ in range(dim_cap + 1)]
        faces[0].update((i,) for i in range(len(self.vertices)))
        for simplex in simplices:
            try:
                idx = sorted({self.vertex_index[v] for v in simplex})
            except KeyError as exc:
                raise ComplexError(f"simplex references unknown vertex {exc.args[0]!r}") from None
            top = min(len(idx), dim_cap + 1)
            for size in range(2, top + 1):
                faces[size - 1].update(combinations(idx, size))
        self._simplices = tuple(tuple(sorted(level)) for level in faces)
        self._index = tuple({s: i for i, s in enumerate(level)} for level in self._simplices)
        self._boundary_cache: dict[int, list[int]] = {}

    def __repr__(self) -> str:
        counts = ", ".join(str(len(s)) for s in self._simplices)
        return f"SimplicialComplex(counts=[{counts}], dim_cap={self.dim_cap})"

    @property
    def dim(self) -> int:
        """Largest dimension with at least one stored simplex."""
        return max(k for k, level in enumerate(self._simplices) if level)

    def n_simplices(self, k: int) -> int:
        if k < 0 or k > self.dim_cap:
            return 0
        return len(self._simplices[k])

    def simplices(self, k: int) -> tuple[tuple[int, ...], ...]:
        if k < 0 or k > self.dim_cap:
            return ()
        return self._simplices[k]

    def simplex_ids(self, k: int) -> list[tuple]:
        return [tuple(self.vertices[i] for i in s) for s in self.simplices(k)]

    def index(self, k: int, simplex: tuple[int, ...]) -> int:
        return self._index[k][simplex]

    def to_positions(self, simplex_ids: Iterable[Hashable]) -> tuple[int, ...]:
        return tuple(sorted(self.vertex_index[v] for v in simplex_ids))

    def has_simplex(self, positions: tuple[int, ...]) -> bool:
        k = len(positions) - 1
        return 0 <= k <= self.dim_cap and positions in self._index[k]

    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.simplices(1)  # type: ignore[return-value]

    def graph(self) -> nx.Graph:
        """1-skeleton on vertex positions."""
        g = nx.Graph()
        g.add_nodes_from(range(len(self.vertices)))
        g.add_edges_from(self.edges())
        return g

    def maximal_simplices(self) -> list[tuple]:
        out = []
        for k in range(self.dim_cap, -1, -1):
            for s in self._simplices[k]:
                if not any(set(s) <= set(t) for t in out):
                    out.append(s)
        return [tuple(self.vertices[i] for i in s) for s in sorted(out)]

    def boundary_columns(self, k: int) -> list[int]:
        """Columns of the k-th boundary matrix as bitsets over (k-1)-simplices."""
        if k in self._boundary_cache:
            return self._boundary_cache[k]
        if k < 1 or k > self.dim_cap:
            cols = [0] * self.n_simplices(k)
        else:
            lower = self._index[k - 1]
            cols = []
            for s in self._simplices[k]:
                v = 0
                for i in range(len(s)):
                    v ^= 1 << lower[s[:i] + s[i + 1:]]
                cols.append(v)
        self._boundary_cache[k] = cols
        return cols


def build_complex(vertices: Sequence[Hashable], maximal_simplices: Iterable[Iterable[Hashable]],
                  dim_cap: int = 2) -> SimplicialComplex:
    return SimplicialComplex(vertices, maximal_simplices, dim_cap)


def boundary_matrix(K: SimplicialComplex, k: int) -> np.ndarray:
    if k < 1 or k > K.dim_cap:
        raise ComplexError(f"boundary dimension {k} outside 1..{K.dim_cap}")
    return gf2.to_dense(K.boundary_columns(k), K.n_simplices(k - 1))


@dataclass(frozen=True)
class Chain:
    """A Z/2 k-chain: the set of k-simplices with coefficient 1."""

    complex: SimplicialComplex = field(repr=False, compare=False)
    dim: int
    support: frozenset

    def __post_init__(self):
        index = self.complex._index[self.dim] if self.dim <= self.complex.dim_cap else {}
        for s in self.support:
            if s not in index:
                raise ComplexError(f"{s!r} is not a {self.dim}-simplex of the complex")

    @classmethod
    def from_ids(cls, K: SimplicialComplex, k: int, simplices: Iterable[Iterable[Hashable]]) -> "Chain":
        support: set = set()
        for s in simplices:
            support ^= {K.to_positions(s)}
        return cls(K, k, frozenset(support))

    @classmethod
    def from_bits(cls, K: SimplicialComplex, k: int, v: int) -> "Chain":
        level = K.simplices(k)
        return cls(K, k, frozenset(level[i] for i in gf2.bits(v)))

    @classmethod
    def zero(cls, K: SimplicialComplex, k: int) -> "Chain":
        return cls(K, k, frozenset())

    def to_bits(self) -> int:
        return gf2.from_indices(self.complex.index(self.dim, s) for s in self.support)

    def __add__(self, other: "Chain") -> "Chain":
        if other.complex is not self.complex or other.dim != self.dim:
            raise ComplexError("chains live in different groups")
        return Chain(self.complex, self.dim, self.support ^ other.support)

    def __bool__(self) -> bool:
        return bool(self.support)

    def __len__(self) -> int:
        return len(self.support)

    def boundary(self) -> "Chain":
        if self.dim == 0:
            return Chain.zero(self.complex, 0)
        return Chain.from_bits(self.complex, self.dim - 1, gf2.apply(self.complex.boundary_columns(self.dim), self.to_bits()))

    def is_cycle(self) -> bool:
        return self.dim == 0 or not self.boundary()

    def vertex_positions(self) -> set[int]:
        return {v for s in self.support for v in s}

    def vertex_ids(self) -> set:
        return {self.complex.vertices[v] for v in self.vertex_positions()}

    def simplex_ids(self) -> list[tuple]:
        return sorted((tuple(self.complex.vertices[i] for i in s) for s in self.support),
                      key=lambda t: tuple(vertex_key(x) for x in t))


@dataclass(frozen=True)
class HomologyBasis:
    """Explicit cycle representatives of a basis of H_k, with a coordinate solver."""

    dim: int
    cycles: tuple
    betti: int
    _solver: gf2.EchelonBasis = field(repr=False, compare=False, default=None)

    def coordinates(self, z: Chain) -> list[int]:
        """Coefficients of ``[z]`` in this basis; raises if ``z`` is not a cycle."""
        rest, tag = self._solver.reduce_fully(z.to_bits())
        if rest:
            raise NotACycleError("chain is not a cycle")
        return [(tag >> i) & 1 for i in range(self.betti)]


def _boundary_space(K: SimplicialComplex, k: int) -> gf2.EchelonBasis:
    basis = gf2.EchelonBasis()
    if k + 1 <= K.dim_cap:
        for col in K.boundary_columns(k + 1):
            basis.add(col)
    return basis


def homology_basis(K: SimplicialComplex, k: int) -> HomologyBasis:
    """Basis of H_k(K; Z/2).

    When ``k == K.dim_cap`` the result is the homology of the k-skeleton,
    since no (k+1)-simplices are stored.
    """
    if k < 0 or k > K.dim_cap:
        raise ComplexError(f"homology dimension {k} outside 0..{K.dim_cap}")
    cycles_bits = gf2.kernel(K.boundary_columns(k)) if k > 0 else [1 << i for i in range(K.n_simplices(0))]
    solver = _boundary_space(K, k)
    reps = []
    for z in cycles_bits:
        # coordinates are tracked in the tag; boundaries carry tag 0
        if solver.add(z, 1 << len(reps)):
            reps.append(z)
    cycles = tuple(Chain.from_bits(K, k, z) for z in reps)
    return HomologyBasis(k, cycles, len(reps), solver)


def betti(K: SimplicialComplex, k: int) -> int:
    return homology_basis(K, k).betti


def homologous(K: SimplicialComplex, z1: Chain, z2: Chain) -> bool:
    if z1.dim != z2.dim:
        raise ComplexError("cycles of different dimension")
    for z in (z1, z2):
        if not z.is_cycle():
            raise NotACycleError("input chain is not a cycle")
    return _boundary_space(K, z1.dim).contains(z1.to_bits() ^ z2.to_bits())


def is_null_homologous(K: SimplicialComplex, z: Chain) -> bool:
    return homologous(K, z, Chain.zero(K, z.dim))


def is_simplicial_map(source: SimplicialComplex, target: SimplicialComplex,
                      assignment: Mapping) -> tuple[bool, tuple | None]:
    """Check simpliciality; on failure also return a witness source simplex (vertex ids)."""
    missing = [v for v in source.vertices if v not in assignment]
    if missing:
        raise ComplexError(f"assignment not total: {missing[0]!r} unmapped")
    images = []
    for v in source.vertices:
        w = assignment[v]
        if w not in target.vertex_index:
            return False, (v,)
        images.append(target.vertex_index[w])
    for k in range(1, source.dim_cap + 1):
        for s in source.simplices(k):
            img = tuple(sorted({images[i] for i in s}))
            if not target.has_simplex(img):
                return False, tuple(source.vertices[i] for i in s)
    return True, None


class VertexMap:
    """A simplicial map given by its vertex assignment; validated on construction."""

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, assignment: Mapping):
        ok, witness = is_simplicial_map(source, target, assignment)
        if not ok:
            raise NotSimplicialError(witness)
        self.source = source
        self.target = target
        self.assignment = {v: assignment[v] for v in source.vertices}
        self._images = tuple(target.vertex_index[self.assignment[v]] for v in source.vertices)

    def __repr__(self) -> str:
        return f"VertexMap({self.assignment!r})"

    def image(self, simplex: tuple[int, ...]) -> tuple[int, ...]:
        """Image of a source simplex (positions) with duplicates collapsed."""
        return tuple(sorted({self._images[i] for i in simplex}))

    def compose(self, after: "VertexMap") -> "VertexMap":
        """``after ∘ self``."""
        if after.source is not self.target:
            raise ComplexError("maps are not composable")
        return VertexMap(self.source, after.target, {v: after.assignment[w] for v, w in self.assignment.items()})


def identity_map(K: SimplicialComplex) -> VertexMap:
    return VertexMap(K, K, {v: v for v in K.vertices})


def are_contiguous(m1: VertexMap, m2: VertexMap) -> bool:
    if m1.source is not m2.source or m1.target is not m2.target:
        raise ComplexError("contiguity needs maps with the same source and target")
    for k in range(m1.source.dim_cap + 1):
        for s in m1.source.simplices(k):
            union = tuple(sorted(set(m1.image(s)) | set(m2.image(s))))
            if not m1.target.has_simplex(union):
                return False
    return True


def chain_map_columns(m: VertexMap, k: int) -> list[int]:
    if k < 0 or k > min(m.source.dim_cap, m.target.dim_cap):
        raise ComplexError(f"chain dimension {k} out of range")
    cols = []
    for s in m.source.simplices(k):
        img = m.image(s)
        cols.append(1 << m.target.index(k, img) if len(img) == k + 1 else 0)
    return cols


def induced_chain_map(m: VertexMap, k: int) -> np.ndarray:
    """Matrix of the induced map on k-chains; degenerate images give zero columns."""
    return gf2.to_dense(chain_map_columns(m, k), m.target.n_simplices(k))


def push_chain(m: VertexMap, z: Chain) -> Chain:
    return Chain.from_bits(m.target, z.dim, gf2.apply(chain_map_columns(m, z.dim), z.to_bits()))


def induced_homology_matrix(m: VertexMap, k: int, src: HomologyBasis | None = None,
                            dst: HomologyBasis | None = None) -> list[list[int]]:
    """Matrix (rows = target basis, cols = source basis) of the induced map on H_k."""
    src = src or homology_basis(m.source, k)
    dst = dst or homology_basis(m.target, k)
    cols = [dst.coordinates(push_chain(m, z)) for z in src.cycles]
    return [[cols[j][i] for j in range(src.betti)] for i in range(dst.betti)]
