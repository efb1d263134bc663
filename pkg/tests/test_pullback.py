import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nervelab.complex import Chain, betti, homologous, is_null_homologous, VertexMap, are_contiguous
from nervelab.covers import Cover, CoverError, RealInterval, TowerOfCovers, good_tower, uniform_interval_cover
from nervelab.fixtures import (cycle_complex, fix_eight, fix_pinch, fix_tent, fix_tent_coarse, random_ball_instance,
                               random_real_instance)
from nervelab.persistence import tower_diagram, tower_module
from nervelab.pullback import (DomainFunction, EdgeNotCovered, check_mesh, h1_pushforward_rank, mapper,
                               multiscale_mapper, nerve_of_sets, pull_cycle, pullback_cover, pullback_lebesgue,
                               push_cycle, representatives, vertex_projection)
from nervelab.covers import lebesgue_number


def tent_cycle(K):
    return Chain.from_ids(K, 1, [[i, (i + 1) % 8] for i in range(8)])


def test_tent_pullback_elements():
    I = fix_tent()
    pb = pullback_cover(I.complex, I.function, I.cover)
    got = {lab: set(pb.element_vertices(k)) for k, lab in enumerate(pb.labels)}
    assert got == {(0, 0): {7, 0, 1}, (1, 0): {1, 2}, (1, 1): {6, 7}, (2, 0): {2, 3}, (2, 1): {5, 6},
                   (3, 0): {3, 4, 5}}


def test_tent_nerve_is_hexagon():
    I = fix_tent()
    m = mapper(I.complex, I.function, I.cover)
    N = m.nerve
    assert len(N.vertices) == 6 and len(N.edges()) == 6 and N.n_simplices(2) == 0
    assert betti(N, 1) == 1 == betti(I.complex, 1)
    assert h1_pushforward_rank(m) == (1, 1)


def test_pinch_nerve_is_tetrahedron_boundary():
    I = fix_pinch()
    m = mapper(I.complex, I.function, I.cover, dim_cap=3)
    N = m.nerve
    assert [N.n_simplices(k) for k in range(4)] == [4, 6, 4, 0]
    assert (betti(N, 1), betti(N, 2)) == (0, 1)
    assert betti(I.complex, 2) == 0


def test_coarse_cover_gives_point():
    I = fix_tent_coarse()
    m = mapper(I.complex, I.function, I.cover)
    assert len(m.nerve.vertices) == 1 and betti(m.nerve, 1) == 0
    assert lebesgue_number(I.cover) == 5.0
    assert is_null_homologous(m.nerve, push_cycle(tent_cycle(I.complex), m))


def test_projection_minimal_index():
    I = fix_tent()
    pb = pullback_cover(I.complex, I.function, I.cover)
    assert vertex_projection(pb)[1] == (0, 0)
    reps = representatives(pb)
    assert all(vertex_projection(pb)[v] == lab or lab in [pb.labels[k] for k in pb.containing(I.complex.vertex_index[v])]
               for lab, v in reps.items())


def test_push_full_tent_cycle_generates():
    I = fix_tent()
    m = mapper(I.complex, I.function, I.cover)
    img = push_cycle(tent_cycle(I.complex), m)
    assert img.is_cycle() and len(img) == 6
    assert not is_null_homologous(m.nerve, img)


def test_eight_flat_loop_dies():
    I = fix_eight()
    m = mapper(I.complex, I.function, I.cover)
    flat = Chain.from_ids(I.complex, 1, [["a", "b"], ["b", "c"], ["c", "a"]])
    assert is_null_homologous(m.nerve, push_cycle(flat, m))
    # the two-interval nerve is a single edge, so the big loop dies as well
    assert betti(m.nerve, 1) == 0


def test_pull_back_is_homologous_to_generator():
    I = fix_tent()
    m = mapper(I.complex, I.function, I.cover)
    gamma = push_cycle(tent_cycle(I.complex), m)
    z = pull_cycle(gamma, m)
    assert z.is_cycle()
    assert homologous(I.complex, z, tent_cycle(I.complex))


def test_antipodal_maps_not_contiguous():
    I = fix_tent()
    N = mapper(I.complex, I.function, I.cover).nerve
    order = [(0, 0), (1, 0), (2, 0), (3, 0), (2, 1), (1, 1)]
    ident = VertexMap(N, N, {v: v for v in order})
    anti = VertexMap(N, N, {order[i]: order[(i + 3) % 6] for i in range(6)})
    assert not are_contiguous(ident, anti)


def test_edge_not_covered_raises():
    K = cycle_complex(4)
    Z = RealInterval(0.0, 3.0)
    f = DomainFunction(K, Z, {0: 0, 1: 3, 2: 0, 3: 3})
    U = Cover(Z, ((-1.0, 2.0), (1.0, 4.0)))
    assert check_mesh(K, f, U) is not None
    m = mapper(K, f, U)
    with pytest.raises(EdgeNotCovered):
        push_cycle(Chain.from_ids(K, 1, [[0, 1], [1, 2], [2, 3], [3, 0]]), m)


def test_codomain_mismatch():
    I = fix_tent()
    other = Cover(RealInterval(0.0, 5.0), ((-1.0, 6.0),))
    with pytest.raises(CoverError):
        pullback_cover(I.complex, I.function, other)


def test_tent_three_scale_tower():
    I = fix_tent()
    Z = I.function.codomain
    covers = [uniform_interval_cover(Z, L, L / 2) for L in (2.0, 4.0, 8.0)]
    mm = multiscale_mapper(I.complex, I.function, TowerOfCovers([2.0, 4.0, 8.0], covers), 2)
    # open intervals of half-length 1 cannot hold an edge with values 0 and 1
    assert check_mesh(I.complex, I.function, covers[0]) is not None
    assert [betti(C, 1) for C in mm.complexes] == [0, 1, 0]
    assert check_mesh(I.complex, I.function, covers[1]) is None


def test_pinch_good_tower_births_at_zero():
    I = fix_pinch(dim_cap=2)
    T = good_tower(I.function.codomain, 2, 2.0, 3)
    mm = multiscale_mapper(I.complex, I.function, T, 2)
    D = tower_diagram(tower_module(mm))
    assert len(D) >= 1 and all(b == 0 for b, _ in D.points)


def test_nerve_of_sets_triple():
    N = nerve_of_sets(["A", "B", "C"], [frozenset({1, 2}), frozenset({2, 3}), frozenset({1, 2, 3})])
    assert N.has_simplex(N.to_positions(["A", "B", "C"]))


def test_pullback_lebesgue_at_least_cover_lebesgue():
    from nervelab.metrics import df_metric
    I = fix_tent()
    pb = pullback_cover(I.complex, I.function, I.cover)
    d = df_metric(I.complex, I.function).matrix
    assert pullback_lebesgue(pb, d) == 2.0
    assert pullback_lebesgue(pb, d) >= lebesgue_number(I.cover)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.booleans())
def test_random_surjectivity_and_roundtrip(seed, real):
    rng = np.random.default_rng(seed)
    if real:
        I = random_real_instance(rng, n=int(rng.integers(5, 14)), extra=int(rng.integers(0, 6)),
                                 fill=float(rng.choice([0.0, 0.5])))
    else:
        I = random_ball_instance(rng, n=int(rng.integers(5, 14)), extra=int(rng.integers(0, 6)),
                                 m=int(rng.integers(5, 12)))
    assert check_mesh(I.complex, I.function, I.cover) is None
    m = mapper(I.complex, I.function, I.cover, 2)
    rank, b1 = h1_pushforward_rank(m)
    assert rank == b1
    from nervelab.complex import homology_basis
    for gamma in homology_basis(m.nerve, 1).cycles:
        z = pull_cycle(gamma, m)
        assert homologous(m.nerve, push_cycle(z, m), gamma)
