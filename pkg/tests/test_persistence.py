import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nervelab import gf2
from nervelab.covers import FiniteMetric
from nervelab.fixtures import fix_tent
from nervelab.metrics import PseudoMetric, df_metric
from nervelab.persistence import (Filtration, NonFunctorialError, PersistenceDiagram, TowerModule,
                                  approx_diagram_from_basis, bottleneck_distance, cech_filtration, log_scale,
                                  module_from_steps, persistence_diagram, restrict_to_resolution, tower_diagram)

from oracles import brute_force_diagram, matrix_product_diagram, random_filtration


def test_cycle12_cech_bar():
    F = cech_filtration(FiniteMetric.cycle(12), 2)
    assert persistence_diagram(F, 1).points == ((1.0, 3.0),)
    assert persistence_diagram(F, 0).essential() == [(0.0, math.inf)]


def test_single_point():
    F = cech_filtration(PseudoMetric(("p",), np.zeros((1, 1))), 2)
    assert F.simplices == (("p",),) and F.scales == (0.0,)
    assert persistence_diagram(F, 0).points == ((0.0, math.inf),)
    assert persistence_diagram(F, 1).points == ()


def test_tent_df_cech_bar():
    I = fix_tent()
    F = cech_filtration(df_metric(I.complex, I.function), 2)
    assert persistence_diagram(F, 1).points == ((1.0, 2.0),)


def test_filtration_rejects_late_face():
    with pytest.raises(ValueError):
        Filtration((0, 1), ((0,), (0, 1), (1,)), (0.0, 1.0, 1.0))


def test_grid_scales_round_up():
    F = cech_filtration(FiniteMetric.cycle(6), 1, scales=[0.0, 2.0])
    assert set(F.scales) <= {0.0, 2.0}


def test_constant_tower():
    ident = [0b01, 0b10]
    D = tower_diagram(module_from_steps([2, 2, 2], [ident, ident]))
    assert D.points == ((0.0, math.inf), (0.0, math.inf))


def test_surjection_then_iso():
    D = tower_diagram(module_from_steps([2, 1, 1], [[0b1, 0b1], [0b1]]))
    assert D.points == ((0.0, 1.0), (0.0, math.inf))


def test_scales_attached():
    D = tower_diagram(module_from_steps([1, 1, 0], [[0b1], [0]], scales=(2.0, 4.0, 8.0)))
    assert D.to_scales().points == ((2.0, 8.0),)


def test_non_functorial_rank_table():
    bad = TowerModule(1, [1, 1], [[0b1]], {(0, 0): 1, (1, 1): 0, (0, 1): 1}, (0, 1))
    with pytest.raises(NonFunctorialError):
        tower_diagram(bad)


@pytest.mark.parametrize("a,b,expected", [
    ([(0, 4)], [(0, 4)], 0.0),
    ([(0, 4)], [(0, 3)], 1.0),
    ([(0, 4)], [], 2.0),
    ([(0, math.inf)], [(1, math.inf)], 1.0),
    ([(0, math.inf)], [], math.inf),
])
def test_bottleneck_examples(a, b, expected):
    assert bottleneck_distance(PersistenceDiagram(1, a), PersistenceDiagram(1, b)) == expected


def test_log_scale_rules():
    assert log_scale(PersistenceDiagram(1, [(1.0, math.e)])).points == ((0.0, 1.0),)
    (b, d), = log_scale(PersistenceDiagram(1, [(2.0, 8.0)])).points
    assert d - b == pytest.approx(math.log(4))
    D = restrict_to_resolution(PersistenceDiagram(1, [(0.0, 5.0), (0.0, 1.0)]), 2.0)
    assert D.points == ((2.0, 5.0),)
    assert log_scale(PersistenceDiagram(1, [(0.0, 5.0)]), resolution=2.0).points == ((math.log(2), math.log(5)),)
    with pytest.raises(ValueError):
        log_scale(PersistenceDiagram(1, [(0.0, 5.0)]))


def test_approx_diagram():
    assert approx_diagram_from_basis([4]).points == ((0.0, 4.0),)
    assert approx_diagram_from_basis([0, 2]).points == ((0.0, 2.0),)
    assert approx_diagram_from_basis([]).points == ()


# oracles ------------------------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_reduction_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    S, sc = random_filtration(rng, int(rng.integers(3, 8)), int(rng.integers(5, 60)))
    F = Filtration(tuple(range(8)), tuple(S), tuple(sc))
    for k in (0, 1, 2):
        assert list(persistence_diagram(F, k).points) == brute_force_diagram(S, sc, k)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_tower_matches_matrix_products(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    bettis = [int(x) for x in rng.integers(0, 4, size=n)]
    mats = [rng.integers(0, 2, size=(bettis[i + 1], bettis[i])) for i in range(n - 1)]
    steps = [[gf2.from_indices(np.nonzero(M[:, j])[0]) for j in range(M.shape[1])] for M in mats]
    assert list(tower_diagram(module_from_steps(bettis, steps)).points) == matrix_product_diagram(bettis, mats)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(1, 6)), max_size=5),
       st.lists(st.tuples(st.integers(0, 6), st.integers(1, 6)), max_size=5))
def test_bottleneck_is_symmetric_and_bounded(p, q):
    A = PersistenceDiagram(1, [(b, b + l) for b, l in p])
    B = PersistenceDiagram(1, [(b, b + l) for b, l in q])
    d = bottleneck_distance(A, B)
    assert d == bottleneck_distance(B, A)
    # matching everything to the diagonal is always allowed
    assert d <= max([l / 2 for _, l in p + q], default=0.0)
    assert bottleneck_distance(A, A) == 0.0
