import networkx as nx
import numpy as np
from hypothesis import given, settings, strategies as st

from nervelab.complex import Chain, build_complex, is_null_homologous
from nervelab.covers import RealInterval
from nervelab.fixtures import cylinder, fix_eight, fix_tent, random_one_complex_duplicates
from nervelab.metrics import df_metric
from nervelab.pullback import DomainFunction
from nervelab.reeb import push_to_reeb, reeb_graph, reeb_h1_check, reeb_metric


def test_eight_flat_triangle_collapses():
    E = fix_eight()
    R = reeb_graph(E.complex, E.function)
    assert R.q["a"] == R.q["b"] == R.q["c"]
    assert R.betti1() == 1
    flat = Chain.from_ids(E.complex, 1, [["a", "b"], ["b", "c"], ["c", "a"]])
    tall = Chain.from_ids(E.complex, 1, [["a", "d"], ["d", "e"], ["e", "g"], ["g", "a"]])
    assert is_null_homologous(R.complex, push_to_reeb(R, flat))
    assert not is_null_homologous(R.complex, push_to_reeb(R, tall))


def test_eight_reeb_metric():
    E = fix_eight()
    R = reeb_graph(E.complex, E.function)
    d, spread = reeb_metric(R, df_metric(E.complex, E.function))
    assert d(R.q["a"], R.q["e"]) == 2.0
    assert d(R.q["a"], R.q["a"]) == 0.0
    assert spread == 0.0


def test_monotone_path():
    K = build_complex(range(4), [[0, 1], [1, 2], [2, 3]])
    f = DomainFunction(K, RealInterval(0.0, 3.0), {i: float(i) for i in range(4)})
    R = reeb_graph(K, f)
    assert R.betti1() == 0
    d, _ = reeb_metric(R, df_metric(K, f))
    assert d(R.q[0], R.q[3]) == 3.0


def test_cylinder_is_segment():
    C = cylinder()
    R = reeb_graph(C.complex, C.function)
    assert R.betti1() == 0
    rep = reeb_h1_check(C.complex, C.function)
    assert rep.positive == 0 and rep.ok


def test_tent_reeb_is_a_cycle():
    T = fix_tent()
    R = reeb_graph(T.complex, T.function)
    assert R.betti1() == 1
    assert nx.is_isomorphic(nx.Graph(R.contracted()), nx.cycle_graph(8))
    assert reeb_h1_check(T.complex, T.function).ok


def test_eight_check():
    E = fix_eight()
    rep = reeb_h1_check(E.complex, E.function)
    assert (rep.reeb_betti1, rep.positive) == (1, 1) and rep.ok


def test_tree_trivial():
    K = build_complex(range(4), [[0, 1], [1, 2], [1, 3]])
    f = DomainFunction(K, RealInterval(0.0, 2.0), {0: 0, 1: 1, 2: 2, 3: 0})
    assert reeb_graph(K, f).betti1() == 0
    assert reeb_h1_check(K, f).ok


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_random_duplicates(seed):
    rng = np.random.default_rng(seed)
    I = random_one_complex_duplicates(rng, n=int(rng.integers(4, 11)), extra=int(rng.integers(0, 6)),
                                      levels=int(rng.integers(2, 4)))
    R = reeb_graph(I.complex, I.function)
    assert set(R.q) == set(I.complex.vertices)
    _, spread = reeb_metric(R, df_metric(I.complex, I.function))
    assert spread == 0.0
    assert reeb_h1_check(I.complex, I.function).ok
