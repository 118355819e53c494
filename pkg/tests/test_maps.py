import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gridembed.graph import FiniteGraph, generate_graph
from gridembed.grid import Box, linf_distance
from gridembed.maps import (
    LatticeMap,
    LipschitzViolation,
    check_distance_lower_bound,
    extend_lipschitz,
    extension_argmins,
    fold_array,
    fold_map,
    is_k_lipschitz,
    is_r_locally_injective,
    is_valid_embedding,
)
from gridembed.serialize import map_from_json, map_to_json

from conftest import bfs, square_walk


def identity_map(G):
    return LatticeMap.total(G, np.array(G.coords))


def brute_extension(G, f):
    """min_a f(a) + dist(u, a), coordinate-wise; zero off the components of A."""
    out = {}
    for u in G.vertices:
        d = bfs(G, u)
        reach = [a for a in f.domain if a in d]
        if not reach:
            out[u] = (0,) * f.k
        else:
            out[u] = tuple(min(f[a][i] + d[a] for a in reach) for i in range(f.k))
    return out


# -- fold ----------------------------------------------------------------------


def test_square_walk_oracle_matches_listed_vertices():
    assert square_walk(2) == [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1)]


@pytest.mark.parametrize(
    "d, R, p, expected",
    [(1, 2, (0,), (0, 0)), (1, 2, (3,), (2, 1)), (1, 2, (-1,), (0, 1)), (2, 2, (3, -1), (2, 1, 0, 1))],
)
def test_fold_examples(d, R, p, expected):
    assert fold_map(d, R, p) == expected


@pytest.mark.parametrize("R", [1, 2, 3, 7])
def test_fold_matches_walk(R):
    walk = square_walk(R)
    for k in range(-12 * R, 12 * R):
        assert fold_map(1, R, (k,)) == walk[k % (4 * R)]


def test_fold_rejects_bad_input():
    with pytest.raises(ValueError):
        fold_map(2, 2, (1,))
    with pytest.raises(ValueError):
        fold_array(np.zeros((1, 1)), 0)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.lists(st.integers(-100, 100), min_size=1, max_size=3), st.data())
def test_fold_properties(R, p, data):
    d = len(p)
    q = data.draw(st.lists(st.integers(-100, 100), min_size=d, max_size=d))
    fp, fq = fold_map(d, R, p), fold_map(d, R, q)
    assert all(0 <= c <= R for c in fp)
    assert linf_distance(fp, fq) <= linf_distance(p, q)
    if p != q and linf_distance(p, q) <= 4 * R - 1:
        assert fp != fq
    axis = data.draw(st.integers(0, d - 1))
    shifted = list(p)
    shifted[axis] += 4 * R * data.draw(st.integers(-3, 3))
    assert fold_map(d, R, shifted) == fp


def test_fold_collision_beyond_window():
    # 0 and 4R fold together; that pair is at distance 4R, outside the injectivity radius.
    assert fold_map(1, 2, (0,)) == fold_map(1, 2, (8,))


# -- verifiers -------------------------------------------------------------------


def test_lipschitz_examples():
    G = generate_graph("chunk", "0..4x0..3")
    assert is_k_lipschitz(identity_map(G), 1)
    P = generate_graph("path", 2)
    v = is_k_lipschitz(LatticeMap.total(P, [[0], [5]]), 1)
    assert not v and v.witness == (0, 1)
    assert is_k_lipschitz(LatticeMap.total(P, [[0], [5]]), 5)


def test_lipschitz_ignores_cross_component_pairs(two_edges):
    m = LatticeMap.total(two_edges, [[0], [1], [100], [101]])
    assert is_k_lipschitz(m, 1)


def test_lipschitz_witness_is_lexicographically_least():
    P = generate_graph("path", 4)
    m = LatticeMap.total(P, [[0], [1], [2], [9]])
    assert is_k_lipschitz(m, 1).witness == (0, 3)


def test_partial_map_uses_graph_distance():
    P = generate_graph("path", 5)
    f = LatticeMap.from_dict(P, {0: (0,), 4: (4,)})
    assert is_k_lipschitz(f, 1)
    g = LatticeMap.from_dict(P, {0: (0,), 4: (5,)})
    assert is_k_lipschitz(g, 1).witness == (0, 4)


def test_local_injectivity_examples():
    P = generate_graph("chunk", "0..8")
    assert is_r_locally_injective(identity_map(P), 3)
    folded = LatticeMap.total(P, fold_array(np.array(P.coords), 2))
    assert is_r_locally_injective(folded, 2)
    assert is_r_locally_injective(folded, 7)
    assert folded[0] == folded[8]
    assert not is_r_locally_injective(folded, 8)
    edge = generate_graph("path", 2)
    v = is_r_locally_injective(LatticeMap.total(edge, [[3], [3]]), 1)
    assert not v and v.witness == (0, 1)


def test_embedding_examples():
    C4 = generate_graph("cycle", 4)
    assert is_valid_embedding(C4, LatticeMap.total(C4, [[0, 0], [1, 0], [1, 1], [0, 1]]))
    P2 = generate_graph("path", 2)
    assert is_valid_embedding(P2, LatticeMap.total(P2, [[0], [0]])).reason == "not injective"
    assert is_valid_embedding(P2, LatticeMap.total(P2, [[0], [2]])).reason.startswith("edge")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.floats(0.4, 1.0), st.integers(1, 6))
def test_embedding_implies_lipschitz_and_local_injectivity(seed, p, R):
    G = generate_graph("random_induced", "0..5x0..5", p, seed=seed)
    if G.n == 0:
        return
    m = identity_map(G)
    assert is_valid_embedding(G, m)
    assert is_k_lipschitz(m, 1)
    assert is_r_locally_injective(m, R)


def test_lower_bound_examples(two_edges):
    P = generate_graph("chunk", "0..20")
    assert check_distance_lower_bound(P, identity_map(P), 0.5, 4)
    const = LatticeMap.total(P, np.zeros((P.n, 1)))
    v = check_distance_lower_bound(P, const, 0.5, 4)
    assert not v and v.witness == (0, 4)
    same = LatticeMap.total(two_edges, [[0], [1], [0], [1]], tags=[0, 0, 1, 1])
    assert check_distance_lower_bound(two_edges, same, 0.5, 4)
    clash = LatticeMap.total(two_edges, [[0], [1], [0], [1]], tags=[0, 0, 0, 0])
    assert check_distance_lower_bound(two_edges, clash, 0.5, 4).witness == (0, 2)
    with pytest.raises(ValueError):
        check_distance_lower_bound(two_edges, LatticeMap.total(two_edges, np.zeros((4, 1))), 0.5, 4)


def test_lower_bound_guard_accepts_exact_powers():
    # dist 9 with eps 0.5 needs displacement 3 exactly; float pow must not reject it.
    P = generate_graph("path", 10)
    m = LatticeMap.total(P, [[min(v, 3)] for v in range(10)])
    assert check_distance_lower_bound(P, m, 0.5, 9)
    m = LatticeMap.total(P, [[min(v, 2)] for v in range(10)])
    assert not check_distance_lower_bound(P, m, 0.5, 9)


# -- extension -------------------------------------------------------------------


def test_extension_path_example():
    P = generate_graph("path", 4)
    f = LatticeMap.from_dict(P, {0: (2,), 3: (0,)})
    out = extend_lipschitz(P, [0, 3], f)
    assert [out[v] for v in range(4)] == [(2,), (2,), (1,), (0,)]


def test_extension_of_total_map_is_identity():
    G = generate_graph("chunk", "0..3x0..3")
    m = identity_map(G)
    assert extend_lipschitz(G, G.vertices, m).same_values(m)


def test_extension_zero_off_components():
    G = FiniteGraph(3, [(0, 1)])
    f = LatticeMap.from_dict(G, {0: (4, -2), 1: (5, -1)})
    out = extend_lipschitz(G, [0, 1], f)
    assert out[2] == (0, 0)


def test_extension_empty_domain():
    G = generate_graph("path", 3)
    f = LatticeMap(G, (), np.zeros((0, 2)))
    assert extend_lipschitz(G, [], f).as_dict() == {0: (0, 0), 1: (0, 0), 2: (0, 0)}


def test_extension_rejects_non_lipschitz_input():
    P = generate_graph("path", 4)
    f = LatticeMap.from_dict(P, {0: (0,), 2: (5,)})
    with pytest.raises(LipschitzViolation) as err:
        extend_lipschitz(P, [0, 2], f)
    assert err.value.witness == (0, 2)


@st.composite
def lipschitz_instances(draw):
    seed = draw(st.integers(0, 2**32))
    G = generate_graph("random_induced", "0..6x0..6", draw(st.floats(0.4, 1.0)), seed=seed)
    rng = np.random.default_rng(seed)
    k = draw(st.integers(1, 3))
    A = sorted(v for v in G.vertices if rng.random() < 0.3)
    cols = []
    for _ in range(k):
        targets = [v for v in G.vertices if rng.random() < 0.1] or [0]
        cols.append([min(min((bfs(G, t).get(v, 99) for t in targets)), 20) for v in G.vertices])
    vals = np.array(cols).T.reshape(G.n, k) if G.n else np.zeros((0, k))
    return G, LatticeMap(G, tuple(A), vals[A].reshape(len(A), k))


@settings(max_examples=40, deadline=None)
@given(lipschitz_instances())
def test_extension_matches_formula(inst):
    G, f = inst
    if G.n == 0:
        return
    out = extend_lipschitz(G, f.domain, f)
    assert out.as_dict() == brute_extension(G, f)
    assert out.restrict(f.domain).same_values(f)
    assert is_k_lipschitz(out, 1)
    assert extend_lipschitz(G, G.vertices, out).same_values(out)


@settings(max_examples=30, deadline=None)
@given(lipschitz_instances())
def test_extension_minimiser_locality(inst):
    G, f = inst
    if G.n == 0 or not f.domain:
        return
    arg = extension_argmins(G, f)
    width = (f.values.max(axis=0) - f.values.min(axis=0)).tolist()
    for u in G.vertices:
        d = bfs(G, u)
        reach = [a for a in f.domain if a in d]
        for i in range(f.k):
            if not reach:
                assert arg[u, i] == -1
                continue
            a = int(arg[u, i])
            assert f[a][i] + d[a] == min(f[b][i] + d[b] for b in reach)
            assert d[a] <= width[i] + min(d[b] for b in reach)


# -- LatticeMap ------------------------------------------------------------------


def test_box_enforced():
    P = generate_graph("path", 2)
    with pytest.raises(ValueError):
        LatticeMap.total(P, [[0, 0], [3, 0]], box=Box.cube(2, 2))


def test_json_roundtrip(two_edges):
    m = LatticeMap.total(two_edges, [[1, -2], [0, 0], [5, 5], [6, 5]], tags=[0, 0, 1, 1])
    back = map_from_json(two_edges, map_to_json(m))
    assert back.same_values(m) and back.tags == m.tags and back.lip == 1
    partial = LatticeMap.from_dict(two_edges, {2: (7,)})
    assert map_from_json(two_edges, map_to_json(partial)).as_dict() == {2: (7,)}
