import pytest
from hypothesis import given, settings, strategies as st

from gridembed.covers import Cover, make_cover, power_components, validate_cover
from gridembed.graph import FiniteGraph, generate_graph, induced_subgraph, power_graph
from gridembed.grid import linf_distance

from conftest import bfs


def test_trivial_cover():
    G = generate_graph("cycle", 7)
    c = make_cover(G, "trivial")
    assert c.m == 1 and c.sets == (tuple(range(7)),)


def test_brick_example():
    G = generate_graph("chunk", "0..9")
    c = make_cover(G, "brick", L=3)
    assert c.sets == ((0, 1, 2, 6, 7, 8), (3, 4, 5, 9))


def test_brick_negative_coordinates_use_floor():
    G = generate_graph("chunk", "-4..1")
    c = make_cover(G, "brick", L=2)
    coords = lambda U: sorted(G.coords[v][0] for v in U)
    assert coords(c.sets[0]) == [-4, -3, 0, 1]
    assert coords(c.sets[1]) == [-2, -1]


def test_net_example():
    G = generate_graph("cycle", 12)
    c = make_cover(G, "net", L=4, R=1)
    assert c.meta["net"] == [0, 4, 8]
    assert c.m == 3
    # Equidistant vertices join the earlier net point's cluster.
    assert c.sets == ((0, 1, 2, 10, 11), (3, 4, 5, 6), (7, 8, 9))


def test_cover_errors():
    P = generate_graph("path", 5)
    with pytest.raises(ValueError):
        make_cover(P, "brick", L=4)
    with pytest.raises(ValueError):
        make_cover(generate_graph("chunk", "0..5"), "brick", L=6, R=2)
    with pytest.raises(ValueError):
        make_cover(P, "net", L=3, R=1)
    with pytest.raises(ValueError):
        make_cover(P, "hexagon", L=9)


def test_validate_brick_example():
    G = generate_graph("chunk", "0..9")
    rep = validate_cover(G, make_cover(G, "brick", L=3), 2)
    assert rep.sets[0].components == [[0, 1, 2], [6, 7, 8]]
    assert rep.sets[0].max_diameter == 2 and rep.bounded_by == 2


def test_validate_trivial_and_empty_sets():
    G = generate_graph("cycle", 6)
    rep = validate_cover(G, make_cover(G, "trivial"), 1)
    assert rep.sets[0].components == [list(range(6))]
    rep = validate_cover(G, Cover(G, ((), tuple(range(6))), 1), 1)
    assert rep.sets[0].count == 0


def test_validate_requires_coverage():
    G = generate_graph("path", 4)
    with pytest.raises(ValueError):
        validate_cover(G, Cover(G, ((0, 1),), 1), 1)


def test_validate_flags_large_components():
    G = generate_graph("chunk", "0..9")
    rep = validate_cover(G, make_cover(G, "brick", L=3), 4, bound=2)
    assert rep.flagged == [0, 1]


def reference_components(G, U, s):
    H, old = induced_subgraph(power_graph(G, s), U)
    groups = {}
    for i, c in enumerate(H.components()):
        groups.setdefault(c, []).append(old[i])
    return sorted(groups.values())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.floats(0.4, 1.0), st.integers(1, 3), st.sampled_from(["brick", "net"]))
def test_generated_covers(seed, p, R, kind):
    G = generate_graph("random_induced", "0..14x0..14", p, seed=seed)
    if G.n == 0:
        return
    L = 3 * R + 1
    c = make_cover(G, kind, L=L, R=R)
    assert c.covers()
    again = make_cover(G, kind, L=L, R=R)
    assert again.sets == c.sets
    rep = validate_cover(G, c, 3 * R)
    for U, stats in zip(c.sets, rep.sets):
        assert stats.components == reference_components(G, U, 3 * R)
        for comp in stats.components:
            if kind == "brick":
                bricks = {tuple(x // L for x in G.coords[v]) for v in comp}
                assert len(bricks) == 1
                assert max(linf_distance(G.coords[u], G.coords[v]) for u in comp for v in comp) <= L - 1
            else:
                clusters = {c.meta["cluster"][v] for v in comp}
                assert len(clusters) == 1
                assert stats.max_diameter <= 2 * L


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 3))
def test_brick_same_colour_separation(seed, R):
    G = generate_graph("random_induced", "0..12x0..12", 0.9, seed=seed)
    L = 3 * R + 1
    c = make_cover(G, "brick", L=L, R=R)
    for U in c.sets:
        for u in U:
            d = bfs(G, u)
            for v in U:
                if v in d and tuple(x // L for x in G.coords[u]) != tuple(x // L for x in G.coords[v]):
                    assert d[v] >= L + 1 > 3 * R


def test_power_components_on_disconnected_graph():
    G = FiniteGraph(5, [(0, 1), (3, 4)])
    assert power_components(G, range(5), 3) == [[0, 1], [2], [3, 4]]
