import itertools
import math

import networkx as nx
import numpy as np
import pytest

from isograph.graph_core import (
    DistanceMatrix,
    Graph,
    Graph6ParseError,
    NotConnectedError,
    classify_shape,
    complement_is_partial_matching,
    construct_family,
    distance_matrix,
    from_edge_list_json,
    parse_graph6,
    to_edge_list_json,
    write_graph6,
)
from isograph.harness import enumerate_connected_graphs


def floyd_warshall(g: Graph) -> np.ndarray:
    n = g.vertex_count
    d = np.full((n, n), math.inf)
    np.fill_diagonal(d, 0.0)
    for i, j in g.edges:
        d[i, j] = d[j, i] = 1.0
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i, k] + d[k, j] < d[i, j]:
                    d[i, j] = d[i, k] + d[k, j]
    return d


def random_graph(rng, n, p):
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


def graphs_isomorphic(a: Graph, b: Graph) -> bool:
    if a.vertex_count != b.vertex_count or a.edge_count != b.edge_count:
        return False
    for perm in itertools.permutations(range(a.vertex_count)):
        if all(
            ((min(perm[i], perm[j]), max(perm[i], perm[j])) in b.edges)
            for i, j in a.edges
        ):
            return True
    return False


class TestGraph:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph.from_edges(3, [(1, 1)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Graph.from_edges(2, [(0, 2)])

    def test_edges_order_independent(self):
        g = Graph.from_edges(3, [(2, 0)])
        assert g.has_edge(0, 2) and g.has_edge(2, 0)

    def test_components(self):
        g = Graph.from_edges(4, [(0, 1)])
        comps = sorted(sorted(c) for c in g.components())
        assert comps == [[0, 1], [2], [3]]


class TestGraph6:
    def test_k2(self):
        g = parse_graph6("A_")
        assert g.vertex_count == 2 and g.edges == frozenset({(0, 1)})

    def test_two_isolated(self):
        g = parse_graph6("A?")
        assert g.vertex_count == 2 and not g.edges

    def test_k4(self):
        g = parse_graph6("C~")
        assert g.vertex_count == 4 and g.edge_count == 6

    def test_write_examples(self):
        assert write_graph6(construct_family("complete", 2)) == "A_"
        assert write_graph6(Graph(1, frozenset())) == "@"
        assert write_graph6(construct_family("complete", 4)) == "C~"

    def test_sparse6_rejected(self):
        with pytest.raises(Graph6ParseError, match="sparse6"):
            parse_graph6(":Fa@x^")

    def test_long_form_rejected(self):
        with pytest.raises(Graph6ParseError, match="long-form"):
            parse_graph6("~??~?????")

    def test_length_mismatch_has_offset(self):
        with pytest.raises(Graph6ParseError) as err:
            parse_graph6("C~~")
        assert err.value.offset == 2

    def test_bad_payload_byte(self):
        with pytest.raises(Graph6ParseError):
            parse_graph6("C\x1f")

    def test_nonzero_padding_rejected(self):
        # 3 vertices use 3 bits; set a padding bit
        with pytest.raises(Graph6ParseError, match="padding"):
            parse_graph6("B" + chr(63 + 1))

    def test_roundtrip_matches_networkx(self):
        for m in range(1, 7):
            for g in enumerate_connected_graphs(m, dedup=True):
                s = write_graph6(g)
                assert parse_graph6(s) == g
                ref = nx.from_graph6_bytes(s.encode())
                assert set(ref.nodes) == set(range(m))
                assert {tuple(sorted(e)) for e in ref.edges} == set(g.edges)

    def test_roundtrip_random(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            g = random_graph(rng, int(rng.integers(1, 12)), rng.random())
            assert parse_graph6(write_graph6(g)) == g


class TestFamilies:
    def test_cocktail_2_is_octahedron(self):
        g = construct_family("cocktail", 2)
        assert g.vertex_count == 6
        assert g.edge_count == 12
        assert all(d == 4 for d in g.degrees())

    def test_cocktail_counts(self):
        for n in range(1, 5):
            g = construct_family("cocktail", n)
            assert g.vertex_count == 2 * (n + 1)
            assert g.edge_count == 2 * n * (n + 1)
            assert all(d == 2 * n for d in g.degrees())

    def test_complete_1(self):
        g = construct_family("complete", 1)
        assert g.vertex_count == 1 and not g.edges

    def test_complete_minus_perfect_matching_4_is_c4(self):
        g = construct_family("complete_minus_matching", 4, 2)
        assert graphs_isomorphic(g, construct_family("cycle", 4))

    def test_parameter_range(self):
        with pytest.raises(ValueError):
            construct_family("cycle", 2)
        with pytest.raises(ValueError):
            construct_family("path", 0)
        with pytest.raises(ValueError):
            construct_family("complete_minus_matching", 3, 2)
        with pytest.raises(ValueError):
            construct_family("nonsense", 3)


class TestDistanceMatrix:
    def test_path3(self):
        d = distance_matrix(construct_family("path", 3))
        assert d.values[0, 2] == 2

    def test_disconnected_infinite(self):
        d = distance_matrix(Graph(2, frozenset()))
        assert math.isinf(d.values[0, 1])

    def test_cycle5_nonadjacent_at_2(self):
        g = construct_family("cycle", 5)
        d = distance_matrix(g)
        for i in range(5):
            for j in range(i + 1, 5):
                expected = 1 if g.has_edge(i, j) else 2
                assert d.values[i, j] == expected

    def test_bfs_matches_floyd_warshall(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            g = random_graph(rng, int(rng.integers(1, 11)), rng.random())
            assert np.array_equal(distance_matrix(g).values, floyd_warshall(g))

    def test_metric_axioms_exhaustive(self):
        for m in range(1, 7):
            for g in enumerate_connected_graphs(m, dedup=True):
                d = distance_matrix(g)
                v = d.values
                assert np.array_equal(v, v.T)
                assert np.all(np.diag(v) == 0)
                off = v[~np.eye(m, dtype=bool)]
                assert np.all(off > 0)
                assert d.check_triangle(0.0)

    def test_metric_axioms_sampled_7(self):
        rng = np.random.default_rng(13)
        done = 0
        while done < 200:
            g = random_graph(rng, 7, rng.uniform(0.3, 0.9))
            if not g.is_connected():
                continue
            assert distance_matrix(g).check_triangle(0.0)
            done += 1

    def test_validation(self):
        with pytest.raises(ValueError, match="symmetric"):
            DistanceMatrix(np.array([[0.0, 1.0], [2.0, 0.0]]))
        with pytest.raises(ValueError, match="diagonal"):
            DistanceMatrix(np.array([[1.0]]))


class TestClassifyShape:
    def test_k3_is_complete_and_cycle(self):
        flags = classify_shape(construct_family("complete", 3))
        assert flags.is_complete and flags.is_cycle
        assert not flags.is_path

    def test_octahedron(self):
        flags = classify_shape(construct_family("cocktail", 2))
        assert flags.is_complete_minus_matching
        assert flags.matching_size == 3
        assert not (flags.is_path or flags.is_cycle or flags.is_complete)

    def test_star(self):
        star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        flags = classify_shape(star)
        assert flags.max_degree == 3
        assert not any(
            [
                flags.is_path,
                flags.is_cycle,
                flags.is_complete,
                flags.is_complete_minus_matching,
            ]
        )

    def test_disconnected_names_components(self):
        with pytest.raises(NotConnectedError) as err:
            classify_shape(Graph.from_edges(4, [(0, 1), (2, 3)]))
        assert err.value.components == [[0, 1], [2, 3]]

    def test_families_assert_their_flag(self):
        for k in range(1, 13):
            assert classify_shape(construct_family("path", k)).is_path
        for m in range(3, 13):
            assert classify_shape(construct_family("cycle", m)).is_cycle
        for m in range(1, 13):
            assert classify_shape(construct_family("complete", m)).is_complete
        for n in range(1, 6):
            f = classify_shape(construct_family("cocktail", n))
            assert f.is_complete_minus_matching
            assert f.matching_size == n + 1
        for m in range(3, 13):
            for t in range(m // 2 + 1):
                g = construct_family("complete_minus_matching", m, t)
                if g.is_connected():
                    assert classify_shape(g).is_complete_minus_matching

    def test_complement_matching_implies_diameter_2(self):
        for m in range(3, 7):
            for g in enumerate_connected_graphs(m, dedup=True):
                if complement_is_partial_matching(g):
                    assert distance_matrix(g).max_finite <= 2

    def test_complement_matching_diameter_sampled_7(self):
        rng = np.random.default_rng(17)
        for _ in range(500):
            g = random_graph(rng, 7, rng.uniform(0.6, 1.0))
            if g.is_connected() and complement_is_partial_matching(g):
                assert distance_matrix(g).max_finite <= 2


class TestEdgeListJson:
    def test_roundtrip(self):
        g = construct_family("cocktail", 2)
        assert from_edge_list_json(to_edge_list_json(g)) == g

    def test_rejects_repeats(self):
        with pytest.raises(ValueError, match="repeated"):
            from_edge_list_json('{"vertices": 3, "edges": [[0,1],[1,0]]}')

    def test_rejects_self_loops(self):
        with pytest.raises(ValueError, match="self-loop"):
            from_edge_list_json('{"vertices": 3, "edges": [[1,1]]}')
