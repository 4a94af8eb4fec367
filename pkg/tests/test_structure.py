import itertools

import numpy as np
import pytest

from conftest import random_graph
from mlne.affiliations import Affiliations
from mlne.errors import CommunityTooLargeError, DimensionMismatchError
from mlne.graph import Graph
from mlne.structure import (PairWeightTable, compute_community_overlap,
                            compute_involvement, compute_triad_matrix,
                            dump_pair_weights, empirical_conditionals,
                            merge_pair_weights, triangle_count)


def triads_by_triple_enumeration(graph):
    """Oracle: count, for every edge, the triangles that contain it by
    walking all node triples."""
    counts = {}
    for a, b, c in itertools.combinations(range(graph.n), 3):
        if graph.has_edge(a, b) and graph.has_edge(b, c) and graph.has_edge(a, c):
            for i, j in ((a, b), (b, c), (a, c)):
                counts[(i, j)] = counts.get((i, j), 0) + 1
    return counts


def triads_by_dense_product(graph):
    """Oracle: dense A * (A @ A) masked onto the edge set."""
    A = graph.to_scipy().toarray()
    T = A * (A @ A)
    out = {}
    for i in range(graph.n):
        for j in range(i + 1, graph.n):
            if T[i, j]:
                out[(i, j)] = int(T[i, j])
    return out


def complete_graph(k):
    return Graph.from_edges([(str(a), str(b))
                             for a in range(k) for b in range(a + 1, k)])


class TestTriads:
    def test_triangle(self, triangle):
        assert compute_triad_matrix(triangle) == {(0, 1): 1, (0, 2): 1, (1, 2): 1}

    def test_path_is_triangle_free(self, path3):
        assert compute_triad_matrix(path3) == {}

    def test_k4_matches_triple_enumeration(self):
        g = complete_graph(4)
        result = compute_triad_matrix(g)
        assert result == triads_by_triple_enumeration(g)
        assert all(v == 2 for v in result.values())

    @pytest.mark.parametrize("seed", range(5))
    def test_random_matches_both_oracles(self, seed):
        g = random_graph(30, 0.2, seed)
        result = compute_triad_matrix(g)
        assert result == triads_by_triple_enumeration(g)
        assert result == triads_by_dense_product(g)

    def test_support_and_bound_invariants(self):
        g = random_graph(40, 0.15, 99)
        for (i, j), t in compute_triad_matrix(g).items():
            assert g.has_edge(i, j)
            assert t <= min(g.degrees[i], g.degrees[j]) - 1

    def test_triangle_count_identity(self):
        g = random_graph(50, 0.1, 3)
        n_triangles = sum(
            1 for a, b, c in itertools.combinations(range(g.n), 3)
            if g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c))
        assert triangle_count(g) == n_triangles


class TestInvolvement:
    def test_single_community_triangle(self, triangle):
        aff = Affiliations(3, [[0, 1, 2]])
        S = compute_involvement(triangle, aff).toarray()
        assert np.array_equal(S, [[2], [2], [2]])

    def test_singleton_community(self, triangle):
        aff = Affiliations(3, [[0]])
        S = compute_involvement(triangle, aff).toarray()
        assert np.array_equal(S, [[0], [1], [1]])

    def test_matches_dense_product(self):
        g = random_graph(50, 0.1, 7)
        rng = np.random.default_rng(7)
        communities = [np.flatnonzero(rng.random(g.n) < 0.3) for _ in range(4)]
        communities = [c for c in communities if c.size]
        aff = Affiliations(g.n, communities)
        S = compute_involvement(g, aff).toarray()
        expected = g.to_scipy().toarray() @ aff.membership_matrix().toarray()
        assert np.array_equal(S, expected)

    def test_dimension_mismatch(self, triangle):
        with pytest.raises(DimensionMismatchError):
            compute_involvement(triangle, Affiliations(5, [[0, 4]]))

    def test_entry_bound(self):
        g = random_graph(30, 0.2, 11)
        aff = Affiliations(g.n, [list(range(10)), list(range(5, 25))])
        S = compute_involvement(g, aff).toarray()
        for j in range(g.n):
            for c, members in enumerate(aff.communities):
                assert S[j, c] <= min(g.degrees[j], members.size)


class TestConditionals:
    def test_uniform_column(self, triangle):
        aff = Affiliations(3, [[0, 1, 2]])
        cond = empirical_conditionals(compute_involvement(triangle, aff))
        assert np.allclose(cond.by_community.toarray(), [[1/3], [1/3], [1/3]])

    def test_row_normalization(self):
        import scipy.sparse as sp
        cond = empirical_conditionals(sp.csr_matrix(np.array([[3.0, 1.0]])))
        assert np.allclose(cond.by_node.toarray(), [[0.75, 0.25]])

    def test_random_sums(self):
        rng = np.random.default_rng(5)
        S = rng.integers(0, 4, size=(20, 6)).astype(float)
        S[3] = 0  # force an empty row
        with pytest.warns(RuntimeWarning):
            cond = empirical_conditionals(S)
        col_sums = cond.by_community.toarray().sum(axis=0)
        row_sums = cond.by_node.toarray().sum(axis=1)
        for s, orig in zip(col_sums, S.sum(axis=0)):
            assert abs(s - (1.0 if orig else 0.0)) < 1e-12
        for s, orig in zip(row_sums, S.sum(axis=1)):
            assert abs(s - (1.0 if orig else 0.0)) < 1e-12
        assert cond.zero_rows == 1


class TestCommunityOverlap:
    def test_single_shared_community(self):
        aff = Affiliations(3, [[0], [0, 1], [1, 2]])
        assert compute_community_overlap(aff) == {(0, 1): 1, (1, 2): 1}

    def test_two_shared_everywhere(self):
        aff = Affiliations(4, [[0, 1, 2, 3], [0, 1, 2, 3]])
        H = compute_community_overlap(aff)
        assert all(v == 2 for v in H.values())
        assert len(H) == 6

    def test_matches_dense_product(self):
        rng = np.random.default_rng(13)
        communities = [np.flatnonzero(rng.random(40) < 0.3) for _ in range(6)]
        aff = Affiliations(40, [c for c in communities if c.size])
        H = compute_community_overlap(aff)
        R = aff.membership_matrix().toarray()
        dense = R @ R.T
        for i in range(40):
            for j in range(i + 1, 40):
                assert H.get((i, j), 0) == dense[i, j]

    def test_generator_column_sums(self):
        rng = np.random.default_rng(17)
        communities = [np.flatnonzero(rng.random(30) < 0.4) for _ in range(5)]
        aff = Affiliations(30, [c for c in communities if c.size > 0])
        H = compute_community_overlap(aff)
        for i in range(30):
            total = sum(v for (a, b), v in H.items() if i in (a, b))
            expected = sum(members.size - 1 for members in aff.communities
                           if i in members)
            assert total == expected

    def test_pair_budget(self):
        aff = Affiliations(100, [list(range(100))])
        with pytest.raises(CommunityTooLargeError):
            compute_community_overlap(aff, pair_budget=1000)


class TestMerge:
    def test_disjoint_supports(self):
        table = merge_pair_weights({(0, 1): 1}, {(1, 2): 2}, {})
        assert table.get(0, 1) == (1, 0, 0)
        assert table.get(1, 2) == (0, 2, 0)
        assert table.get(2, 1) == (0, 2, 0)  # symmetric lookup
        assert len(table) == 2

    def test_union_size(self):
        table = merge_pair_weights({(0, 1): 1}, {(2, 3): 1}, {(4, 5): 7})
        assert len(table) == 3

    def test_overlapping_supports(self):
        rng = np.random.default_rng(23)
        maps = []
        for _ in range(3):
            maps.append({(int(a), int(a) + 1 + int(b)): int(v)
                         for a, b, v in zip(rng.integers(0, 10, 30),
                                            rng.integers(0, 5, 30),
                                            rng.integers(1, 9, 30))})
        table = merge_pair_weights(*maps)
        for (i, j), (t, h, w) in table.items():
            assert (t, h, w) == (maps[0].get((i, j), 0),
                                 maps[1].get((i, j), 0),
                                 maps[2].get((i, j), 0))

    def test_dump_format(self, tmp_path):
        table = PairWeightTable({(0, 1): (1, 0, 3)})
        path = tmp_path / "pairs.txt"
        dump_pair_weights(path, table)
        assert path.read_text() == "0 1 1 0 3\n"
