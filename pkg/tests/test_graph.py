import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlne.errors import EmptyGraphError, ParseError, UnknownNodeError
from mlne.graph import (Graph, degree_distribution, load_edge_list,
                        load_labels, write_edge_list)


def write(tmp_path, text, name="g.edges"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadEdgeList:
    def test_triangle(self, tmp_path):
        g = load_edge_list(write(tmp_path, "0 1\n1 2\n2 0\n"))
        assert g.n == 3
        assert g.num_edges == 3
        assert list(g.degrees) == [2, 2, 2]

    def test_dedup_and_self_loops(self, tmp_path):
        g = load_edge_list(write(tmp_path, "a b\nb a\na a\n"))
        assert g.n == 2
        assert g.num_edges == 1

    def test_comments_and_extra_tokens(self, tmp_path):
        g = load_edge_list(write(tmp_path, "# header\n% other\n0 1 9.5\n1 2\n"))
        assert g.num_edges == 2

    def test_malformed_line_reports_number(self, tmp_path):
        with pytest.raises(ParseError, match=":2:"):
            load_edge_list(write(tmp_path, "0 1\njustone\n"))

    def test_empty_after_cleaning(self, tmp_path):
        with pytest.raises(EmptyGraphError):
            load_edge_list(write(tmp_path, "a a\n"))

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(OSError):
            load_edge_list(tmp_path / "missing.edges")

    def test_first_seen_index_order(self, tmp_path):
        g = load_edge_list(write(tmp_path, "x y\ny z\n"))
        assert g.labels == ["x", "y", "z"]


class TestInvariants:
    def check(self, g):
        assert np.sum(g.degrees) == 2 * g.num_edges
        for i in range(g.n):
            adj = g.adjacency(i)
            assert np.all(np.diff(adj) > 0)  # sorted, no duplicates
            assert i not in adj
            for j in adj:
                assert g.has_edge(int(j), i)
        # dense indices: every index has an external label
        assert len(g.labels) == g.n
        assert sorted(g.index_of.values()) == list(range(g.n))

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)),
                    min_size=1, max_size=60))
    def test_symmetry_and_sortedness(self, pairs):
        pairs = [(str(a), str(b)) for a, b in pairs if a != b]
        if not pairs:
            return
        self.check(Graph.from_edges(pairs))

    def test_round_trip(self, tmp_path, two_triangles):
        path = tmp_path / "rt.edges"
        write_edge_list(path, two_triangles)
        g2 = load_edge_list(path)
        assert g2.n == two_triangles.n
        assert g2.labels == two_triangles.labels
        assert np.array_equal(g2.offsets, two_triangles.offsets)
        assert np.array_equal(g2.neighbors, two_triangles.neighbors)


class TestLabels:
    def test_triangle_labels(self, tmp_path, triangle):
        table = load_labels(write(tmp_path, "0 A\n1 A\n2 B\n", "l"), triangle)
        assert table.num_classes == 2
        assert len(table.labels) == 3

    def test_unknown_node(self, tmp_path, triangle):
        with pytest.raises(UnknownNodeError):
            load_labels(write(tmp_path, "0 A\nmissing B\n", "l"), triangle)

    def test_skip_unknown_is_counted(self, tmp_path, triangle):
        table = load_labels(write(tmp_path, "0 A\nmissing B\n1 B\n", "l"),
                            triangle, skip_unknown=True)
        assert table.skipped_unknown == 1
        assert len(table.labels) == 2

    def test_multilabel(self, tmp_path, triangle):
        table = load_labels(write(tmp_path, "0 A\n0 B\n1 A\n", "l"), triangle)
        assert table.is_multilabel()
        assert table.labels[0] == {"A", "B"}


class TestDegreeDistribution:
    def test_triangle(self, triangle):
        assert degree_distribution(triangle) == {2: 3}

    def test_star(self, star5):
        assert degree_distribution(star5) == {4: 1, 1: 4}

    def test_counts_sum_to_n(self, two_triangles):
        assert sum(degree_distribution(two_triangles).values()) == 6
