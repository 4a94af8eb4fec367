"""Undirected simple graph with CSR adjacency and a stable label mapping."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import EmptyGraphError, ParseError, UnknownNodeError

COMMENT_PREFIXES = ("#", "%")


class Graph:
    """Immutable undirected graph over dense internal indices [0, n).

    Adjacency is CSR-style: ``offsets`` (length n+1) into ``neighbors``,
    with every neighbor list sorted ascending, no duplicates and no
    self-loops. ``labels[i]`` is the external label of internal index i.
    """

    def __init__(self, offsets, neighbors, labels):
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.neighbors = np.asarray(neighbors, dtype=np.int32)
        self.labels = list(labels)
        self.n = len(self.labels)
        self.degrees = np.diff(self.offsets).astype(np.int64)
        self.index_of = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index_of) != self.n:
            raise ValueError("duplicate external labels")

    @property
    def num_edges(self):
        """Number of undirected edges."""
        return int(self.neighbors.size) // 2

    def adjacency(self, i):
        """Sorted neighbor array of node i (a view, do not mutate)."""
        return self.neighbors[self.offsets[i]:self.offsets[i + 1]]

    def has_edge(self, i, j):
        adj = self.adjacency(i)
        pos = np.searchsorted(adj, j)
        return pos < adj.size and adj[pos] == j

    def edges(self):
        """Yield each undirected edge once as (i, j) with i < j."""
        for i in range(self.n):
            for j in self.adjacency(i):
                if i < j:
                    yield i, int(j)

    def to_scipy(self):
        """Adjacency as a scipy CSR matrix with unit entries."""
        data = np.ones(self.neighbors.size, dtype=np.float64)
        return sp.csr_matrix((data, self.neighbors, self.offsets),
                             shape=(self.n, self.n))

    @classmethod
    def from_edges(cls, edge_pairs):
        """Build a Graph from (source_label, target_label) pairs.

        Input is symmetrized, multi-edges are collapsed and self-loops
        dropped. Internal indices follow first-seen label order.
        """
        index_of = {}
        labels = []

        def intern(lab):
            idx = index_of.get(lab)
            if idx is None:
                idx = len(labels)
                index_of[lab] = idx
                labels.append(lab)
            return idx

        pairs = set()
        for a, b in edge_pairs:
            ia, ib = intern(a), intern(b)
            if ia == ib:
                continue
            pairs.add((ia, ib) if ia < ib else (ib, ia))
        if not pairs:
            raise EmptyGraphError("no edges remain after cleaning")

        n = len(labels)
        arr = np.array(sorted(pairs), dtype=np.int64)
        src = np.concatenate([arr[:, 0], arr[:, 1]])
        dst = np.concatenate([arr[:, 1], arr[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.add.at(offsets, src + 1, 1)
        offsets = np.cumsum(offsets)
        return cls(offsets, dst.astype(np.int32), labels)


@dataclass
class LabelTable:
    """Class labels per internal node index; multi-label permitted."""

    labels: dict  # index -> set of class labels
    num_classes: int
    classes: list = field(default_factory=list)

    def labeled_nodes(self):
        return sorted(self.labels)

    def is_multilabel(self):
        return any(len(s) > 1 for s in self.labels.values())


def _parse_lines(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line_no, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith(COMMENT_PREFIXES):
                    continue
                yield line_no, line.split()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc


def load_edge_list(path, deduplicate=True, drop_self_loops=True):
    """Load an undirected Graph from a whitespace-separated edge list.

    Lines starting with '#' or '%' are comments; extra tokens beyond the
    first two are ignored. Directed input is symmetrized. The
    ``deduplicate`` / ``drop_self_loops`` flags exist for interface
    symmetry; cleaning always produces a simple graph (a self-loop or
    multi-edge with the flag off is a parse-time error instead).
    """
    pairs = []
    seen = set()
    for line_no, toks in _parse_lines(path):
        if len(toks) < 2:
            raise ParseError(path, line_no, f"expected 2 tokens, got {len(toks)}")
        a, b = toks[0], toks[1]
        if a == b:
            if drop_self_loops:
                continue
            raise ParseError(path, line_no, f"self-loop on {a!r}")
        key = (a, b) if a < b else (b, a)
        if key in seen:
            if deduplicate:
                continue
            raise ParseError(path, line_no, f"duplicate edge {a!r}-{b!r}")
        seen.add(key)
        pairs.append((a, b))
    if not pairs:
        raise EmptyGraphError(f"{path}: zero edges after cleaning")
    return Graph.from_edges(pairs)


def load_labels(path, graph, skip_unknown=False):
    """Load "node class" lines into a LabelTable keyed by internal index.

    Nodes present only in the label file have no edges and therefore no
    training signal. By default they raise UnknownNodeError; with
    ``skip_unknown`` they are dropped and counted in ``skipped_unknown``
    so callers can report them.
    """
    table = {}
    classes = []
    seen_classes = set()
    skipped = 0
    for line_no, toks in _parse_lines(path):
        if len(toks) < 2:
            raise ParseError(path, line_no, f"expected 2 tokens, got {len(toks)}")
        node_lab, cls = toks[0], toks[1]
        idx = graph.index_of.get(node_lab)
        if idx is None:
            if skip_unknown:
                skipped += 1
                continue
            raise UnknownNodeError(f"{path}:{line_no}: node {node_lab!r} not in graph")
        table.setdefault(idx, set()).add(cls)
        if cls not in seen_classes:
            seen_classes.add(cls)
            classes.append(cls)
    out = LabelTable(labels=table, num_classes=len(classes), classes=classes)
    out.skipped_unknown = skipped
    return out


def degree_distribution(graph):
    """Histogram degree -> node count; counts sum to n."""
    return dict(Counter(int(d) for d in graph.degrees))


def write_edge_list(path, graph):
    """Write each undirected edge once using external labels."""
    with open(path, "w", encoding="utf-8") as fh:
        for i, j in graph.edges():
            fh.write(f"{graph.labels[i]} {graph.labels[j]}\n")
