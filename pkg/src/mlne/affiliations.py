"""Overlapping node-community memberships and their file format.

The on-disk format is one community per line: whitespace-separated
external node labels. Overlap is expressed by a node appearing on
several lines.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .errors import ImportFormatError


class Affiliations:
    """Sparse binary node x community incidence.

    ``communities`` is a list of sorted int arrays of member node
    indices; every community is non-empty.
    """

    def __init__(self, n, communities):
        self.n = n
        self.communities = []
        for members in communities:
            arr = np.unique(np.asarray(members, dtype=np.int64))
            if arr.size == 0:
                raise ValueError("empty community")
            if arr[0] < 0 or arr[-1] >= n:
                raise ValueError("community member index out of range")
            self.communities.append(arr)

    @property
    def m(self):
        return len(self.communities)

    def membership_matrix(self):
        """The incidence as a scipy CSR matrix of shape (n, m)."""
        rows, cols = [], []
        for c, members in enumerate(self.communities):
            rows.append(members)
            cols.append(np.full(members.size, c, dtype=np.int64))
        if rows:
            rows = np.concatenate(rows)
            cols = np.concatenate(cols)
        data = np.ones(len(rows), dtype=np.float64)
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.m))

    def node_memberships(self):
        """Per-node list of community indices."""
        out = [[] for _ in range(self.n)]
        for c, members in enumerate(self.communities):
            for v in members:
                out[v].append(c)
        return out


def write_affiliations(path, aff, graph):
    with open(path, "w", encoding="utf-8") as fh:
        for members in aff.communities:
            fh.write(" ".join(graph.labels[v] for v in members) + "\n")


def read_affiliations(path, graph):
    """Parse an affiliation file against the graph's label mapping."""
    communities = []
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ImportFormatError(f"cannot read {path}: {exc}") from exc
    with fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(("#", "%")):
                continue
            members = []
            for tok in line.split():
                idx = graph.index_of.get(tok)
                if idx is None:
                    raise ImportFormatError(
                        f"{path}:{line_no}: node {tok!r} not in graph")
                members.append(idx)
            communities.append(members)
    if not communities:
        raise ImportFormatError(f"{path}: no communities found")
    return Affiliations(graph.n, communities)
