"""Pairwise structural statistics: shared triangles, shared communities,
walk co-occurrences, and their joint sparse table."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import CommunityTooLargeError, DimensionMismatchError

DEFAULT_PAIR_BUDGET = 10 ** 8


def _key(i, j):
    return (i, j) if i < j else (j, i)


class PairWeightTable:
    """Sparse symmetric table {i,j} -> (t, h, w).

    t = shared triangle count, h = shared community count, w = walk
    co-occurrence count. Only pairs with at least one nonzero component
    are stored; keys are normalized to i < j.
    """

    def __init__(self, entries=None):
        self.entries = entries if entries is not None else {}

    def __len__(self):
        return len(self.entries)

    def get(self, i, j):
        return self.entries.get(_key(i, j), (0, 0, 0))

    def items(self):
        return self.entries.items()

    def arrays(self):
        """Parallel arrays (ii, jj, tt, hh, ww) in sorted key order."""
        keys = sorted(self.entries)
        n = len(keys)
        ii = np.empty(n, dtype=np.int64)
        jj = np.empty(n, dtype=np.int64)
        tt = np.empty(n, dtype=np.float64)
        hh = np.empty(n, dtype=np.float64)
        ww = np.empty(n, dtype=np.float64)
        for k, (i, j) in enumerate(keys):
            t, h, w = self.entries[(i, j)]
            ii[k], jj[k], tt[k], hh[k], ww[k] = i, j, t, h, w
        return ii, jj, tt, hh, ww


def compute_triad_matrix(graph):
    """Shared-triangle counts on edges, via sorted neighbor intersection.

    Returns {(i, j): count} with i < j, containing only edges that close
    at least one triangle. Equivalent to taking the adjacency matrix A
    and masking A @ A onto the edge set, without a dense product.
    """
    counts = {}
    for i in range(graph.n):
        adj_i = graph.adjacency(i)
        for j in adj_i:
            if j <= i:
                continue
            adj_j = graph.adjacency(j)
            # two-pointer intersection via searchsorted on the shorter list
            if adj_i.size <= adj_j.size:
                small, big = adj_i, adj_j
            else:
                small, big = adj_j, adj_i
            pos = np.searchsorted(big, small)
            valid = pos < big.size
            common = int(np.count_nonzero(big[pos[valid]] == small[valid]))
            if common:
                counts[(i, int(j))] = common
    return counts


def triangle_count(graph, triads=None):
    """Total number of triangles; each contributes to three edges."""
    if triads is None:
        triads = compute_triad_matrix(graph)
    total = sum(triads.values())
    assert total % 3 == 0
    return total // 3


def compute_involvement(graph, aff):
    """S = A @ R: entry (j, c) counts node j's neighbors inside community c."""
    if aff.n != graph.n:
        raise DimensionMismatchError(
            f"affiliations over {aff.n} nodes, graph has {graph.n}")
    return (graph.to_scipy() @ aff.membership_matrix()).tocsr()


@dataclass
class Conditionals:
    """Diagnostic normalizations of the involvement matrix."""

    by_community: sp.csr_matrix  # columns sum to 1 where nonzero
    by_node: sp.csr_matrix       # rows sum to 1 where nonzero
    zero_columns: int
    zero_rows: int


def empirical_conditionals(S):
    """Column- and row-normalize S into empirical membership distributions.

    All-zero columns/rows stay zero and are tallied; diagnostic output
    only, the trainer never consumes these.
    """
    S = sp.csr_matrix(S, dtype=np.float64)
    col_sums = np.asarray(S.sum(axis=0)).ravel()
    row_sums = np.asarray(S.sum(axis=1)).ravel()
    zero_cols = int(np.count_nonzero(col_sums == 0))
    zero_rows = int(np.count_nonzero(row_sums == 0))
    if zero_cols or zero_rows:
        warnings.warn(
            f"involvement matrix has {zero_cols} empty columns and "
            f"{zero_rows} empty rows; their distributions are zero",
            RuntimeWarning, stacklevel=2)
    inv_col = np.divide(1.0, col_sums, out=np.zeros_like(col_sums),
                        where=col_sums > 0)
    inv_row = np.divide(1.0, row_sums, out=np.zeros_like(row_sums),
                        where=row_sums > 0)
    by_comm = (S @ sp.diags(inv_col)).tocsr()
    by_node = (sp.diags(inv_row) @ S).tocsr()
    return Conditionals(by_comm, by_node, zero_cols, zero_rows)


def compute_community_overlap(aff, pair_budget=DEFAULT_PAIR_BUDGET):
    """Shared-community counts per node pair via per-community expansion.

    Equals the off-diagonal of R @ R.T without forming an n x n matrix.
    A single community whose pair expansion exceeds ``pair_budget``
    signals degenerate input and raises CommunityTooLargeError.
    """
    counts = {}
    for c, members in enumerate(aff.communities):
        k = members.size
        if k * (k - 1) // 2 > pair_budget:
            raise CommunityTooLargeError(
                f"community {c} with {k} members expands to "
                f"{k * (k - 1) // 2} pairs (budget {pair_budget})")
        for a in range(k):
            ia = int(members[a])
            for b in range(a + 1, k):
                key = (ia, int(members[b]))
                counts[key] = counts.get(key, 0) + 1
    return counts


def merge_pair_weights(triads, overlaps, cooccurrences):
    """Union three sparse pair maps into one PairWeightTable."""
    entries = {}
    for src, slot in ((triads, 0), (overlaps, 1), (cooccurrences, 2)):
        for (i, j), v in src.items():
            key = _key(i, j)
            rec = entries.get(key)
            if rec is None:
                rec = [0, 0, 0]
                entries[key] = rec
            rec[slot] += v
    return PairWeightTable({k: tuple(v) for k, v in entries.items()})


def dump_pair_weights(path, table, graph=None):
    """Debug dump, one line per pair: "i j t h w".

    With a graph, i and j are external labels; otherwise internal
    indices.
    """
    with open(path, "w", encoding="utf-8") as fh:
        for (i, j) in sorted(table.entries):
            t, h, w = table.entries[(i, j)]
            if graph is not None:
                fh.write(f"{graph.labels[i]} {graph.labels[j]} {t} {h} {w}\n")
            else:
                fh.write(f"{i} {j} {t} {h} {w}\n")
