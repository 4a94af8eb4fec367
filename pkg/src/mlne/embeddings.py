"""Embedding matrix file formats.

Text format (word2vec-style): first line "n d", then one line per node
"label v1 ... vd". Binary format: raw little-endian float64 row-major
matrix next to a JSON sidecar header with shape and labels.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import DimensionMismatchError, MissingNodeError, ParseError


def write_embeddings_text(path, U, labels):
    n, d = U.shape
    if len(labels) != n:
        raise DimensionMismatchError(f"{len(labels)} labels for {n} rows")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{n} {d}\n")
        for lab, row in zip(labels, U):
            fh.write(lab + " " + " ".join(repr(float(v)) for v in row) + "\n")


def read_embeddings_text(path):
    """Returns (labels, matrix)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError(path, 1, "expected header 'n d'")
        try:
            n, d = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError(path, 1, "non-integer header") from None
        labels = []
        U = np.empty((n, d), dtype=np.float64)
        for row in range(n):
            toks = fh.readline().split()
            if len(toks) != d + 1:
                raise ParseError(path, row + 2,
                                 f"expected {d + 1} tokens, got {len(toks)}")
            labels.append(toks[0])
            U[row] = [float(t) for t in toks[1:]]
    return labels, U


def write_embeddings_binary(path, U, labels):
    U = np.ascontiguousarray(U, dtype="<f8")
    U.tofile(path)
    with open(str(path) + ".json", "w", encoding="utf-8") as fh:
        json.dump({"n": U.shape[0], "d": U.shape[1],
                   "dtype": "<f8", "labels": list(labels)}, fh)


def read_embeddings_binary(path):
    with open(str(path) + ".json", "r", encoding="utf-8") as fh:
        header = json.load(fh)
    U = np.fromfile(path, dtype="<f8").reshape(header["n"], header["d"])
    return header["labels"], U


def rows_for_graph(labels, U, graph):
    """Reorder embedding rows to the graph's internal index order."""
    index = {lab: r for r, lab in enumerate(labels)}
    rows = np.empty(graph.n, dtype=np.int64)
    for i, lab in enumerate(graph.labels):
        r = index.get(lab)
        if r is None:
            raise MissingNodeError(f"no embedding row for node {lab!r}")
        rows[i] = r
    return U[rows]
