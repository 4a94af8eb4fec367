"""Second-order (return/in-out biased) random walks and windowed
co-occurrence counting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass
class WalkConfig:
    walks_per_node: int = 10
    walk_length: int = 80
    window: int = 5
    p: float = 1.0   # return parameter
    q: float = 1.0   # in-out parameter
    seed: int = 0
    binary_counts: bool = False

    def __post_init__(self):
        if self.walk_length < 2:
            raise ConfigError("walk.walk_length must be >= 2")
        if self.window < 1:
            raise ConfigError("walk.window must be >= 1")
        if self.p <= 0 or self.q <= 0:
            raise ConfigError("walk.p and walk.q must be positive")


def _walk_rng(seed, rep, start):
    # per-walk generator: deterministic regardless of generation order
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep, start)))


def step_weights(graph, prev, cur, p, q):
    """Unnormalized transition weights from ``cur`` given previous node.

    1/p to return to ``prev``, 1 to a common neighbor of ``prev``, 1/q
    otherwise.
    """
    nbrs = graph.adjacency(cur)
    w = np.full(nbrs.size, 1.0 / q)
    prev_adj = graph.adjacency(prev)
    pos = np.searchsorted(prev_adj, nbrs)
    pos[pos >= prev_adj.size] = prev_adj.size - 1
    w[prev_adj[pos] == nbrs] = 1.0
    w[nbrs == prev] = 1.0 / p
    return nbrs, w


def _single_walk(graph, start, length, p, q, rng):
    adj = graph.adjacency(start)
    if adj.size == 0:
        return [start]
    walk = [start, int(adj[rng.integers(adj.size)])]
    unbiased = p == 1.0 and q == 1.0
    while len(walk) < length:
        cur = walk[-1]
        nbrs = graph.adjacency(cur)
        if unbiased:
            walk.append(int(nbrs[rng.integers(nbrs.size)]))
            continue
        nbrs, w = step_weights(graph, walk[-2], cur, p, q)
        cdf = np.cumsum(w)
        r = rng.random() * cdf[-1]
        walk.append(int(nbrs[np.searchsorted(cdf, r, side="right")]))
    return walk


def generate_walks(graph, cfg):
    """All walks: ``walks_per_node`` per start node, start order shuffled
    per repetition. Identical seed and config give identical output."""
    walks = []
    for rep in range(cfg.walks_per_node):
        order_rng = np.random.default_rng(
            np.random.SeedSequence(cfg.seed, spawn_key=(rep,)))
        starts = order_rng.permutation(graph.n)
        for start in starts:
            rng = _walk_rng(cfg.seed, rep, int(start))
            walks.append(_single_walk(graph, int(start), cfg.walk_length,
                                      cfg.p, cfg.q, rng))
    return walks


def count_cooccurrences(walks, window, binary=False):
    """Windowed unordered pair counts over walks.

    Every pair (walk[k], walk[k+o]) with 1 <= o <= window and distinct
    endpoints increments its count. ``binary`` caps counts at 1.
    """
    if window < 1:
        raise ConfigError("window must be >= 1")
    counts = {}
    for walk in walks:
        L = len(walk)
        for k in range(L):
            a = walk[k]
            for o in range(1, min(window, L - 1 - k) + 1):
                b = walk[k + o]
                if a == b:
                    continue
                key = (a, b) if a < b else (b, a)
                counts[key] = counts.get(key, 0) + 1
    if binary:
        counts = {k: 1 for k in counts}
    return counts


def dump_walks(path, walks, graph):
    """One walk per line, space-separated external node labels."""
    with open(path, "w", encoding="utf-8") as fh:
        for walk in walks:
            fh.write(" ".join(graph.labels[v] for v in walk) + "\n")
