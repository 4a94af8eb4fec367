"""Overlapping community detection via affiliation-factor likelihood
maximization (BIGCLAM-style), plus import and connected-component
strategies."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csgraph

from .affiliations import Affiliations, read_affiliations
from .errors import ConfigError, NoCommunitiesFoundError

UNDERFLOW_FLOOR = 1e-10


@dataclass
class BigClamConfig:
    m: int = 0                    # 0 = auto (label count if known, else ceil(sqrt(n)))
    max_iters: int = 100          # full row sweeps
    step_init: float = 0.05
    step_backtrack: float = 0.5
    backtrack_tries: int = 10
    tol: float = 1e-4             # relative log-likelihood improvement per sweep
    threshold_delta: float = 0.0  # 0 = auto: sqrt(-log(1 - 1/n))
    seed: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise ConfigError("bigclam.m must be >= 0")
        if not (0 < self.step_backtrack < 1):
            raise ConfigError("bigclam.step_backtrack must be in (0, 1)")
        if self.tol <= 0:
            raise ConfigError("bigclam.tol must be positive")


def default_threshold(n):
    """Membership cutoff where an affiliation explains more than a
    background edge probability of 1/n."""
    return math.sqrt(-math.log(1.0 - 1.0 / n))


def resolve_m(graph, cfg, num_labels=None):
    if cfg.m > 0:
        return cfg.m
    if num_labels:
        return num_labels
    return int(math.ceil(math.sqrt(graph.n)))


def edge_probability(F, i, j):
    """Probability of an edge between i and j: 1 - exp(-<F_i, F_j>)."""
    return 1.0 - math.exp(-float(np.dot(F[i], F[j])))


def log_likelihood(graph, F, floor=UNDERFLOW_FLOOR):
    """Affiliation-model log-likelihood of the graph under F.

    Sum over edges of log(1 - exp(-<F_i,F_j>)) minus the sum of
    <F_i,F_j> over non-adjacent pairs. The non-edge sum uses the
    aggregate identity
        sum_{i<j} <F_i,F_j> = (||sum_v F_v||^2 - sum_v ||F_v||^2) / 2
    minus the edge dots, so no pair enumeration happens. Edge dots below
    ``floor`` are clamped (and counted with a warning) to keep the log
    finite.
    """
    total = F.sum(axis=0)
    all_pairs = 0.5 * (float(total @ total) - float(np.einsum("ij,ij->", F, F)))
    edge_sum = 0.0
    edge_dot_sum = 0.0
    clamped = 0
    for i, j in graph.edges():
        dot = float(np.dot(F[i], F[j]))
        edge_dot_sum += dot
        if dot < floor:
            clamped += 1
            dot = floor
        edge_sum += math.log(1.0 - math.exp(-dot))
    if clamped:
        warnings.warn(
            f"{clamped} edge affiliations below {floor}; clamped in the "
            "log-likelihood", RuntimeWarning, stacklevel=2)
    return edge_sum - (all_pairs - edge_dot_sum)


def log_likelihood_row(graph, F, v, row=None, total=None, floor=UNDERFLOW_FLOOR):
    """Terms of the log-likelihood that involve node v's factor row."""
    fv = F[v] if row is None else row
    if total is None:
        total = F.sum(axis=0)
    adj = graph.adjacency(v)
    edge_sum = 0.0
    neigh_dot = 0.0
    for j in adj:
        dot = float(np.dot(fv, F[j]))
        neigh_dot += dot
        edge_sum += math.log(1.0 - math.exp(-max(dot, floor)))
    # non-neighbors of v, excluding v itself; ``total`` holds the current
    # rows, so subtracting F[v] removes the old row even when a candidate
    # replacement is being probed
    others = float(np.dot(fv, total - F[v])) - neigh_dot
    return edge_sum - others


def gradient_row(graph, F, v, total=None, floor=UNDERFLOW_FLOOR):
    """Gradient of the log-likelihood w.r.t. factor row v."""
    if total is None:
        total = F.sum(axis=0)
    adj = graph.adjacency(v)
    grad = -(total - F[v])
    for j in adj:
        fj = F[j]
        dot = max(float(np.dot(F[v], fj)), floor)
        e = math.exp(-dot)
        grad += fj * (e / (1.0 - e)) + fj  # edge term + cancel the non-edge term
    return grad


@dataclass
class BigClamResult:
    F: np.ndarray
    affiliations: Affiliations
    converged: bool
    trace: list = field(default_factory=list)  # log-likelihood per sweep
    threshold: float = 0.0
    dropped_communities: int = 0


def fit_bigclam(graph, cfg, num_labels=None):
    """Projected coordinate (row-wise) gradient ascent on the affiliation
    likelihood with backtracking; accepted steps never decrease it.

    Non-convergence is not an error: the best iterate is returned with
    ``converged=False``.
    """
    if graph.num_edges < 1:
        raise NoCommunitiesFoundError("graph has no edges")
    m = resolve_m(graph, cfg, num_labels)
    rng = np.random.default_rng(cfg.seed)
    F = rng.random((graph.n, m)) / math.sqrt(m)

    total = F.sum(axis=0)
    trace = [log_likelihood_total(graph, F)]
    converged = False
    for _ in range(cfg.max_iters):
        for v in range(graph.n):
            grad = gradient_row(graph, F, v, total=total)
            base = log_likelihood_row(graph, F, v, total=total)
            step = cfg.step_init
            old_row = F[v].copy()
            for _try in range(cfg.backtrack_tries):
                cand = np.maximum(old_row + step * grad, 0.0)
                gain = log_likelihood_row(graph, F, v, row=cand, total=total) - base
                if gain > 0:
                    total += cand - old_row
                    F[v] = cand
                    break
                step *= cfg.step_backtrack
        trace.append(log_likelihood_total(graph, F))
        prev, cur = trace[-2], trace[-1]
        if abs(cur - prev) <= cfg.tol * max(1.0, abs(prev)):
            converged = True
            break

    threshold = cfg.threshold_delta or default_threshold(graph.n)
    communities = []
    dropped = 0
    for c in range(m):
        members = np.flatnonzero(F[:, c] >= threshold)
        if members.size:
            communities.append(members)
        else:
            dropped += 1
    if not communities:
        raise NoCommunitiesFoundError(
            f"all factor entries below threshold {threshold:.4f}")
    aff = Affiliations(graph.n, communities)
    return BigClamResult(F=F, affiliations=aff, converged=converged,
                         trace=trace, threshold=threshold,
                         dropped_communities=dropped)


def log_likelihood_total(graph, F):
    """log_likelihood without the underflow warning noise (for traces)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return log_likelihood(graph, F)


def connected_components(graph):
    """Disjoint baseline partition: one community per component."""
    n_comp, labels = csgraph.connected_components(
        graph.to_scipy(), directed=False)
    communities = [np.flatnonzero(labels == c) for c in range(n_comp)]
    return Affiliations(graph.n, communities)


def detect(graph, strategy, bigclam_cfg=None, num_labels=None):
    """Produce Affiliations per a strategy selector string.

    Selectors: "bigclam" or "bigclam:m=K", "import:PATH", "cc".
    """
    if strategy == "cc":
        return connected_components(graph)
    if strategy.startswith("import:"):
        return read_affiliations(strategy[len("import:"):], graph)
    if strategy == "bigclam" or strategy.startswith("bigclam:"):
        cfg = bigclam_cfg or BigClamConfig()
        if strategy.startswith("bigclam:"):
            spec_str = strategy[len("bigclam:"):]
            for part in spec_str.split(","):
                key, _, val = part.partition("=")
                if key != "m" or not val.isdigit():
                    raise ConfigError(f"bad bigclam selector {strategy!r}")
                cfg = BigClamConfig(**{**cfg.__dict__, "m": int(val)})
        return fit_bigclam(graph, cfg, num_labels=num_labels).affiliations
    raise ConfigError(f"unknown community strategy {strategy!r}")
