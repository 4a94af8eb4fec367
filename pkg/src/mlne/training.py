"""Negative-sampled SGD on the weighted pairwise objective.

A positive pair (i, j) carries weight alpha*t + beta*h + w from the
pair-weight table; the loss is

    -sum_pairs weight * log sigmoid(u_i . u_j)
    -sum_negatives log sigmoid(-u_i . u_k)

with negatives drawn from a degree^(3/4) noise distribution. The hot
loop is JIT-compiled with numba; the single-threaded path is
bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigError, DivergenceError, EmptyTrainingSetError

DIVERGENCE_NORM = 1e3


@dataclass
class TrainConfig:
    d: int = 128
    alpha: float = 1.0
    beta: float = 1.0
    epochs: int = 5
    negatives_per_positive: int = 5
    lr_init: float = 0.025
    lr_final: float = 0.0001
    sigmoid_clip: float = 6.0
    seed: int = 0
    sample_by_weight: bool = False  # draw pairs prop. to weight instead of weighting the gradient
    # combined weights have heavy tails (hub pairs), and an uncapped weight
    # multiplies the positive gradient, which diverges at the default lr on
    # graphs past a few thousand nodes; 0 disables the cap
    max_weight: float = 25.0

    def __post_init__(self):
        if self.d < 1:
            raise ConfigError("train.d must be >= 1")
        if self.alpha < 0 or self.beta < 0:
            raise ConfigError("train.alpha and train.beta must be >= 0")
        if not (self.lr_init >= self.lr_final > 0):
            raise ConfigError("need train.lr_init >= train.lr_final > 0")
        if self.negatives_per_positive < 1:
            raise ConfigError("train.negatives_per_positive must be >= 1")


class NoiseSampler:
    """Draws nodes with probability proportional to degree^(3/4);
    zero-degree nodes are excluded."""

    def __init__(self, graph):
        mass = np.where(graph.degrees > 0,
                        graph.degrees.astype(np.float64) ** 0.75, 0.0)
        total = mass.sum()
        if total <= 0:
            raise EmptyTrainingSetError("graph has no edges")
        self.probabilities = mass / total
        self.nodes = np.flatnonzero(mass > 0).astype(np.int64)
        self.cdf = np.cumsum(self.probabilities[self.nodes])
        self.cdf[-1] = 1.0

    def sample(self, rng, size):
        r = rng.random(size)
        return self.nodes[np.searchsorted(self.cdf, r, side="right")]


def sigmoid(x, clip=6.0):
    x = min(max(x, -clip), clip)
    return 1.0 / (1.0 + math.exp(-x))


def pair_similarity(U, i, j, clip=6.0):
    """sigmoid of the clamped embedding dot product."""
    return sigmoid(float(np.dot(U[i], U[j])), clip)


def positive_pairs(table, alpha, beta, max_weight=0.0):
    """Arrays (ii, jj, weight) of pairs with positive combined weight."""
    ii, jj, tt, hh, ww = table.arrays()
    weight = alpha * tt + beta * hh + ww
    keep = weight > 0
    if not np.any(keep):
        raise EmptyTrainingSetError("no pair has positive combined weight")
    ii, jj, weight = ii[keep], jj[keep], weight[keep]
    if max_weight > 0:
        weight = np.minimum(weight, max_weight)
    return ii, jj, weight


@njit(cache=True)
def _sgd_step(U, i, j, weight, negatives, lr, clip):
    """One descent step; all gradients use pre-update vector values."""
    d = U.shape[1]
    ui0 = U[i].copy()
    uj0 = U[j].copy()
    dot = 0.0
    for c in range(d):
        dot += ui0[c] * uj0[c]
    if dot > clip:
        dot = clip
    elif dot < -clip:
        dot = -clip
    g_pos = weight / (1.0 + math.exp(dot))  # = weight * sigmoid(-dot)
    for c in range(d):
        U[i, c] += lr * g_pos * uj0[c]
        U[j, c] += lr * g_pos * ui0[c]
    for t in range(negatives.shape[0]):
        k = negatives[t]
        uk0 = U[k].copy()
        dkn = 0.0
        for c in range(d):
            dkn += ui0[c] * uk0[c]
        if dkn > clip:
            dkn = clip
        elif dkn < -clip:
            dkn = -clip
        g_neg = 1.0 / (1.0 + math.exp(-dkn))  # = sigmoid(dot)
        for c in range(d):
            U[i, c] -= lr * g_neg * uk0[c]
            U[k, c] -= lr * g_neg * ui0[c]


def sgd_step(U, i, j, weight, negatives, lr, clip=6.0):
    """Python-callable wrapper over the jitted kernel (in-place)."""
    _sgd_step(U, int(i), int(j),
              float(weight), np.asarray(negatives, dtype=np.int64),
              float(lr), float(clip))


@njit(cache=True)
def _sgd_epoch(U, ii, jj, ww, order, noise_nodes, noise_cdf, k_neg,
               lr_init, lr_final, step_offset, total_steps, clip, seed):
    np.random.seed(seed)
    negatives = np.empty(k_neg, dtype=np.int64)
    for s in range(order.shape[0]):
        idx = order[s]
        i = ii[idx]
        j = jj[idx]
        frac = (step_offset + s) / total_steps
        lr = lr_init + (lr_final - lr_init) * frac
        n_ok = 0
        for t in range(k_neg):
            k = -1
            for _try in range(10):
                r = np.random.random()
                pos = np.searchsorted(noise_cdf, r)
                cand = noise_nodes[pos]
                if cand != i and cand != j:
                    k = cand
                    break
            if k >= 0:
                negatives[n_ok] = k
                n_ok += 1
        _sgd_step(U, i, j, ww[idx], negatives[:n_ok], lr, clip)


def objective_estimate(U, ii, jj, ww, negatives, clip=6.0):
    """Loss value on a frozen sample of positives and negatives."""
    total = 0.0
    for a in range(len(ii)):
        total -= ww[a] * math.log(sigmoid(float(np.dot(U[ii[a]], U[jj[a]])), clip))
    for i, k in negatives:
        total -= math.log(sigmoid(-float(np.dot(U[i], U[k])), clip))
    return total


def init_embeddings(n, d, seed):
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(7,)))
    return (rng.random((n, d)) - 0.5) / d


def train(graph, table, cfg):
    """Run the full SGD schedule and return the n x d embedding matrix."""
    ii, jj, ww = positive_pairs(table, cfg.alpha, cfg.beta, cfg.max_weight)
    U = init_embeddings(graph.n, cfg.d, cfg.seed)
    sampler = NoiseSampler(graph)
    noise_nodes = sampler.nodes
    noise_cdf = sampler.cdf
    order_rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(11,)))
    n_pairs = len(ii)
    total_steps = max(cfg.epochs * n_pairs, 1)
    for epoch in range(cfg.epochs):
        if cfg.sample_by_weight:
            probs = ww / ww.sum()
            order = order_rng.choice(n_pairs, size=n_pairs, p=probs)
            weights = np.ones(n_pairs)
        else:
            order = order_rng.permutation(n_pairs)
            weights = ww
        epoch_seed = int(order_rng.integers(0, 2 ** 31 - 1))
        _sgd_epoch(U, ii, jj, weights, order.astype(np.int64),
                   noise_nodes, noise_cdf, cfg.negatives_per_positive,
                   cfg.lr_init, cfg.lr_final, epoch * n_pairs, total_steps,
                   cfg.sigmoid_clip, epoch_seed)
        norms = np.linalg.norm(U, axis=1)
        if not np.all(np.isfinite(U)) or norms.max() > DIVERGENCE_NORM:
            raise DivergenceError(
                f"embedding norm reached {norms.max():.3g} at epoch {epoch}; "
                "lower the learning rate")
    return U
