"""Downstream quality tasks: node classification (micro/macro F1 over
train-ratio sweeps) and network reconstruction (mean average precision
of true neighbors in the embedding-distance ranking)."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import SingleClassSplitError


@dataclass
class ClassifierModel:
    """One-vs-rest logistic regression; weights include a bias column."""

    classes: list
    weights: np.ndarray  # (num_classes, d + 1), bias last
    l2: float = 1.0
    max_iters: int = 200
    tol: float = 1e-6

    def decision_scores(self, X):
        Xb = np.hstack([X, np.ones((X.shape[0], 1))])
        return Xb @ self.weights.T

    def predict(self, X):
        """Argmax class label per row."""
        scores = self.decision_scores(X)
        return [self.classes[k] for k in np.argmax(scores, axis=1)]

    def predict_top(self, X, counts):
        """Top-L label sets per row (multi-label protocol)."""
        scores = self.decision_scores(X)
        out = []
        for row, L in zip(scores, counts):
            top = np.argsort(-row, kind="stable")[:L]
            out.append({self.classes[k] for k in top})
        return out


def _binary_logloss_grad(w, X, y, l2):
    # y in {-1, +1}; bias (last weight) unpenalized
    z = y * (X @ w)
    # log(1 + exp(-z)) computed stably
    loss = np.sum(np.logaddexp(0.0, -z))
    s = -y / (1.0 + np.exp(z))
    grad = X.T @ s
    loss += 0.5 * l2 * np.dot(w[:-1], w[:-1])
    grad[:-1] += l2 * w[:-1]
    return loss, grad


def fit_logreg_ovr(X, label_sets, l2=1.0, max_iters=200, tol=1e-6):
    """Fit one binary L2-regularized logistic model per observed class.

    ``label_sets`` is a sequence of label sets (singletons in the
    single-label case). Deterministic: zero initialization, quasi-Newton
    minimization of the exact loss.
    """
    classes = sorted({c for s in label_sets for c in s})
    if len(classes) < 2:
        raise SingleClassSplitError(
            f"training split contains {len(classes)} class(es)")
    X = np.asarray(X, dtype=np.float64)
    Xb = np.hstack([X, np.ones((X.shape[0], 1))])
    weights = np.zeros((len(classes), Xb.shape[1]))
    for k, cls in enumerate(classes):
        y = np.array([1.0 if cls in s else -1.0 for s in label_sets])
        res = minimize(_binary_logloss_grad, np.zeros(Xb.shape[1]),
                       args=(Xb, y, l2), jac=True, method="L-BFGS-B",
                       options={"maxiter": max_iters, "gtol": tol,
                                "ftol": 1e-12})
        weights[k] = res.x
    return ClassifierModel(classes=classes, weights=weights, l2=l2,
                           max_iters=max_iters, tol=tol)


def micro_macro_f1(true_sets, pred_sets, classes):
    """Micro F1 pools TP/FP/FN over classes; macro averages per-class F1
    unweighted, scoring 0 for classes with no true and no predicted
    positives."""
    tp = {c: 0 for c in classes}
    fp = {c: 0 for c in classes}
    fn = {c: 0 for c in classes}
    for t, p in zip(true_sets, pred_sets):
        for c in p:
            if c in t:
                tp[c] += 1
            else:
                fp[c] += 1
        for c in t:
            if c not in p:
                fn[c] += 1
    sum_tp = sum(tp.values())
    sum_fp = sum(fp.values())
    sum_fn = sum(fn.values())
    denom = 2 * sum_tp + sum_fp + sum_fn
    micro = 2 * sum_tp / denom if denom else 0.0
    per_class = []
    for c in classes:
        d = 2 * tp[c] + fp[c] + fn[c]
        per_class.append(2 * tp[c] / d if d else 0.0)
    macro = float(np.mean(per_class)) if per_class else 0.0
    return micro, macro


@dataclass
class Cell:
    task: str
    ratio: float
    repetition: int
    metric: str
    value: float


@dataclass
class EvalReport:
    cells: list = field(default_factory=list)

    def add(self, task, ratio, repetition, metric, value):
        self.cells.append(Cell(task, ratio, repetition, metric, float(value)))

    def values(self, metric, ratio=None):
        return [c.value for c in self.cells
                if c.metric == metric and (ratio is None or c.ratio == ratio)]

    def mean(self, metric, ratio=None):
        return float(np.mean(self.values(metric, ratio)))

    def std(self, metric, ratio=None):
        return float(np.std(self.values(metric, ratio)))

    def ratios(self):
        return sorted({c.ratio for c in self.cells if c.ratio > 0})


def _stratified_split(indices, label_sets, ratio, rng):
    """Per-class proportional split for single-label data; returns
    (train_idx, test_idx, stratified_ok)."""
    if any(len(s) != 1 for s in label_sets):
        perm = rng.permutation(len(indices))
        cut = max(1, min(len(indices) - 1, int(round(ratio * len(indices)))))
        return ([indices[k] for k in perm[:cut]],
                [indices[k] for k in perm[cut:]], False)
    by_class = {}
    for pos, s in enumerate(label_sets):
        by_class.setdefault(next(iter(s)), []).append(pos)
    train, test = [], []
    for cls in sorted(by_class):
        members = by_class[cls]
        perm = rng.permutation(len(members))
        k = int(round(ratio * len(members)))
        k = max(1, min(len(members) - 1, k)) if len(members) > 1 else 1
        for t in perm[:k]:
            train.append(indices[members[t]])
        for t in perm[k:]:
            test.append(indices[members[t]])
    if not test:
        warnings.warn("stratified split left no test nodes; falling back "
                      "to unstratified", RuntimeWarning, stacklevel=2)
        perm = rng.permutation(len(indices))
        cut = max(1, len(indices) - 1)
        return ([indices[k] for k in perm[:cut]],
                [indices[k] for k in perm[cut:]], False)
    return train, test, True


def classify_and_score(U, label_table, ratios, repetitions=5, seed=0,
                       l2=1.0, max_iters=200, tol=1e-6):
    """Train/test sweeps over ratios with repeated random splits.

    Single-label data gets argmax prediction; multi-label data gets the
    top-L protocol with L equal to the node's true label count.
    """
    nodes = label_table.labeled_nodes()
    label_sets = [label_table.labels[i] for i in nodes]
    multilabel = label_table.is_multilabel()
    report = EvalReport()
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(23,)))
    for ratio in ratios:
        for rep in range(repetitions):
            train_idx, test_idx, _ = _stratified_split(nodes, label_sets,
                                                       ratio, rng)
            pos = {node: k for k, node in enumerate(nodes)}
            model = fit_logreg_ovr(U[train_idx],
                                   [label_sets[pos[i]] for i in train_idx],
                                   l2=l2, max_iters=max_iters, tol=tol)
            true_sets = [label_sets[pos[i]] for i in test_idx]
            if multilabel:
                pred = model.predict_top(U[test_idx],
                                         [len(s) for s in true_sets])
            else:
                pred = [{c} for c in model.predict(U[test_idx])]
            classes = sorted({c for s in label_sets for c in s})
            micro, macro = micro_macro_f1(true_sets, pred, classes)
            report.add("classify", ratio, rep, "micro_f1", micro)
            report.add("classify", ratio, rep, "macro_f1", macro)
    return report


def average_precision_at_degree(distances, true_neighbors, k, self_index):
    """AP of the true neighbor set within the top-k of the distance
    ranking; ties break by ascending node index."""
    n = distances.shape[0]
    order = np.lexsort((np.arange(n), distances))
    order = order[order != self_index][:k]
    hits = 0
    prec_sum = 0.0
    true_set = set(int(v) for v in true_neighbors)
    for rank, node in enumerate(order, start=1):
        if int(node) in true_set:
            hits += 1
            prec_sum += hits / rank
    return prec_sum / hits if hits else 0.0


def reconstruction_ap_values(U, graph):
    """Per-node average precision of true neighbors in the embedding
    distance ranking; isolated nodes are skipped and counted.

    Squared Euclidean distances are used; the ranking (including ties)
    matches plain Euclidean.
    """
    scores = []
    skipped = 0
    sq_norms = np.einsum("ij,ij->i", U, U)
    for i in range(graph.n):
        k = int(graph.degrees[i])
        if k == 0:
            skipped += 1
            continue
        dist = sq_norms + sq_norms[i] - 2.0 * (U @ U[i])
        scores.append(average_precision_at_degree(dist, graph.adjacency(i),
                                                  k, i))
    return scores, skipped


def reconstruct_and_score(U, graph):
    """MAP over all non-isolated nodes; returns (map_score, skipped)."""
    scores, skipped = reconstruction_ap_values(U, graph)
    return float(np.mean(scores)), skipped


def write_records(path, report):
    """Machine-readable per-cell records, tab-separated."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("task\tratio\trepetition\tmetric\tvalue\n")
        for c in report.cells:
            fh.write(f"{c.task}\t{c.ratio:g}\t{c.repetition}\t"
                     f"{c.metric}\t{c.value:.6f}\n")


def format_table(report):
    """Human-readable summary: mean (std) per metric per ratio."""
    metrics = sorted({c.metric for c in report.cells})
    ratios = sorted({c.ratio for c in report.cells})
    lines = ["ratio  " + "  ".join(f"{m:>18}" for m in metrics)]
    for r in ratios:
        row = [f"{r:5.2f}"]
        for m in metrics:
            vals = report.values(m, r)
            row.append(f"{np.mean(vals):9.4f} ({np.std(vals):.4f})")
        lines.append("  ".join(row))
    return "\n".join(lines) + "\n"
