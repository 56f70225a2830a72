"""Runtime enforcement: classify an execution, then pad it to its target.

A small CART-style decision tree is trained on per-execution feature vectors
(simulated instrumentation counters for the synthetic benchmarks, or
time-derived ratios as a fallback) labeled with observation classes.  At
enforcement time each secret draws one target class from its policy row, the
tree classifies every execution, and the execution is padded by the gap
between the predicted class representative and the target representative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .clustering import ObservationClassSet, cluster_functions
from .entropy import EntropyMeasure, entropy
from .policy import MitigationPolicy, ensure_valid
from .timing import TimingDataset

__all__ = [
    "FeatureVector",
    "FeatureTable",
    "TreeLeaf",
    "TreeSplit",
    "DecisionTree",
    "learn_tree",
    "mod_exp_counts",
    "branch_loop_counts",
    "counter_features",
    "timing_features",
    "training_samples",
    "EnforcementReport",
    "enforce",
    "report_to_json",
    "tree_to_json",
    "tree_from_json",
    "write_tree",
]

FeatureVector = Mapping[str, float]
# secret id -> one FeatureVector per grid point, aligned with the dataset grid
FeatureTable = Mapping[int, Sequence[FeatureVector]]

RECLUSTER_EPS = 1e-9


@dataclass(frozen=True)
class TreeLeaf:
    class_id: int


@dataclass(frozen=True)
class TreeSplit:
    feature: int
    threshold: float
    left: "TreeSplit | TreeLeaf"
    right: "TreeSplit | TreeLeaf"


@dataclass(frozen=True)
class DecisionTree:
    root: TreeSplit | TreeLeaf
    feature_names: tuple[str, ...]
    max_depth: int
    train_accuracy: float

    def predict(self, features: FeatureVector) -> int:
        node = self.root
        while isinstance(node, TreeSplit):
            value = float(features[self.feature_names[node.feature]])
            node = node.left if value <= node.threshold else node.right
        return node.class_id

    def _predict_row(self, row: np.ndarray) -> int:
        node = self.root
        while isinstance(node, TreeSplit):
            node = node.left if row[node.feature] <= node.threshold else node.right
        return node.class_id


def _gini(counts: np.ndarray) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - (p * p).sum())


def _majority(labels: np.ndarray) -> int:
    ids, counts = np.unique(labels, return_counts=True)
    return int(ids[np.argmax(counts)])  # np.argmax takes the smallest id on ties


def _grow(x: np.ndarray, y: np.ndarray, depth: int, max_depth: int, min_leaf: int):
    n_classes = int(y.max()) + 1
    counts = np.bincount(y, minlength=n_classes)
    parent_gini = _gini(counts)
    if depth >= max_depth or parent_gini == 0.0 or y.size < 2 * min_leaf:
        return TreeLeaf(_majority(y))
    best = None
    for f in range(x.shape[1]):
        order = np.argsort(x[:, f], kind="stable")
        xs, ys = x[order, f], y[order]
        left_counts = np.zeros(n_classes)
        right_counts = np.bincount(ys, minlength=n_classes).astype(float)
        n = ys.size
        for cut in range(1, n):
            left_counts[ys[cut - 1]] += 1
            right_counts[ys[cut - 1]] -= 1
            if xs[cut - 1] == xs[cut]:
                continue
            if cut < min_leaf or n - cut < min_leaf:
                continue
            impurity = (
                cut * _gini(left_counts) + (n - cut) * _gini(right_counts)
            ) / n
            threshold = (xs[cut - 1] + xs[cut]) / 2.0
            key = (impurity, f, threshold)
            if best is None or key < best[0]:
                best = (key, f, threshold)
    if best is None or best[0][0] >= parent_gini - 1e-12:
        return TreeLeaf(_majority(y))
    _, f, threshold = best
    mask = x[:, f] <= threshold
    return TreeSplit(
        f,
        float(threshold),
        _grow(x[mask], y[mask], depth + 1, max_depth, min_leaf),
        _grow(x[~mask], y[~mask], depth + 1, max_depth, min_leaf),
    )


def learn_tree(
    samples: Sequence[tuple[FeatureVector, int]],
    max_depth: int = 6,
    min_leaf: int = 1,
) -> DecisionTree:
    """Fit a Gini-split CART tree on (features, class id) pairs."""
    if not samples:
        raise ValueError("need at least one training sample")
    if max_depth < 1 or min_leaf < 1:
        raise ValueError("max_depth and min_leaf must be >= 1")
    names = tuple(sorted(samples[0][0]))
    x = np.empty((len(samples), len(names)))
    y = np.empty(len(samples), dtype=int)
    for r, (fv, cid) in enumerate(samples):
        if tuple(sorted(fv)) != names:
            raise ValueError("all samples must share one feature-name set")
        for c, name in enumerate(names):
            v = float(fv[name])
            if v < 0:
                raise ValueError("feature values must be non-negative")
            x[r, c] = v
        y[r] = int(cid)
    if np.any(y < 0):
        raise ValueError("class ids must be non-negative")
    root = _grow(x, y, 0, int(max_depth), int(min_leaf))
    tree = DecisionTree(root, names, int(max_depth), 0.0)
    hits = sum(tree._predict_row(x[r]) == y[r] for r in range(len(samples)))
    return DecisionTree(root, names, int(max_depth), hits / len(samples))


def mod_exp_counts(dataset: TimingDataset) -> np.ndarray:
    """Inner-loop iteration counts setbits(secret) * y for the modexp model."""
    setbits = np.asarray([int(s).bit_count() for s in dataset.secrets], dtype=float)
    return setbits[:, None] * dataset.grid.array[None, :]


def branch_loop_counts(
    dataset: TimingDataset, group_sizes: Sequence[int], slopes: Sequence[float]
) -> np.ndarray:
    """Loop iteration counts slope(secret) * y for the branch-loop model."""
    slope_per_secret = np.repeat(
        np.asarray(slopes, dtype=float), [int(g) for g in group_sizes]
    )
    if slope_per_secret.size != dataset.n_secrets:
        raise ValueError("group sizes do not cover the dataset secrets")
    return slope_per_secret[:, None] * dataset.grid.array[None, :]


def counter_features(
    dataset: TimingDataset, counts: np.ndarray, name: str = "iterations_per_unit"
) -> FeatureTable:
    """Normalize raw counters by the public magnitude so features are stable."""
    counts = np.asarray(counts, dtype=float)
    if counts.shape != dataset.times.shape:
        raise ValueError("counts must be n_secrets x n_grid_points")
    grid = dataset.grid.array
    return {
        secret: [{name: float(counts[i, p] / grid[p])} for p in range(grid.size)]
        for i, secret in enumerate(dataset.secrets)
    }


def timing_features(dataset: TimingDataset) -> FeatureTable:
    """Fallback features when no instrumentation model is available."""
    grid = dataset.grid.array
    return {
        secret: [
            {"time_per_unit": float(dataset.times[i, p] / grid[p])}
            for p in range(grid.size)
        ]
        for i, secret in enumerate(dataset.secrets)
    }


def training_samples(
    features: FeatureTable, classes: ObservationClassSet
) -> list[tuple[FeatureVector, int]]:
    """One labeled sample per execution (secret, grid point)."""
    label = classes.class_of()
    samples: list[tuple[FeatureVector, int]] = []
    for secret, per_point in features.items():
        for fv in per_point:
            samples.append((fv, label[secret]))
    return samples


@dataclass(frozen=True)
class EnforcementReport:
    realized_overhead: float
    misclassification_rate: float
    classes_after: ObservationClassSet
    entropies: tuple[tuple[EntropyMeasure, float, float], ...]

    @property
    def n_classes_after(self) -> int:
        return self.classes_after.k


def enforce(
    dataset: TimingDataset,
    classes: ObservationClassSet,
    policy: MitigationPolicy,
    tree: DecisionTree,
    seed: int,
    features: FeatureTable,
    epsilon: float = RECLUSTER_EPS,
) -> tuple[TimingDataset, EnforcementReport]:
    """Apply a policy through the classifier and measure what actually happened.

    Each secret samples its target class once (deterministic policies skip
    the draw), every execution is padded by the representative gap between
    the predicted class and the target, and the padded dataset is
    re-clustered to report the realized class structure.
    """
    ensure_valid(policy, classes)
    label = classes.class_of()
    reps = np.vstack([c.representative.values for c in classes.classes])
    rng = np.random.default_rng(seed)
    k = classes.k

    targets: dict[int, int] = {}
    for secret in dataset.secrets:
        row = policy.matrix[label[secret]]
        if policy.deterministic:
            targets[secret] = int(np.argmax(row))
        else:
            targets[secret] = int(rng.choice(k, p=row / row.sum()))

    mitigated_times = np.array(dataset.times)
    wrong = 0
    total_cells = dataset.n_secrets * len(dataset.grid)
    for i, secret in enumerate(dataset.secrets):
        per_point = features[secret]
        g = targets[secret]
        for p in range(len(dataset.grid)):
            predicted = tree.predict(per_point[p])
            if predicted != label[secret]:
                wrong += 1
            delay = max(0.0, float(reps[g, p] - reps[predicted, p]))
            mitigated_times[i, p] += delay

    mitigated = dataset.with_times(mitigated_times)
    original_total = float(dataset.times.sum())
    overhead = float(mitigated_times.sum() - original_total) / original_total
    after = cluster_functions(mitigated, epsilon)
    entropies = tuple(
        (m, entropy(classes.sizes, m), entropy(after.sizes, m))
        for m in EntropyMeasure
    )
    report = EnforcementReport(
        realized_overhead=overhead,
        misclassification_rate=wrong / total_cells,
        classes_after=after,
        entropies=entropies,
    )
    return mitigated, report


def report_to_json(report: EnforcementReport) -> dict:
    return {
        "realized_overhead": report.realized_overhead,
        "misclassification_rate": report.misclassification_rate,
        "classes_after": report.n_classes_after,
        "class_sizes_after": [c.size for c in report.classes_after.classes],
        "entropies": [
            {
                "measure": m.value,
                "entropy_before": before,
                "entropy_after": after,
            }
            for m, before, after in report.entropies
        ],
    }


def _node_to_json(node) -> dict:
    if isinstance(node, TreeLeaf):
        return {"kind": "leaf", "class_id": node.class_id}
    return {
        "kind": "split",
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _node_to_json(node.left),
        "right": _node_to_json(node.right),
    }


def _node_from_json(data: dict):
    if data["kind"] == "leaf":
        return TreeLeaf(int(data["class_id"]))
    return TreeSplit(
        int(data["feature"]),
        float(data["threshold"]),
        _node_from_json(data["left"]),
        _node_from_json(data["right"]),
    )


def tree_to_json(tree: DecisionTree) -> dict:
    return {
        "feature_names": list(tree.feature_names),
        "max_depth": tree.max_depth,
        "train_accuracy": tree.train_accuracy,
        "root": _node_to_json(tree.root),
    }


def tree_from_json(data: dict) -> DecisionTree:
    return DecisionTree(
        _node_from_json(data["root"]),
        tuple(data["feature_names"]),
        int(data["max_depth"]),
        float(data["train_accuracy"]),
    )


def write_tree(tree: DecisionTree, path: str | Path) -> None:
    Path(path).write_text(json.dumps(tree_to_json(tree), indent=2) + "\n")
