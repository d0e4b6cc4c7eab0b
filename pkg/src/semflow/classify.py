"""Classification of motif feature vectors with stratified cross-validation.

Four classifiers are implemented from scratch with fixed hyperparameters so
that results are bit-reproducible: kNN (k=5, Euclidean), Gaussian naive
Bayes, a CART decision tree grown to purity, and a linear SVM trained
one-vs-rest with Pegasos-style subgradient descent. Features are
standardized per fold using training-fold statistics only.

Significance is a one-sided exact binomial tail against the chance level
1/(number of classes); the reported p-value treats round(mean accuracy * n)
of the n documents as successes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidArgument, InvalidDataset

__all__ = [
    "LabeledDataset",
    "CVReport",
    "CLASSIFIERS",
    "stratified_folds",
    "standardize_params",
    "train_predict",
    "run_cv",
    "evaluate",
    "significance",
]

CLASSIFIERS = ("knn", "gaussian-nb", "cart", "linear-svm")

_KNN_K = 5
_NB_VAR_FLOOR = 1e-9
_SVM_EPOCHS = 1000
_SVM_LAMBDA = 1e-2


@dataclass
class LabeledDataset:
    """Feature matrix with one class label per document."""

    doc_ids: list[str]
    X: np.ndarray  # (n, f) float64
    y: list[str]

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        if not (len(self.doc_ids) == self.X.shape[0] == len(self.y)):
            raise InvalidDataset("doc_ids, X and y must have equal length")
        if len(set(self.doc_ids)) != len(self.doc_ids):
            raise InvalidDataset("duplicate doc_ids")

    def __len__(self) -> int:
        return len(self.y)

    @property
    def classes(self) -> list[str]:
        return sorted(set(self.y))


@dataclass
class CVReport:
    """Cross-validation outcome for one (classifier, strategy, threshold)."""

    classifier: str
    strategy: str
    threshold: float
    fold_accuracies: list[float]
    mean_accuracy: float
    p_value: float
    seed: int
    n: int = 0
    classes: list[str] = field(default_factory=list)


def stratified_folds(dataset: LabeledDataset, folds: int = 10, seed: int = 0) -> np.ndarray:
    """Assign each row to a fold, preserving class proportions.

    Rows of each class are shuffled with the seeded generator and dealt
    round-robin, so per-class fold sizes differ by at most one. When the
    smallest class has fewer members than ``folds`` the fold count drops to
    that size (with a warning).
    """
    classes = dataset.classes
    if len(classes) < 2:
        raise InvalidDataset("need at least 2 classes")
    min_size = min(sum(1 for lab in dataset.y if lab == c) for c in classes)
    if min_size < folds:
        warnings.warn(
            f"smallest class has {min_size} members; reducing folds from {folds} to {min_size}",
            stacklevel=2,
        )
        folds = min_size
    if folds < 2:
        raise InvalidDataset("smallest class too small for cross-validation")
    rng = np.random.Generator(np.random.PCG64(seed))
    assignment = np.empty(len(dataset), dtype=np.int64)
    for label in classes:
        members = np.array([i for i, lab in enumerate(dataset.y) if lab == label])
        rng.shuffle(members)
        for pos, row in enumerate(members.tolist()):
            assignment[row] = pos % folds
    return assignment


def standardize_params(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-feature mean and standard deviation; constant features get sd 1."""
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    sd = np.where(sd == 0.0, 1.0, sd)
    return mean, sd


def _majority(labels: Sequence[str]) -> str:
    # ties resolve to the smallest label
    best, best_count = None, -1
    for lab in sorted(set(labels)):
        count = sum(1 for x in labels if x == lab)
        if count > best_count:
            best, best_count = lab, count
    return best


def _predict_knn(train_X, train_y, test_X):
    k = min(_KNN_K, len(train_y))
    out = []
    train_idx = np.arange(len(train_y))
    for x in test_X:
        dist = np.sqrt(((train_X - x) ** 2).sum(axis=1))
        order = np.lexsort((train_idx, dist))[:k]  # distance ties -> lower index
        out.append(_majority([train_y[i] for i in order]))
    return out


def _predict_gaussian_nb(train_X, train_y, test_X):
    classes = sorted(set(train_y))
    n = len(train_y)
    stats = []
    for label in classes:
        rows = train_X[[i for i, lab in enumerate(train_y) if lab == label]]
        mean = rows.mean(axis=0)
        var = np.maximum(rows.var(axis=0), _NB_VAR_FLOOR)
        prior = math.log(rows.shape[0] / n)
        stats.append((label, mean, var, prior))
    out = []
    for x in test_X:
        best, best_ll = None, -np.inf
        for label, mean, var, prior in stats:
            ll = prior - 0.5 * float(
                np.sum(np.log(2.0 * np.pi * var) + (x - mean) ** 2 / var)
            )
            if ll > best_ll:  # ties -> smallest label (classes sorted)
                best, best_ll = label, ll
        out.append(best)
    return out


def _gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.sum(p * p))


class _CartNode:
    __slots__ = ("feature", "threshold", "left", "right", "label")

    def __init__(self):
        self.feature = None
        self.threshold = None
        self.left = None
        self.right = None
        self.label = None


def _grow_cart(X, y_idx, n_classes):
    node = _CartNode()
    counts = np.bincount(y_idx, minlength=n_classes)
    if _gini(counts) == 0.0:
        node.label = int(y_idx[0])
        return node
    n, f = X.shape
    parent_impurity = _gini(counts)
    best = None  # (decrease, feature, threshold) with earliest feature/threshold winning ties
    for feat in range(f):
        values = X[:, feat]
        distinct = np.unique(values)
        for lo, hi in zip(distinct[:-1], distinct[1:]):
            thr = (lo + hi) / 2.0
            left = values <= thr
            left_counts = np.bincount(y_idx[left], minlength=n_classes)
            right_counts = counts - left_counts
            nl = left_counts.sum()
            decrease = parent_impurity - (
                nl / n * _gini(left_counts) + (n - nl) / n * _gini(right_counts)
            )
            if best is None or decrease > best[0]:
                best = (decrease, feat, thr)
    if best is None or best[0] <= 0.0:
        node.label = int(np.flatnonzero(counts == counts.max())[0])  # majority, smallest label
        return node
    _, feat, thr = best
    mask = X[:, feat] <= thr
    node.feature = feat
    node.threshold = thr
    node.left = _grow_cart(X[mask], y_idx[mask], n_classes)
    node.right = _grow_cart(X[~mask], y_idx[~mask], n_classes)
    return node


def _predict_cart(train_X, train_y, test_X):
    classes = sorted(set(train_y))
    index = {lab: i for i, lab in enumerate(classes)}
    y_idx = np.array([index[lab] for lab in train_y])
    root = _grow_cart(train_X, y_idx, len(classes))
    out = []
    for x in test_X:
        node = root
        while node.label is None:
            node = node.left if x[node.feature] <= node.threshold else node.right
        out.append(classes[node.label])
    return out


def _predict_linear_svm(train_X, train_y, test_X, seed):
    """One-vs-rest Pegasos: epochs=1000, step 1/(lambda*t), lambda=1e-2.

    The bias is an augmented constant feature. All binary problems share the
    same seed-fixed sample order per epoch.
    """
    classes = sorted(set(train_y))
    n, f = train_X.shape
    Xa = np.hstack([train_X, np.ones((n, 1))])
    Y = np.array(
        [[1.0 if lab == c else -1.0 for c in classes] for lab in train_y]
    )  # (n, n_classes)
    W = np.zeros((len(classes), f + 1))
    rng = np.random.Generator(np.random.PCG64(seed))
    t = 0
    for _ in range(_SVM_EPOCHS):
        for i in rng.permutation(n).tolist():
            t += 1
            eta = 1.0 / (_SVM_LAMBDA * t)
            x = Xa[i]
            margins = Y[i] * (W @ x)
            W *= 1.0 - eta * _SVM_LAMBDA
            hinge = margins < 1.0
            if hinge.any():
                W[hinge] += eta * Y[i, hinge][:, None] * x
    test_a = np.hstack([test_X, np.ones((len(test_X), 1))])
    scores = test_a @ W.T
    return [classes[int(np.argmax(row))] for row in scores]  # argmax ties -> smallest label


def train_predict(kind, train_X, train_y, test_X, seed: int = 0):
    """Fit the named classifier on (train_X, train_y) and predict test_X.

    Features are assumed comparable across columns (standardize beforehand;
    :func:`run_cv` does this per fold).
    """
    if len(train_y) == 0:
        raise InvalidDataset("empty training set")
    train_X = np.asarray(train_X, dtype=np.float64)
    test_X = np.asarray(test_X, dtype=np.float64)
    if kind == "knn":
        return _predict_knn(train_X, train_y, test_X)
    if kind == "gaussian-nb":
        return _predict_gaussian_nb(train_X, train_y, test_X)
    if kind == "cart":
        return _predict_cart(train_X, train_y, test_X)
    if kind == "linear-svm":
        return _predict_linear_svm(train_X, train_y, test_X, seed)
    raise ValueError(f"unknown classifier {kind!r}")


def run_cv(
    dataset: LabeledDataset, kind: str, folds: int = 10, seed: int = 0
) -> tuple[list[float], float]:
    """Stratified k-fold accuracies and their mean for one classifier."""
    assignment = stratified_folds(dataset, folds=folds, seed=seed)
    n_folds = int(assignment.max()) + 1
    accuracies = []
    for fold in range(n_folds):
        test_mask = assignment == fold
        train_X = dataset.X[~test_mask]
        test_X = dataset.X[test_mask]
        train_y = [lab for lab, m in zip(dataset.y, test_mask) if not m]
        test_y = [lab for lab, m in zip(dataset.y, test_mask) if m]
        mean, sd = standardize_params(train_X)
        predictions = train_predict(
            kind, (train_X - mean) / sd, train_y, (test_X - mean) / sd, seed=seed
        )
        correct = sum(1 for p, t in zip(predictions, test_y) if p == t)
        accuracies.append(correct / len(test_y))
    return accuracies, float(np.mean(accuracies))


def evaluate(
    datasets_by_threshold: Mapping[float, LabeledDataset],
    kind: str,
    strategy: str,
    seed: int = 0,
    folds: int = 10,
) -> CVReport:
    """Cross-validate over a threshold grid and report the best mean accuracy.

    Ties resolve toward the smaller threshold. The grid is the mapping's keys;
    pass {0.0: dataset} for the unweighted strategy.
    """
    if not datasets_by_threshold:
        raise InvalidDataset("empty threshold grid")
    best = None
    for threshold in sorted(datasets_by_threshold):
        dataset = datasets_by_threshold[threshold]
        fold_acc, mean_acc = run_cv(dataset, kind, folds=folds, seed=seed)
        if best is None or mean_acc > best[0]:
            best = (mean_acc, threshold, fold_acc, dataset)
    mean_acc, threshold, fold_acc, dataset = best
    n = len(dataset)
    chance = 1.0 / len(dataset.classes)
    p = significance(round(mean_acc * n), n, chance)
    return CVReport(
        classifier=kind,
        strategy=strategy,
        threshold=threshold,
        fold_accuracies=fold_acc,
        mean_accuracy=mean_acc,
        p_value=p,
        seed=seed,
        n=n,
        classes=dataset.classes,
    )


def significance(successes: int, n: int, chance: float) -> float:
    """One-sided exact binomial tail P[X >= successes], X ~ Binomial(n, chance)."""
    if n < 0 or not 0 <= successes <= n:
        raise InvalidArgument(f"successes {successes} outside 0..{n}")
    if not 0.0 < chance < 1.0:
        raise InvalidArgument(f"chance {chance} outside (0, 1)")
    return float(
        sum(
            math.comb(n, i) * chance**i * (1.0 - chance) ** (n - i)
            for i in range(successes, n + 1)
        )
    )
