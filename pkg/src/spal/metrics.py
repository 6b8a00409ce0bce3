"""Classification metrics computed over an explicit evaluation subset."""

from __future__ import annotations

import numpy as np


def _eval_idx(eval_set) -> np.ndarray:
    idx = np.asarray(sorted(eval_set), dtype=np.int64)
    if idx.size == 0:
        raise ValueError("eval set must be non-empty")
    return idx


def accuracy(predictions: np.ndarray, labels: np.ndarray, eval_set) -> float:
    """Fraction of eval-set nodes whose predicted class matches the label."""
    idx = _eval_idx(eval_set)
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    return float(np.mean(predictions[idx] == labels[idx]))


def macro_f1(
    predictions: np.ndarray, labels: np.ndarray, eval_set, num_classes: int
) -> float:
    """Unweighted mean of one-vs-rest F1 over all ``num_classes`` classes.

    Precision (recall) is 0 when its denominator is 0, and F1 is 0 when
    precision + recall is 0, so classes absent from the eval set contribute
    a zero term.
    """
    idx = _eval_idx(eval_set)
    preds = np.asarray(predictions)[idx]
    truth = np.asarray(labels)[idx]
    f1_sum = 0.0
    for c in range(num_classes):
        tp = np.sum((preds == c) & (truth == c))
        fp = np.sum((preds == c) & (truth != c))
        fn = np.sum((preds != c) & (truth == c))
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        if precision + recall > 0:
            f1_sum += 2.0 * precision * recall / (precision + recall)
    return f1_sum / num_classes
