"""Transductive node classifiers with a scikit-learn flavored surface.

The classifiers are hyperparameter containers in the sklearn sense
(constructor arguments are stored verbatim, get_params/set_params work, the
estimators clone), while fit takes the graph alongside features and labels
because the operators are functions of the graph itself.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import ParseError
from .graph import Graph, adjacency, matrix_power, normalize_sym
from .layers import LayerStack, softmax_cross_entropy
from .reduce import apply_reduction, fit_reducer, make_reducer
from .tensors import (
    DEFAULT_ENUMERATION_CAP,
    Semantics,
    build_simple_path_tensor,
    build_walk_tensor,
    normalize_tensor,
)
from .validation import as_float_matrix


def masked_accuracy(predictions, labels, mask) -> float:
    """Exact fraction of correct predictions over the masked nodes."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    mask = np.asarray(mask, dtype=bool)
    count = int(mask.sum())
    if count == 0:
        raise ValueError("mask selects no nodes")
    return float((predictions[mask] == labels[mask]).sum() / count)


class _GraphClassifier(BaseEstimator):
    """Shared full-batch training loop; subclasses provide the operator bank."""

    def _check_powers(self):
        powers = tuple(int(p) for p in self.powers)
        if not powers:
            raise ValueError("powers must be nonempty")
        if len(set(powers)) != len(powers):
            raise ValueError("powers must be distinct")
        if any(p < 0 for p in powers):
            raise ValueError("powers must be nonnegative")
        return powers

    def fit(self, graph: Graph, X, y, train_mask=None, val_mask=None, test_mask=None):
        """Train on one graph; evaluation masks are optional and only logged."""
        X = as_float_matrix(X, "X")
        y = np.asarray(y, dtype=np.int64)
        n = graph.n
        if X.shape[0] != n:
            raise ValueError("features must have one row per node")
        if y.shape != (n,):
            raise ValueError("labels must have one entry per node")
        if train_mask is None:
            train_mask = np.ones(n, dtype=bool)
        train_mask = np.asarray(train_mask, dtype=bool)
        num_classes = int(y.max()) + 1
        if num_classes < 2:
            raise ValueError("need at least two classes")
        kind, operators = self._operator_bank(graph)
        stack = LayerStack(
            kind,
            operators,
            X.shape[1],
            tuple(int(w) for w in self.hidden_dims),
            num_classes,
            activation=self.activation,
            aggregation=getattr(self, "aggregation", "mean"),
            seed=self.seed,
        )
        history = []
        for epoch in range(1, int(self.epochs) + 1):
            logits = stack.forward(X)
            loss, grad = softmax_cross_entropy(logits, y, train_mask)
            predictions = logits.argmax(axis=1)
            record = {
                "epoch": epoch,
                "loss": float(loss),
                "train_acc": masked_accuracy(predictions, y, train_mask),
            }
            if val_mask is not None:
                record["val_acc"] = masked_accuracy(predictions, y, val_mask)
            if test_mask is not None:
                record["test_acc"] = masked_accuracy(predictions, y, test_mask)
            history.append(record)
            stack.backward_and_step(grad, float(self.learning_rate))
        logits = stack.forward(X)
        loss, _ = softmax_cross_entropy(logits, y, train_mask)
        predictions = logits.argmax(axis=1)
        final = {"loss": float(loss), "train_acc": masked_accuracy(predictions, y, train_mask)}
        if val_mask is not None:
            final["val_acc"] = masked_accuracy(predictions, y, val_mask)
        if test_mask is not None:
            final["test_acc"] = masked_accuracy(predictions, y, test_mask)
        self.stack_ = stack
        self.classes_ = np.arange(num_classes)
        self.history_ = history
        self.final_metrics_ = final
        self.features_ = X
        return self

    def _require_fitted(self):
        if not hasattr(self, "stack_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet")

    def predict_logits(self, X=None) -> np.ndarray:
        """Logits for all nodes; X defaults to the features seen at fit time."""
        self._require_fitted()
        if X is None:
            if self.features_ is None:
                raise ValueError(
                    "this classifier was restored from a checkpoint; pass features explicitly"
                )
            features = self.features_
        else:
            features = as_float_matrix(X, "X")
        return self.stack_.forward(features)

    def predict(self, X=None) -> np.ndarray:
        """Predicted class per node; argmax ties go to the lowest class index."""
        return self.predict_logits(X).argmax(axis=1)

    def to_checkpoint(self) -> dict:
        """JSON-ready checkpoint: hyperparameters plus all weight matrices."""
        self._require_fitted()
        params = {
            key: list(value) if isinstance(value, tuple) else value
            for key, value in self.get_params().items()
        }
        return {
            "model": type(self).__name__,
            "params": params,
            "in_dim": int(self.stack_.layer_weights[0][0].shape[0]),
            "num_classes": int(self.classes_.size),
            "weights": {
                "layers": [[w.tolist() for w in layer] for layer in self.stack_.layer_weights],
                "head_w": self.stack_.head_w.tolist(),
                "head_b": self.stack_.head_b.tolist(),
            },
        }


class MixHopClassifier(_GraphClassifier):
    """Power-concatenation classifier on (optionally normalized) adjacency powers."""

    def __init__(
        self,
        powers=(0, 1, 2),
        hidden_dims=(16,),
        activation="relu",
        learning_rate=0.05,
        epochs=200,
        seed=0,
        normalize_adjacency=False,
    ):
        self.powers = powers
        self.hidden_dims = hidden_dims
        self.activation = activation
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.seed = seed
        self.normalize_adjacency = normalize_adjacency

    def _operator_bank(self, graph: Graph):
        powers = self._check_powers()
        a = adjacency(graph)
        if self.normalize_adjacency:
            base = normalize_sym(a)
            ops = [np.linalg.matrix_power(base, p) for p in powers]
        else:
            ops = [matrix_power(a, p).astype(np.float64) for p in powers]
        return "mixhop", ops


class THopClassifier(_GraphClassifier):
    """Tensor-slice classifier over depth-compressed occurrence tensors.

    One occurrence tensor is built per power under the chosen semantics, its
    depth fibers are compressed with the chosen reduction (fitted per power),
    and the resulting d slices feed the shared-weight layer.  The 'sum'
    reduction always yields d = 1 and ignores the depth parameter; its slice
    is computed from the integer tensor, so it reproduces the plain count
    matrix bit for bit.
    """

    def __init__(
        self,
        powers=(0, 1, 2),
        depth=4,
        reduction="pca",
        semantics="walk",
        aggregation="mean",
        hidden_dims=(16,),
        activation="relu",
        learning_rate=0.05,
        epochs=200,
        seed=0,
        reduction_seed=0,
        enumeration_cap=DEFAULT_ENUMERATION_CAP,
    ):
        self.powers = powers
        self.depth = depth
        self.reduction = reduction
        self.semantics = semantics
        self.aggregation = aggregation
        self.hidden_dims = hidden_dims
        self.activation = activation
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.seed = seed
        self.reduction_seed = reduction_seed
        self.enumeration_cap = enumeration_cap

    def _build_tensor(self, graph: Graph, power: int):
        semantics = Semantics(self.semantics)
        if semantics is Semantics.WALK:
            return build_walk_tensor(graph, power)
        return build_simple_path_tensor(graph, power, cap=self.enumeration_cap)

    def _operator_bank(self, graph: Graph):
        powers = self._check_powers()
        banks = []
        for power in powers:
            raw = self._build_tensor(graph, power)
            if self.reduction == "sum":
                # integer depth sums divide exactly by (power + 1)
                slice0 = raw.values.sum(axis=2).astype(np.float64) / (power + 1)
                banks.append([slice0])
                continue
            normalized = normalize_tensor(raw)
            reducer = make_reducer(self.reduction, d=int(self.depth), seed=self.reduction_seed)
            reduced = apply_reduction(normalized, fit_reducer(normalized, reducer))
            banks.append(reduced.slices())
        return "thop", banks


_CHECKPOINT_CLASSES = {
    "MixHopClassifier": MixHopClassifier,
    "THopClassifier": THopClassifier,
}
_TUPLE_PARAMS = ("powers", "hidden_dims")


def save_checkpoint(classifier, path) -> None:
    """Write a fitted classifier's checkpoint JSON to disk."""
    Path(path).write_text(json.dumps(classifier.to_checkpoint(), indent=2) + "\n")


def classifier_from_checkpoint(doc: dict, graph: Graph):
    """Rebuild a fitted classifier from a checkpoint document and its graph.

    Operators are rebuilt from the graph (they are not stored); the restored
    classifier predicts but has no training history, and predict requires
    explicit features.
    """
    try:
        cls = _CHECKPOINT_CLASSES[doc["model"]]
        params = dict(doc["params"])
        for key in _TUPLE_PARAMS:
            if key in params:
                params[key] = tuple(params[key])
        clf = cls(**params)
        kind, operators = clf._operator_bank(graph)
        stack = LayerStack(
            kind,
            operators,
            int(doc["in_dim"]),
            tuple(int(w) for w in clf.hidden_dims),
            int(doc["num_classes"]),
            activation=clf.activation,
            aggregation=getattr(clf, "aggregation", "mean"),
            seed=clf.seed,
        )
        weights = doc["weights"]
        stack.layer_weights = [
            [np.asarray(w, dtype=np.float64) for w in layer] for layer in weights["layers"]
        ]
        stack.head_w = np.asarray(weights["head_w"], dtype=np.float64)
        stack.head_b = np.asarray(weights["head_b"], dtype=np.float64)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad checkpoint document: {exc}") from None
    clf.stack_ = stack
    clf.classes_ = np.arange(int(doc["num_classes"]))
    clf.history_ = []
    clf.final_metrics_ = {}
    clf.features_ = None
    return clf


def load_checkpoint(path, graph: Graph):
    """Read a checkpoint JSON from disk and rebuild the classifier."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid checkpoint JSON: {exc}") from None
    return classifier_from_checkpoint(doc, graph)
