"""Synthetic benchmarks: block-model datasets, training runs, comparisons.

The block model is the benchmark substrate because path counts differ inside
and across blocks, which gives the depth fibers genuine variance.  Every
pipeline output is a pure function of (dataset seed, model seed, config);
wall-clock time is reported on stdout and kept out of artifact files so that
repeated runs produce byte-identical artifacts.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .errors import ParseError
from .graph import Graph, parse_edge_list, serialize_edge_list
from .models import MixHopClassifier, THopClassifier
from .tensors import DEFAULT_ENUMERATION_CAP

EDGES_FILE = "edges.txt"
LABELS_FILE = "labels.txt"
FEATURES_FILE = "features.txt"
SPLIT_FILE = "split.txt"

_SPLIT_TAGS = ("train", "val", "test")


@dataclass(eq=False)
class LabeledGraph:
    """A graph with node labels, features, and a train/val/test split."""

    graph: Graph
    labels: np.ndarray = field(repr=False)
    features: np.ndarray = field(repr=False)
    train_mask: np.ndarray = field(repr=False)
    val_mask: np.ndarray = field(repr=False)
    test_mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = self.graph.n
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.features = np.asarray(self.features, dtype=np.float64)
        self.train_mask = np.asarray(self.train_mask, dtype=bool)
        self.val_mask = np.asarray(self.val_mask, dtype=bool)
        self.test_mask = np.asarray(self.test_mask, dtype=bool)
        if self.labels.shape != (n,):
            raise ValueError("labels must have one entry per node")
        if n and self.labels.min() < 0:
            raise ValueError("labels must be nonnegative class ids")
        if self.features.ndim != 2 or self.features.shape[0] != n:
            raise ValueError("features must have one row per node")
        for mask in (self.train_mask, self.val_mask, self.test_mask):
            if mask.shape != (n,):
                raise ValueError("masks must have one entry per node")
        both = (
            (self.train_mask & self.val_mask)
            | (self.train_mask & self.test_mask)
            | (self.val_mask & self.test_mask)
        )
        if both.any():
            raise ValueError("split masks must be disjoint")
        if not (self.train_mask | self.val_mask | self.test_mask).all():
            raise ValueError("split masks must cover every node")
        train_classes = set(np.unique(self.labels[self.train_mask]).tolist())
        if not set(np.unique(self.labels).tolist()) <= train_classes:
            raise ValueError("every class needs at least one training node")

    @property
    def num_classes(self) -> int:
        return int(self.labels.max()) + 1


def generate_sbm(block_sizes, p_in: float, p_out: float, seed: int, noise_scale: float = 0.5) -> LabeledGraph:
    """Stochastic block model dataset with block labels and noisy indicator features.

    Edges are sampled independently (probability p_in within a block, p_out
    across blocks); features are the one-hot block indicator plus
    N(0, noise_scale^2) noise; the 60/20/20 split is a stratified seeded
    shuffle.  The result is a pure function of the arguments.
    """
    sizes = [int(b) for b in block_sizes]
    if len(sizes) < 2:
        raise ValueError("need at least two blocks")
    if any(b <= 0 for b in sizes):
        raise ValueError("block sizes must be positive")
    if not 0.0 <= p_out < p_in <= 1.0:
        raise ValueError("need 0 <= p_out < p_in <= 1")
    n = sum(sizes)
    labels = np.repeat(np.arange(len(sizes)), sizes)
    rng = np.random.Generator(np.random.PCG64(seed))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            p = p_in if labels[u] == labels[v] else p_out
            if rng.random() < p:
                edges.append((u, v))
    graph = Graph.from_edges(edges, n=n)
    features = np.zeros((n, len(sizes)))
    features[np.arange(n), labels] = 1.0
    features += rng.normal(0.0, noise_scale, size=features.shape)
    train = np.zeros(n, dtype=bool)
    val = np.zeros(n, dtype=bool)
    test = np.zeros(n, dtype=bool)
    for c in range(len(sizes)):
        members = rng.permutation(np.flatnonzero(labels == c))
        n_train = max(1, int(round(0.6 * members.size)))
        n_val = int(round(0.2 * members.size))
        train[members[:n_train]] = True
        val[members[n_train : n_train + n_val]] = True
        test[members[n_train + n_val :]] = True
    return LabeledGraph(graph, labels, features, train, val, test)


def save_dataset(dataset: LabeledGraph, directory) -> None:
    """Write the four dataset files: edges, labels, features, split."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / EDGES_FILE).write_text(serialize_edge_list(dataset.graph))
    n = dataset.graph.n
    labels = "\n".join(f"{i} {int(dataset.labels[i])}" for i in range(n)) + "\n"
    (directory / LABELS_FILE).write_text(labels)
    rows = []
    for row in dataset.features:
        rows.append(" ".join(repr(float(x)) for x in row))
    (directory / FEATURES_FILE).write_text("\n".join(rows) + "\n")
    tags = []
    for i in range(n):
        if dataset.train_mask[i]:
            tag = "train"
        elif dataset.val_mask[i]:
            tag = "val"
        else:
            tag = "test"
        tags.append(f"{i} {tag}")
    (directory / SPLIT_FILE).write_text("\n".join(tags) + "\n")


def _read_lines(directory: Path, name: str) -> list[str]:
    path = directory / name
    if not path.is_file():
        raise ParseError(f"missing dataset file {name}")
    return [line for line in path.read_text().splitlines() if line.strip()]


def load_dataset(directory) -> LabeledGraph:
    """Read a dataset directory written by save_dataset."""
    directory = Path(directory)
    edges_path = directory / EDGES_FILE
    if not edges_path.is_file():
        raise ParseError(f"missing dataset file {EDGES_FILE}")
    graph = parse_edge_list(edges_path.read_text())
    n = graph.n
    labels = np.full(n, -1, dtype=np.int64)
    for line in _read_lines(directory, LABELS_FILE):
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"bad label line {line!r}")
        try:
            node, label = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"bad label line {line!r}") from None
        if not 0 <= node < n:
            raise ParseError(f"label for unknown node {node}")
        labels[node] = label
    if (labels < 0).any():
        raise ParseError("labels file does not cover every node")
    feature_rows = _read_lines(directory, FEATURES_FILE)
    if len(feature_rows) != n:
        raise ParseError(f"features file has {len(feature_rows)} rows, expected {n}")
    try:
        features = np.array([[float(tok) for tok in row.split()] for row in feature_rows])
    except ValueError:
        raise ParseError("bad features file (non-numeric value or ragged rows)") from None
    if features.ndim != 2:
        raise ParseError("features file rows have inconsistent widths")
    masks = {tag: np.zeros(n, dtype=bool) for tag in _SPLIT_TAGS}
    seen = np.zeros(n, dtype=bool)
    for line in _read_lines(directory, SPLIT_FILE):
        tokens = line.split()
        if len(tokens) != 2 or tokens[1] not in _SPLIT_TAGS:
            raise ParseError(f"bad split line {line!r}")
        node = int(tokens[0])
        if not 0 <= node < n or seen[node]:
            raise ParseError(f"bad or repeated node {node} in split file")
        seen[node] = True
        masks[tokens[1]][node] = True
    if not seen.all():
        raise ParseError("split file does not cover every node")
    return LabeledGraph(graph, labels, features, masks["train"], masks["val"], masks["test"])


@dataclass(frozen=True)
class ExperimentConfig:
    """One model configuration for the training pipeline."""

    name: str
    model: str  # "mixhop" | "thop"
    powers: tuple[int, ...] = (0, 1, 2)
    hidden_dims: tuple[int, ...] = (16,)
    depth: int = 4
    reduction: str = "pca"
    semantics: str = "walk"
    activation: str = "relu"
    aggregation: str = "mean"
    learning_rate: float = 0.05
    epochs: int = 200
    seed: int = 0
    normalize_adjacency: bool = False
    reduction_seed: int = 0
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP

    def __post_init__(self):
        if self.model not in ("mixhop", "thop"):
            raise ValueError(f"unknown model {self.model!r}")

    @property
    def operator_source(self) -> str:
        return "adj_powers" if self.model == "mixhop" else "reduced_tensor"

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ParseError("model config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ParseError(f"unknown config keys: {unknown}")
        if "name" not in doc or "model" not in doc:
            raise ParseError("model config needs 'name' and 'model'")
        kwargs = dict(doc)
        for key in ("powers", "hidden_dims"):
            if key in kwargs:
                kwargs[key] = tuple(int(v) for v in kwargs[key])
        try:
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad model config: {exc}") from None

    def to_dict(self) -> dict:
        doc = {}
        for f in fields(self):
            value = getattr(self, f.name)
            doc[f.name] = list(value) if isinstance(value, tuple) else value
        return doc

    def build_classifier(self):
        if self.model == "mixhop":
            return MixHopClassifier(
                powers=self.powers,
                hidden_dims=self.hidden_dims,
                activation=self.activation,
                learning_rate=self.learning_rate,
                epochs=self.epochs,
                seed=self.seed,
                normalize_adjacency=self.normalize_adjacency,
            )
        return THopClassifier(
            powers=self.powers,
            depth=self.depth,
            reduction=self.reduction,
            semantics=self.semantics,
            aggregation=self.aggregation,
            hidden_dims=self.hidden_dims,
            activation=self.activation,
            learning_rate=self.learning_rate,
            epochs=self.epochs,
            seed=self.seed,
            reduction_seed=self.reduction_seed,
            enumeration_cap=self.enumeration_cap,
        )


@dataclass
class RunResult:
    """Outcome of one training run."""

    model_name: str
    config: dict
    seed: int
    final_train_acc: float
    final_val_acc: float
    final_test_acc: float
    loss_curve: list[float]
    metrics: list[dict]
    wall_clock_seconds: float

    def __post_init__(self):
        for acc in (self.final_train_acc, self.final_val_acc, self.final_test_acc):
            if not 0.0 <= acc <= 1.0:
                raise ValueError("accuracies must lie in [0, 1]")

    def to_json_dict(self, include_timing: bool = False) -> dict:
        """JSON-ready form; timing is excluded by default so artifact files
        stay byte-reproducible across runs."""
        doc = {
            "model_name": self.model_name,
            "config": self.config,
            "seed": int(self.seed),
            "final_train_acc": self.final_train_acc,
            "final_val_acc": self.final_val_acc,
            "final_test_acc": self.final_test_acc,
            "loss_curve": self.loss_curve,
            "metrics": self.metrics,
        }
        if include_timing:
            doc["wall_clock_seconds"] = self.wall_clock_seconds
        return doc


def run_experiment(dataset: LabeledGraph, config: ExperimentConfig) -> RunResult:
    """Train one configuration on one dataset and collect metrics."""
    if not dataset.val_mask.any() or not dataset.test_mask.any():
        raise ValueError("dataset split leaves an empty val or test set")
    start = time.perf_counter()
    clf = config.build_classifier()
    clf.fit(
        dataset.graph,
        dataset.features,
        dataset.labels,
        train_mask=dataset.train_mask,
        val_mask=dataset.val_mask,
        test_mask=dataset.test_mask,
    )
    elapsed = time.perf_counter() - start
    final = clf.final_metrics_
    return RunResult(
        model_name=config.name,
        config=config.to_dict(),
        seed=int(config.seed),
        final_train_acc=final["train_acc"],
        final_val_acc=final["val_acc"],
        final_test_acc=final["test_acc"],
        loss_curve=[record["loss"] for record in clf.history_],
        metrics=clf.history_,
        wall_clock_seconds=elapsed,
    )


def compare(datasets, configs, seeds=None):
    """Run every (dataset, config[, seed]) combination.

    datasets is a list of (name, LabeledGraph) pairs.  Returns (results,
    summary) where results is a list of (dataset name, RunResult) sorted by
    dataset then model name then seed, and summary aggregates the final test
    accuracy per (dataset, model) with mean and sample standard deviation.
    """
    if not datasets or not configs:
        raise ValueError("need at least one dataset and one config")
    results = []
    for ds_name, dataset in datasets:
        for config in configs:
            for seed in seeds if seeds else [config.seed]:
                cfg = replace(config, seed=int(seed))
                results.append((ds_name, run_experiment(dataset, cfg)))
    results.sort(key=lambda item: (item[0], item[1].model_name, item[1].seed))
    summary = summarize(results)
    return results, summary


def summarize(results) -> list[dict]:
    """Per (dataset, model) mean and sample stddev of the final test accuracy."""
    groups: dict[tuple[str, str], list[float]] = {}
    for ds_name, result in results:
        groups.setdefault((ds_name, result.model_name), []).append(result.final_test_acc)
    summary = []
    for (ds_name, model_name), accs in sorted(groups.items()):
        arr = np.asarray(accs)
        summary.append(
            {
                "dataset": ds_name,
                "model": model_name,
                "runs": len(accs),
                "test_acc_mean": float(arr.mean()),
                "test_acc_std": float(arr.std(ddof=1)) if len(accs) > 1 else 0.0,
            }
        )
    return summary


def format_table(results, summary) -> str:
    """Aligned text table of run results followed by the per-model summary."""
    header = ("dataset", "model", "seed", "train", "val", "test")
    rows = [header]
    for ds_name, result in results:
        rows.append(
            (
                ds_name,
                result.model_name,
                str(result.seed),
                f"{result.final_train_acc:.4f}",
                f"{result.final_val_acc:.4f}",
                f"{result.final_test_acc:.4f}",
            )
        )
    widths = [max(len(row[col]) for row in rows) for col in range(len(header))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]
    lines.append("")
    lines.append("summary (final test accuracy)")
    sum_header = ("dataset", "model", "runs", "mean", "std")
    sum_rows = [sum_header]
    for entry in summary:
        sum_rows.append(
            (
                entry["dataset"],
                entry["model"],
                str(entry["runs"]),
                f"{entry['test_acc_mean']:.4f}",
                f"{entry['test_acc_std']:.4f}",
            )
        )
    widths = [max(len(row[col]) for row in sum_rows) for col in range(len(sum_header))]
    lines.extend(
        "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in sum_rows
    )
    return "\n".join(lines) + "\n"
