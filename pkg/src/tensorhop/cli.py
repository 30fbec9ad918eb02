"""Command line surface: build tensors, verify identities, reduce, train, compare.

Exit codes are stable: 0 success, 1 identity violation, 2 input error,
3 resource cap or integer overflow, 4 dimension error.  No environment
variables are consulted; behavior is a function of the flags alone.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import DimensionError, IntegerOverflowError, ParseError, ResourceLimitError
from .experiments import (
    ExperimentConfig,
    compare,
    format_table,
    generate_sbm,
    load_dataset,
    run_experiment,
    save_dataset,
)
from .graph import parse_edge_list
from .reduce import (
    FiberPCA,
    ReducedTensor,
    apply_reduction,
    fibers_of,
    fit_reducer,
    make_reducer,
    reducer_to_json,
)
from .tensorio import read_tensor, write_tensor
from .tensors import (
    DEFAULT_ENUMERATION_CAP,
    PathTensor,
    Semantics,
    build_simple_path_tensor,
    build_walk_tensor,
    normalize_tensor,
    verify_graph_identities,
)
from .validation import check_reduction_dim

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_DIMENSION = 4


def _read_graph(path: str):
    return parse_edge_list(Path(path).read_text())


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from None


def _cmd_build_tensor(args) -> int:
    graph = _read_graph(args.graph)
    semantics = Semantics(args.semantics)
    if semantics is Semantics.SIMPLE_PATH:
        raw = build_simple_path_tensor(graph, args.L, cap=args.cap)
    else:
        raw = build_walk_tensor(graph, args.L)
    tensor = normalize_tensor(raw)
    write_tensor(args.out, tensor)
    nonzeros = int(np.count_nonzero(tensor.values))
    print(f"n={graph.n} L={args.L} semantics={semantics.value} nonzeros={nonzeros}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    graph = _read_graph(args.graph)
    if args.Lmax < 0:
        raise ParseError("--Lmax must be nonnegative")
    result = verify_graph_identities(graph, args.Lmax, cap=args.cap)
    print(
        f"occurrence-sum[simple]: "
        f"{result.occurrence_checks - result.occurrence_failures}/{result.occurrence_checks} ok"
    )
    print(
        f"count-recovery[simple]: "
        f"{result.recovery_simple_checks - result.recovery_simple_failures}/"
        f"{result.recovery_simple_checks} ok"
    )
    print(
        f"count-recovery[walk]:   "
        f"{result.recovery_walk_checks - result.recovery_walk_failures}/"
        f"{result.recovery_walk_checks} ok"
    )
    return EXIT_OK if result.ok else EXIT_IDENTITY


def _cmd_reduce(args) -> int:
    tensor = read_tensor(args.tensor)
    if isinstance(tensor, ReducedTensor):
        raise ParseError("input tensor is already depth-reduced")
    if isinstance(tensor, PathTensor):
        tensor = normalize_tensor(tensor)
    check_reduction_dim(args.d, tensor.n)
    reducer = make_reducer(args.method, d=args.d, seed=args.seed)
    fit_reducer(tensor, reducer)
    reduced = apply_reduction(tensor, reducer)
    write_tensor(args.out, reduced)
    sidecar = args.out + ".map.json"
    Path(sidecar).write_text(json.dumps(reducer_to_json(reducer), indent=2) + "\n")
    print(f"n={reduced.n} L={reduced.length} d={reduced.d} method={args.method} map={sidecar}")
    if args.check:
        if isinstance(reducer, FiberPCA):
            error = reducer.reconstruction_error(fibers_of(tensor))
            print(f"pca reconstruction error: {error:.3e}")
        else:
            print("reconstruction check is only available for --method pca")
    return EXIT_OK


def _cmd_train(args) -> int:
    dataset = load_dataset(args.dataset)
    config = ExperimentConfig.from_dict(_load_json(args.config))
    result = run_experiment(dataset, config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / f"{config.name}.json"
    out_path.write_text(json.dumps(result.to_json_dict(), indent=2) + "\n")
    print(
        f"model={config.name} train_acc={result.final_train_acc:.4f} "
        f"val_acc={result.final_val_acc:.4f} test accuracy {result.final_test_acc:.4f}"
    )
    print(f"wall_clock_seconds={result.wall_clock_seconds:.2f} result={out_path}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    dataset = load_dataset(args.dataset)
    doc = _load_json(args.config)
    if not isinstance(doc, dict) or "models" not in doc or not isinstance(doc["models"], list):
        raise ParseError("compare config needs a 'models' list")
    configs = [ExperimentConfig.from_dict(entry) for entry in doc["models"]]
    seeds = doc.get("seeds")
    if seeds is not None and (
        not isinstance(seeds, list) or not seeds or not all(isinstance(s, int) for s in seeds)
    ):
        raise ParseError("'seeds' must be a nonempty list of integers")
    dataset_name = Path(args.dataset).name or "dataset"
    results, summary = compare([(dataset_name, dataset)], configs, seeds=seeds)
    table = format_table(results, summary)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = [{"dataset": name, **res.to_json_dict()} for name, res in results]
    (out_dir / "results.json").write_text(
        json.dumps({"results": payload, "summary": summary}, indent=2) + "\n"
    )
    (out_dir / "table.txt").write_text(table)
    print(table, end="")
    return EXIT_OK


def _cmd_gen_sbm(args) -> int:
    try:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    except ValueError:
        raise ParseError(f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
    dataset = generate_sbm(sizes, args.p_in, args.p_out, args.seed, noise_scale=args.noise)
    save_dataset(dataset, args.out)
    print(
        f"n={dataset.graph.n} edges={dataset.graph.num_edges} "
        f"classes={dataset.num_classes} -> {args.out}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tensorhop",
        description="Path-occurrence tensors, depth reduction, and tensor-slice graph convolution.",
        epilog="exit codes: 0 success, 1 identity violation, 2 input error, "
               "3 resource cap, 4 dimension error",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-tensor", help="construct a normalized occurrence tensor",
                       epilog="exits: 0 success, 2 parse error, 3 resource cap/overflow")
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--L", type=int, required=True, help="path/walk length")
    p.add_argument("--semantics", choices=["simple", "walk"], required=True)
    p.add_argument("--out", required=True, help="output THOP file")
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP,
                   help="node cap for simple-path enumeration")
    p.set_defaults(func=_cmd_build_tensor)

    p = sub.add_parser("verify", help="check the occurrence-sum and count-recovery identities",
                       epilog="exits: 0 all identities hold, 1 violation, 2 parse error, "
                              "3 resource cap")
    p.add_argument("--graph", required=True)
    p.add_argument("--Lmax", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("reduce", help="compress a tensor along its depth axis",
                       epilog="exits: 0 success, 2 bad tensor file, 4 d out of range")
    p.add_argument("--tensor", required=True, help="input THOP file")
    p.add_argument("--method", choices=["sum", "pca", "randproj"], required=True)
    p.add_argument("--d", type=int, required=True, help="output depth (ignored by sum)")
    p.add_argument("--seed", type=int, default=0, help="seed for randproj")
    p.add_argument("--out", required=True, help="output THOP file; a .map.json sidecar is written")
    p.add_argument("--check", action="store_true",
                   help="for pca, print the max reconstruction error over fibers")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("train", help="train one model config on a dataset directory",
                       epilog="exits: 0 success, 2 dataset/config error, 3 resource cap")
    p.add_argument("--dataset", required=True, help="directory with edges/labels/features/split")
    p.add_argument("--config", required=True, help="JSON model config")
    p.add_argument("--out", required=True, help="output directory for the run result")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("compare", help="run several model configs and tabulate results",
                       epilog="exits: 0 success, 2 dataset/config error, 3 resource cap")
    p.add_argument("--dataset", required=True)
    p.add_argument("--config", required=True, help="JSON with a 'models' list and optional 'seeds'")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("gen-sbm", help="generate a block-model dataset directory",
                       epilog="exits: 0 success, 2 bad parameters")
    p.add_argument("--sizes", required=True, help="comma-separated block sizes, e.g. 30,30")
    p.add_argument("--p-in", type=float, required=True, dest="p_in")
    p.add_argument("--p-out", type=float, required=True, dest="p_out")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--noise", type=float, default=0.5, help="feature noise stddev")
    p.add_argument("--out", required=True, help="output dataset directory")
    p.set_defaults(func=_cmd_gen_sbm)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (ResourceLimitError, IntegerOverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
