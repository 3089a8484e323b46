"""Command line interface: detect / simulate / eval.

Exit codes: 0 on success, 1 on data or runtime errors, 2 on usage errors.
Output files are written to a temp file in the target directory and renamed
into place, so a failed run never leaves a partial file behind.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import dcmm, graph, membership, metrics
from .errors import SpecmixError, ValidationError

__all__ = ["main", "build_parser"]


class _UsageError(Exception):
    """Bad flag combination or value range; reported with exit code 2."""


def _fmt(value) -> str:
    return format(float(value), ".10g")


def _atomic_write_text(path, render) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp_name = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    tmp = Path(tmp_name)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            render(fh)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            tmp.unlink()
        raise


# ---------------------------------------------------------------- detect


def _render_membership_csv(fh, nodes, memberships, labels):
    k = memberships.shape[1]
    fh.write("node," + ",".join(f"pi_{j + 1}" for j in range(k)) + ",label\n")
    for node, row, label in zip(nodes, memberships, labels):
        fh.write(f"{int(node)}," + ",".join(_fmt(v) for v in row) + f",{int(label)}\n")


def _render_membership_json(fh, nodes, memberships, labels):
    records = [
        {"node": int(node), "memberships": [float(v) for v in row], "label": int(label)}
        for node, row, label in zip(nodes, memberships, labels)
    ]
    json.dump({"rows": records}, fh, indent=2)
    fh.write("\n")


def cmd_detect(args) -> int:
    if args.k < 2:
        raise _UsageError("--k must be at least 2")
    if args.restarts < 1:
        raise _UsageError("--restarts must be at least 1")
    if args.seed < 0:
        raise _UsageError("--seed must be nonnegative")
    if args.tau is not None and args.tau < 0:
        raise _UsageError("--tau must be nonnegative")
    if args.t < 0:
        raise _UsageError("--t must be nonnegative")
    if args.tn is not None and args.tn <= 0:
        raise _UsageError("--tn must be positive")
    if args.num_nodes is not None and args.num_nodes < 1:
        raise _UsageError("--num-nodes must be positive")

    indexing = "one-based" if args.one_based else "zero-based"
    g = graph.load_edge_list(args.edges, indexing=indexing, num_nodes=args.num_nodes)
    if args.largest_component:
        g = graph.largest_component(g)

    start = time.perf_counter()
    result = membership.detect(
        g,
        args.k,
        tau=args.tau,
        weak_signal_threshold=args.t,
        ratio_threshold=args.tn,
        method=args.vh,
        seed=args.seed,
        restarts=args.restarts,
    )
    wall = time.perf_counter() - start

    nodes = g.node_labels()
    render = _render_membership_csv if args.format == "csv" else _render_membership_json
    _atomic_write_text(args.out, lambda fh: render(fh, nodes, result.memberships, result.labels))

    sidecar = str(args.out) + ".diag.json"
    diagnostics = {
        "n": g.n,
        "edges": g.m,
        "k": args.k,
        "tau": result.tau,
        "num_vectors": result.num_vectors,
        "eigenvalues": [float(v) for v in result.eigenvalues],
        "weak_signal": result.weak_signal,
        "ratio_threshold": result.ratio_threshold,
        "vh_method": args.vh,
        "vh_objective": result.vh_objective,
        "fallback_rows": result.fallback_rows,
        "seed": args.seed,
        "restarts": args.restarts,
        "wall_time_s": wall,
    }
    _atomic_write_text(sidecar, lambda fh: (json.dump(diagnostics, fh, indent=2), fh.write("\n")))

    print(
        f"n={g.n} m={g.m} k={args.k} vectors={result.num_vectors} "
        f"tau={_fmt(result.tau)} fallback_rows={result.fallback_rows}"
    )
    print(f"wrote {args.out} and {sidecar}")
    return 0


# ---------------------------------------------------------------- simulate


_RESULT_COLUMNS = [
    "experiment",
    "grid_param",
    "grid_value",
    "method",
    "mean_error",
    "sd_error",
    "repetitions",
    "seed",
]


def _render_result_csv(fh, rows):
    fh.write(",".join(_RESULT_COLUMNS) + "\n")
    for row in rows:
        fh.write(
            f"{row['experiment']},{row['grid_param']},{_fmt(row['grid_value'])},"
            f"{row['method']},{_fmt(row['mean_error'])},{_fmt(row['sd_error'])},"
            f"{row['repetitions']},{row['seed']}\n"
        )


def _render_result_json(fh, rows):
    clean = [
        {
            **row,
            "grid_value": float(row["grid_value"]),
            "mean_error": float(row["mean_error"]),
            "sd_error": float(row["sd_error"]),
        }
        for row in rows
    ]
    json.dump({"rows": clean}, fh, indent=2)
    fh.write("\n")


def _read_config(path) -> dict:
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for line_number, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValidationError(f"{path}: line {line_number}: expected key=value")
            key, _, value = line.partition("=")
            cfg[key.strip().lower().replace("-", "_")] = value.strip()
    return cfg


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValidationError(f"expected a boolean, got {text!r}")


def _resolve(args, cfg, key, default, cast):
    value = getattr(args, key)
    if value is not None:
        return value
    if key in cfg:
        try:
            return cast(cfg[key])
        except ValueError as exc:
            raise ValidationError(f"config key {key}: {exc}") from exc
    return default


def cmd_simulate(args) -> int:
    cfg = _read_config(args.config) if args.config else {}
    unknown = set(cfg) - {
        "experiment",
        "reps",
        "seed",
        "vh",
        "restarts",
        "threads",
        "clip_omega",
        "out",
        "format",
    }
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(sorted(unknown))}")

    experiment = _resolve(args, cfg, "experiment", None, str)
    reps = _resolve(args, cfg, "reps", 50, int)
    seed = _resolve(args, cfg, "seed", 0, int)
    vh = _resolve(args, cfg, "vh", "kmeans", str)
    restarts = _resolve(args, cfg, "restarts", 10, int)
    threads = _resolve(args, cfg, "threads", 1, int)
    clip = _resolve(args, cfg, "clip_omega", None, _parse_bool)
    out = _resolve(args, cfg, "out", "results.csv", str)
    out_format = _resolve(args, cfg, "format", "csv", str)

    if experiment is None:
        raise _UsageError("--experiment is required")
    if experiment not in dcmm.EXPERIMENTS:
        raise _UsageError(f"--experiment must be one of {', '.join(dcmm.EXPERIMENTS)}")
    if vh not in ("kmeans", "kmedians"):
        raise _UsageError("--vh must be kmeans or kmedians")
    if out_format not in ("csv", "json"):
        raise _UsageError("--format must be csv or json")
    if reps < 1:
        raise _UsageError("--reps must be at least 1")
    if seed < 0:
        raise _UsageError("--seed must be nonnegative")
    if restarts < 1:
        raise _UsageError("--restarts must be at least 1")
    if threads < 1:
        raise _UsageError("--threads must be at least 1")

    rows = dcmm.run_experiment(
        experiment,
        repetitions=reps,
        seed=seed,
        method=vh,
        restarts=restarts,
        threads=threads,
        clip=clip,
    )
    render = _render_result_csv if out_format == "csv" else _render_result_json
    _atomic_write_text(out, lambda fh: render(fh, rows))
    for row in rows:
        print(
            f"{row['experiment']} {row['grid_param']}={_fmt(row['grid_value'])} "
            f"mean_error={_fmt(row['mean_error'])} sd_error={_fmt(row['sd_error'])}"
        )
    print(f"wrote {out}")
    return 0


# ---------------------------------------------------------------- eval


def _read_eval_table(path):
    """Read either a membership table (node,pi_1..pi_K[,label]) or a hard
    label table (node,label). Returns nodes, memberships, labels."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ValidationError(f"{path}: empty file")
    header = [cell.strip() for cell in rows[0]]
    body = rows[1:]
    if not body:
        raise ValidationError(f"{path}: no data rows")
    if header[0] != "node":
        raise ValidationError(f"{path}: first column must be 'node', got {header[0]!r}")

    try:
        if len(header) >= 2 and header[1] == "pi_1":
            k = 0
            while 1 + k < len(header) and header[1 + k] == f"pi_{k + 1}":
                k += 1
            trailing = header[1 + k :]
            has_label = trailing == ["label"]
            if not has_label and trailing:
                raise ValidationError(f"{path}: unexpected columns {trailing}")
            width = 1 + k + (1 if has_label else 0)
            nodes = np.empty(len(body), dtype=np.int64)
            pi = np.empty((len(body), k))
            labels = np.empty(len(body), dtype=np.int64) if has_label else None
            for i, row in enumerate(body):
                if len(row) != width:
                    raise ValidationError(f"{path}: row {i + 2} has {len(row)} fields, expected {width}")
                nodes[i] = int(row[0])
                pi[i] = [float(cell) for cell in row[1 : 1 + k]]
                if has_label:
                    labels[i] = int(row[1 + k])
            return nodes, pi, labels
        if header == ["node", "label"]:
            nodes = np.empty(len(body), dtype=np.int64)
            labels = np.empty(len(body), dtype=np.int64)
            for i, row in enumerate(body):
                if len(row) != 2:
                    raise ValidationError(f"{path}: row {i + 2} has {len(row)} fields, expected 2")
                nodes[i] = int(row[0])
                labels[i] = int(row[1])
            return nodes, None, labels
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    raise ValidationError(
        f"{path}: header must be node,pi_1,...,pi_K[,label] or node,label"
    )


def _align(nodes_a, nodes_b, path_a, path_b):
    order_a = np.argsort(nodes_a, kind="stable")
    order_b = np.argsort(nodes_b, kind="stable")
    sorted_a = nodes_a[order_a]
    sorted_b = nodes_b[order_b]
    if np.unique(sorted_a).size != sorted_a.size:
        raise ValidationError(f"{path_a}: duplicate node ids")
    if np.unique(sorted_b).size != sorted_b.size:
        raise ValidationError(f"{path_b}: duplicate node ids")
    if sorted_a.shape != sorted_b.shape or not np.array_equal(sorted_a, sorted_b):
        raise ValidationError(f"{path_a} and {path_b} cover different node sets")
    return order_a, order_b


def _one_hot(labels, k):
    if labels.max() > k:
        raise ValidationError(f"ground-truth label {labels.max()} exceeds k={k}")
    pi = np.zeros((labels.size, k))
    pi[np.arange(labels.size), labels - 1] = 1.0
    return pi


def _perm_text(perm) -> str:
    return " ".join(f"{a + 1}->{b + 1}" for a, b in enumerate(perm))


def cmd_eval(args) -> int:
    est_nodes, est_pi, est_labels = _read_eval_table(args.est)
    truth_nodes, truth_pi, truth_labels = _read_eval_table(args.truth)
    order_e, order_t = _align(est_nodes, truth_nodes, args.est, args.truth)
    if est_pi is not None:
        est_pi = est_pi[order_e]
    if est_labels is not None:
        est_labels = est_labels[order_e]
    if truth_pi is not None:
        truth_pi = truth_pi[order_t]
    if truth_labels is not None:
        truth_labels = truth_labels[order_t]

    n = est_nodes.size
    report = {"n": n}
    if est_pi is None and truth_pi is not None:
        raise ValidationError(
            "estimated file has hard labels only; membership ground truth needs "
            "estimated memberships"
        )

    if est_pi is not None:
        k = est_pi.shape[1]
        if args.k is not None and args.k != k:
            raise _UsageError(f"--k={args.k} does not match the {k} membership columns")
        if truth_pi is None:
            truth_pi = _one_hot(truth_labels, k)
        elif truth_pi.shape[1] != k:
            raise ValidationError(
                f"estimated k={k} but ground truth has {truth_pi.shape[1]} columns"
            )
        mixed = metrics.mixed_hamming(est_pi, truth_pi)
        report["k"] = k
        report["mixed_hamming_error"] = mixed.mixed_hamming
        report["mixed_permutation"] = [b + 1 for b in mixed.best_permutation]
        if est_labels is None:
            est_labels = membership.hard_labels(est_pi)
    else:
        k = args.k if args.k is not None else int(max(est_labels.max(), truth_labels.max()))
        report["k"] = k

    if truth_labels is not None:
        perm, mistakes = metrics.best_label_permutation(est_labels, truth_labels, k)
        report["hamming_error"] = mistakes / n
        report["misclassified"] = mistakes
        report["hamming_permutation"] = [b + 1 for b in perm]

    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        print(f"n: {report['n']}")
        print(f"k: {report['k']}")
        if "mixed_hamming_error" in report:
            perm = _perm_text([b - 1 for b in report["mixed_permutation"]])
            print(f"mixed_hamming_error: {_fmt(report['mixed_hamming_error'])} (permutation {perm})")
        if "hamming_error" in report:
            perm = _perm_text([b - 1 for b in report["hamming_permutation"]])
            print(
                f"hamming_error: {_fmt(report['hamming_error'])} "
                f"({report['misclassified']}/{report['n']}, permutation {perm})"
            )
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specmix",
        description="Mixed membership community detection and its simulation harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="estimate memberships for an edge-list graph")
    p_detect.add_argument("--edges", required=True, help="edge list file (two ids per line)")
    p_detect.add_argument("--k", type=int, required=True, help="number of communities")
    p_detect.add_argument("--tau", type=float, default=None, help="Laplacian regularizer (default: from degrees)")
    p_detect.add_argument("--t", type=float, default=0.1, help="weak-signal threshold (default 0.1)")
    p_detect.add_argument("--tn", type=float, default=None, help="ratio clamp half-width (default log n)")
    p_detect.add_argument("--vh", choices=["kmeans", "kmedians"], default="kmeans", help="vertex hunting method")
    p_detect.add_argument("--seed", type=int, default=0)
    p_detect.add_argument("--restarts", type=int, default=10)
    p_detect.add_argument("--one-based", action="store_true", help="input node ids start at 1")
    p_detect.add_argument("--largest-component", action="store_true", help="restrict to the largest connected component")
    p_detect.add_argument("--num-nodes", type=int, default=None, help="override the inferred node count")
    p_detect.add_argument("--out", default="membership.csv", help="membership output file")
    p_detect.add_argument("--format", choices=["csv", "json"], default="csv")
    p_detect.set_defaults(func=cmd_detect)

    p_sim = sub.add_parser("simulate", help="run one synthetic-benchmark experiment grid")
    p_sim.add_argument("--experiment", choices=list(dcmm.EXPERIMENTS), default=None)
    p_sim.add_argument("--reps", type=int, default=None, help="repetitions per grid point (default 50)")
    p_sim.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    p_sim.add_argument("--vh", choices=["kmeans", "kmedians"], default=None)
    p_sim.add_argument("--restarts", type=int, default=None)
    p_sim.add_argument("--threads", type=int, default=None, help="worker threads over repetitions")
    p_sim.add_argument("--clip-omega", action="store_true", default=None, dest="clip_omega",
                       help="clamp expected edge probabilities above 1 instead of failing")
    p_sim.add_argument("--config", default=None, help="key=value file mirroring these flags")
    p_sim.add_argument("--out", default=None, help="result table output file")
    p_sim.add_argument("--format", choices=["csv", "json"], default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_eval = sub.add_parser("eval", help="score an estimate against ground truth")
    p_eval.add_argument("--est", required=True, help="estimated membership or label CSV")
    p_eval.add_argument("--truth", required=True, help="ground-truth membership or label CSV")
    p_eval.add_argument("--k", type=int, default=None, help="community count (needed for label-only files)")
    p_eval.add_argument("--format", choices=["csv", "json"], default="csv")
    p_eval.set_defaults(func=cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (SpecmixError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
