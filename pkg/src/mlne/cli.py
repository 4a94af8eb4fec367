"""Command-line pipeline: embed / communities / eval / dump-pairs /
dump-walks.

Exit codes: 0 success, 2 config error, 3 input error, 4 numerical
divergence.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import communities as comm
from . import evaluation, plots, structure, training, walks
from .affiliations import write_affiliations
from .config import SCHEMA, PipelineConfig
from .embeddings import read_embeddings_text, rows_for_graph, write_embeddings_text
from .errors import (ConfigError, DimensionMismatchError, DivergenceError,
                     MlneError)
from .graph import load_edge_list, load_labels

EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_DIVERGENCE = 4


class StageError(MlneError):
    def __init__(self, stage, cause):
        super().__init__(f"stage={stage}: {cause}")
        self.stage = stage
        self.cause = cause


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _load_inputs(cfg):
    edges_path = cfg["paths.edges"]
    if not edges_path:
        raise ConfigError("paths.edges is required")
    try:
        graph = load_edge_list(edges_path)
    except MlneError as exc:
        raise StageError("load", exc) from exc
    except OSError as exc:
        raise StageError("load", exc) from exc
    labels = None
    if cfg["paths.labels"]:
        try:
            labels = load_labels(cfg["paths.labels"], graph, skip_unknown=True)
        except MlneError as exc:
            raise StageError("load", exc) from exc
    return graph, labels


def _detect_communities(cfg, graph, labels):
    strategy = cfg["community.strategy"]
    if cfg["paths.affiliations"]:
        strategy = "import:" + cfg["paths.affiliations"]
    try:
        return comm.detect(graph, strategy, bigclam_cfg=cfg.bigclam_config(),
                           num_labels=labels.num_classes if labels else None)
    except MlneError as exc:
        raise StageError("communities", exc) from exc


def _pair_table(cfg, graph, aff):
    triads = structure.compute_triad_matrix(graph)
    overlap = structure.compute_community_overlap(
        aff, pair_budget=cfg["structure.pair_budget"])
    walk_list = walks.generate_walks(graph, cfg.walk_config())
    cooc = walks.count_cooccurrences(walk_list, cfg["walk.window"],
                                     binary=cfg["walk.binary_counts"])
    return structure.merge_pair_weights(triads, overlap, cooc), triads


def cmd_embed(cfg):
    out_dir = Path(cfg["paths.output"])
    out_dir.mkdir(parents=True, exist_ok=True)
    graph, labels = _load_inputs(cfg)
    aff = _detect_communities(cfg, graph, labels)
    try:
        table, triads = _pair_table(cfg, graph, aff)
    except MlneError as exc:
        raise StageError("structure", exc) from exc
    try:
        U = training.train(graph, table, cfg.train_config())
    except DivergenceError:
        raise
    except MlneError as exc:
        raise StageError("train", exc) from exc

    emb_path = out_dir / "embeddings.txt"
    write_embeddings_text(emb_path, U, graph.labels)
    manifest = {
        "config": cfg.values,
        "inputs": {p: _sha256(cfg[f"paths.{p}"])
                   for p in ("edges", "labels", "affiliations")
                   if cfg[f"paths.{p}"]},
        "stats": {
            "nodes": graph.n,
            "edges": graph.num_edges,
            "triangles": structure.triangle_count(graph, triads),
            "communities": aff.m,
            "positive_pairs": len(table),
        },
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    print(f"wrote {emb_path} ({graph.n} x {cfg['train.d']})")
    return 0


def cmd_communities(cfg):
    out_dir = Path(cfg["paths.output"])
    out_dir.mkdir(parents=True, exist_ok=True)
    graph, labels = _load_inputs(cfg)
    aff = _detect_communities(cfg, graph, labels)
    path = out_dir / "affiliations.txt"
    write_affiliations(path, aff, graph)
    print(f"wrote {path} ({aff.m} communities)")
    return 0


def cmd_eval(cfg, embedding_path, task):
    out_dir = Path(cfg["paths.output"])
    out_dir.mkdir(parents=True, exist_ok=True)
    graph, labels = _load_inputs(cfg)
    try:
        emb_labels, U_raw = read_embeddings_text(embedding_path)
    except (MlneError, OSError) as exc:
        raise StageError("eval", exc) from exc
    if U_raw.shape[1] != cfg["train.d"]:
        raise StageError("eval", DimensionMismatchError(
            f"embedding d={U_raw.shape[1]}, config train.d={cfg['train.d']}"))
    U = rows_for_graph(emb_labels, U_raw, graph)

    for name in ("classify", "reconstruct") if task == "both" else (task,):
        report = evaluation.EvalReport()
        if name == "classify":
            if labels is None:
                raise ConfigError("classify task requires paths.labels")
            report = evaluation.classify_and_score(
                U, labels, cfg["eval.ratios"], cfg["eval.repetitions"],
                seed=cfg["seed"], l2=cfg["eval.l2"],
                max_iters=cfg["eval.max_iters"], tol=cfg["eval.tol"])
            plots.plot_classification(report, out_dir / "classification.png")
        else:
            aps, _skipped = evaluation.reconstruction_ap_values(U, graph)
            map_score = float(sum(aps) / len(aps))
            report.add("reconstruct", 0.0, 0, "map", map_score)
            plots.plot_reconstruction(aps, map_score,
                                      out_dir / "reconstruction.png")

        evaluation.write_records(out_dir / f"{name}_records.tsv", report)
        table_text = evaluation.format_table(report)
        with open(out_dir / f"{name}_report.txt", "w", encoding="utf-8") as fh:
            fh.write(table_text)
        print(table_text, end="")
    return 0


def cmd_dump_pairs(cfg):
    out_dir = Path(cfg["paths.output"])
    out_dir.mkdir(parents=True, exist_ok=True)
    graph, labels = _load_inputs(cfg)
    aff = _detect_communities(cfg, graph, labels)
    table, _ = _pair_table(cfg, graph, aff)
    path = out_dir / "pairs.txt"
    structure.dump_pair_weights(path, table, graph)
    print(f"wrote {path} ({len(table)} pairs)")
    return 0


def cmd_dump_walks(cfg):
    out_dir = Path(cfg["paths.output"])
    out_dir.mkdir(parents=True, exist_ok=True)
    graph, _labels = _load_inputs(cfg)
    walk_list = walks.generate_walks(graph, cfg.walk_config())
    path = out_dir / "walks.txt"
    walks.dump_walks(path, walk_list, graph)
    print(f"wrote {path} ({len(walk_list)} walks)")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mlne",
        description="Multi-level network embedding: triads, communities "
                    "and walk neighborhoods in one objective.")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "embed": "run the full pipeline and write embeddings",
        "communities": "detect or import communities and write the affiliation file",
        "eval": "score an embedding file on a downstream task",
        "dump-pairs": "write the merged pair-weight table",
        "dump-walks": "write the generated random walks",
    }
    for name, help_text in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-c", "--config", default=None,
                       help="flat key=value config file")
        for key, (_parser, _default, key_help) in SCHEMA.items():
            p.add_argument(f"--{key}", dest=key, default=None,
                           metavar="V", help=key_help)
        if name == "eval":
            p.add_argument("embedding", help="embedding file to score")
            p.add_argument("--task",
                           choices=("classify", "reconstruct", "both"),
                           default="classify")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = {key: getattr(args, key) for key in SCHEMA}
        cfg = PipelineConfig.load(args.config, overrides)
        if args.command == "embed":
            return cmd_embed(cfg)
        if args.command == "communities":
            return cmd_communities(cfg)
        if args.command == "eval":
            return cmd_eval(cfg, args.embedding, args.task)
        if args.command == "dump-pairs":
            return cmd_dump_pairs(cfg)
        if args.command == "dump-walks":
            return cmd_dump_walks(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (StageError, MlneError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
