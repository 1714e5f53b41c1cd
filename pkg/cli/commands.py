"""
Command handlers. Results go to stdout, progress to the log.
"""
import argparse
import sys
from pathlib import Path
from typing import List

from pydantic import ValidationError

from config.constants import CLASSIFY_TEST_FRACTION, KMEANS_RESTARTS, RELATION_SEPARATOR
from config.train_config import SamplerConfig, TrainConfig, build_train_config
from evaluation import (
    EvalReport, classify, export_clusters, f1_scores, kmeans, link_auc, load_labels, map_at_k, nmi,
    per_class_scores, render_key_values, stratified_split, top_k_neighbors, write_report
)
from graph import build_pattern, export_graph, graph_statistics, load_graph
from graph.hin_graph import HinGraph, Vocabulary
from model.embedding import load_embeddings, save_embeddings
from sampler import (
    ChainSample, TimeBucketRule, TrajectoryStats, apply_min_count, metapath_instances, orders_to_graph,
    random_walks, read_samples, read_trajectories, sample_edge_triples, trajectory_to_walks,
    walks_to_chain_samples, write_samples
)
from trainer import HineTrainer
from utils.exceptions import ConfigError, UsageError
from utils.file_manager import file_manager
from utils.logger import log
from utils.progress_tracker import ThroughputMeter, progress_logger
from cli.runner import model_overrides


def _load_graph(args: argparse.Namespace) -> HinGraph:
    node_types = file_manager.resolve_input(args.node_types) if args.node_types else None
    return load_graph(file_manager.resolve_input(args.graph), node_types)


def _train_config(args: argparse.Namespace) -> TrainConfig:
    return build_train_config(args.config, model_overrides(args, TrainConfig))


def _sampler_config(args: argparse.Namespace, defaults: dict) -> SamplerConfig:
    values = dict(defaults)
    values.update(model_overrides(args, SamplerConfig))
    try:
        return SamplerConfig.model_validate(values)
    except ValidationError as e:
        problems = '; '.join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ConfigError(f"invalid sampling options ({problems})") from e


def _walk_samples(graph: HinGraph, config: SamplerConfig) -> List[ChainSample]:
    meter = ThroughputMeter()
    samples = list(walks_to_chain_samples(random_walks(graph, config), config.max_chain_length))
    filtered = apply_min_count(samples, config.min_count)
    if len(filtered) < len(samples):
        log.info(f"[SAMPLE] MIN_COUNT | kept={len(filtered)} | dropped={len(samples) - len(filtered)} | min_count={config.min_count}")
    progress_logger.log_samples('walks', len(filtered), meter.elapsed)
    return filtered


def cmd_sample(args: argparse.Namespace) -> None:
    """Write a chain sample file."""
    defaults = {}
    if args.config:
        train_config = build_train_config(args.config)
        defaults = {'seed': train_config.seed, 'max_chain_length': train_config.max_chain_length}
    config = _sampler_config(args, defaults)

    if args.mode == 'trajectory':
        nodes = Vocabulary()
        rule = TimeBucketRule()
        orders = read_trajectories(file_manager.resolve_input(args.graph), nodes)
        graph = orders_to_graph(orders, rule, nodes)
        stats = TrajectoryStats()
        meter = ThroughputMeter()
        samples = list(walks_to_chain_samples(trajectory_to_walks(orders, rule, stats), config.max_chain_length))
        samples = apply_min_count(samples, config.min_count)
        progress_logger.log_samples('trajectory', len(samples), meter.elapsed)
        log.info(f"[SAMPLE] TRAJECTORY | orders={stats.orders} | skipped={stats.skipped} | walks={stats.walks}")
        if args.graph_out:
            graph_out = Path(args.graph_out)
            export_graph(graph, graph_out, graph_out.with_name(graph_out.name + '.types'))
    else:
        graph = _load_graph(args)
        count = args.count if args.count is not None else graph.num_edges
        meter = ThroughputMeter()
        if args.mode == 'edges':
            samples = list(sample_edge_triples(graph, count, config.seed))
        elif args.mode == 'metapath':
            if not args.pattern:
                raise UsageError("--pattern is required in metapath mode")
            relations = [r.strip() for r in args.pattern.split(RELATION_SEPARATOR)]
            types = [t.strip() for t in args.pattern_types.split(RELATION_SEPARATOR)] if args.pattern_types else None
            pattern = build_pattern(graph, relations, types)
            samples = list(metapath_instances(graph, pattern, count, config.seed, config.max_chain_length))
        else:
            samples = _walk_samples(graph, config)
        if args.mode != 'walks':
            progress_logger.log_samples(args.mode, len(samples), meter.elapsed)

    written = write_samples(samples, args.out, graph)
    print(f"{written} samples written to {args.out}")


def cmd_train(args: argparse.Namespace) -> None:
    """Train and write embeddings."""
    config = _train_config(args)
    graph = _load_graph(args)
    trainer = HineTrainer(graph, config, checkpoint_dir=args.checkpoint_dir, threads=args.threads)

    if args.samples:
        samples = read_samples(file_manager.resolve_input(args.samples), graph)
    elif args.algorithm == 'ghine':
        samples = None
    else:
        sampler_config = _sampler_config(args, {'seed': config.seed, 'max_chain_length': config.max_chain_length})
        samples = _walk_samples(graph, sampler_config)

    resume = file_manager.resolve_checkpoint(args.resume) if args.resume else None
    if args.algorithm == 'ghine':
        result = trainer.train_ghine(samples, resume=resume)
    else:
        result = trainer.train_ahine(samples, resume=resume)

    save_embeddings(result.model.embeddings, args.out, args.format)
    losses = result.report.losses()
    final = f"{losses[-1]:.6f}" if losses else 'n/a'
    print(f"trained {len(result.report.epochs)} epochs ({result.report.stop_reason}); final loss {final}; embeddings written to {args.out}")


def _emit(report: EvalReport, args: argparse.Namespace) -> None:
    sys.stdout.write(render_key_values(report))
    if args.report:
        write_report(report, args.report)


def cmd_eval_cluster(args: argparse.Namespace) -> None:
    """k-means on labeled nodes, scored by NMI."""
    table = load_embeddings(file_manager.resolve_input(args.embeddings))
    labels = load_labels(file_manager.resolve_input(args.labels), table)
    labels.require_classes(2)
    seed = args.seed if args.seed is not None else 0
    k = args.clusters or labels.num_classes
    result = kmeans(table.vectors[labels.rows], k, seed=seed, restarts=args.restarts or KMEANS_RESTARTS)
    report = EvalReport(nmi=nmi(result.assignment, labels.classes))
    progress_logger.log_metric('cluster', 'nmi', report.nmi)
    if args.clusters_out:
        export_clusters(args.clusters_out, [table.names[r] for r in labels.rows], result.assignment)
    _emit(report, args)


def cmd_eval_classify(args: argparse.Namespace) -> None:
    """Train/test split classification scored by macro and micro F1."""
    table = load_embeddings(file_manager.resolve_input(args.embeddings))
    labels = load_labels(file_manager.resolve_input(args.labels), table)
    labels.require_classes(2)
    seed = args.seed if args.seed is not None else 0
    train, test = stratified_split(labels.classes, args.test_fraction or CLASSIFY_TEST_FRACTION, seed)
    vectors = table.vectors[labels.rows]
    predictions = classify(vectors[train], labels.classes[train], vectors[test], labels.num_classes)
    macro, micro = f1_scores(predictions, labels.classes[test], labels.num_classes)
    report = EvalReport(
        macro_f1=macro,
        micro_f1=micro,
        per_class=per_class_scores(predictions, labels.classes[test], labels.class_names),
    )
    progress_logger.log_metric('classify', 'macro_f1', macro)
    progress_logger.log_metric('classify', 'micro_f1', micro)
    _emit(report, args)


def cmd_eval_rank(args: argparse.Namespace) -> None:
    """MAP@K with cosine (headline) and dot similarity."""
    table = load_embeddings(file_manager.resolve_input(args.embeddings))
    labels = load_labels(file_manager.resolve_input(args.labels), table)
    vectors = table.vectors[labels.rows]
    cosine = map_at_k(vectors, labels.classes, args.k, 'cosine', node_ids=labels.rows)
    dot = map_at_k(vectors, labels.classes, args.k, 'dot', node_ids=labels.rows)
    report = EvalReport(
        map_k=args.k,
        map_at_k=cosine.value,
        map_at_k_dot=dot.value,
        map_queries=cosine.queries,
        map_skipped=cosine.skipped,
    )
    progress_logger.log_metric('rank', f"map_at_{args.k}", cosine.value)
    _emit(report, args)


def cmd_eval_link(args: argparse.Namespace) -> None:
    """ROC AUC of graph edges against corrupted pairs."""
    table = load_embeddings(file_manager.resolve_input(args.embeddings))
    graph = _load_graph(args)
    seed = args.seed if args.seed is not None else 0
    report = EvalReport(link_auc=link_auc(table, graph, args.sample_size, seed, args.metric))
    progress_logger.log_metric('link', 'auc', report.link_auc)
    _emit(report, args)


def cmd_nn(args: argparse.Namespace) -> None:
    """Print `name<TAB>similarity` for the nearest neighbors."""
    table = load_embeddings(file_manager.resolve_input(args.embeddings))
    for name, score in top_k_neighbors(table, args.query, args.k, args.metric):
        print(f"{name}\t{score:.6f}")


def cmd_info(args: argparse.Namespace) -> None:
    """Print graph statistics as `key: value` lines."""
    stats = graph_statistics(_load_graph(args))
    for key, value in stats.items():
        if isinstance(value, dict):
            print(f"{key}:")
            for name, count in value.items():
                print(f"  {name}: {count}")
        elif isinstance(value, float):
            print(f"{key}: {value:.4f}")
        else:
            print(f"{key}: {value}")
