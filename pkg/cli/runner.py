"""
Command-line parser and dispatcher.
Every TrainConfig field is exposed as a flag; help text comes from the field descriptions.
"""
import argparse
import sys
import typing
from typing import Callable, Dict, List, Optional, Sequence

from config.constants import EXIT_DATA, EXIT_OK, EXIT_USAGE, MAP_K, NEIGHBOR_K
from config.settings import settings
from config.train_config import SamplerConfig, TrainConfig
from utils.exceptions import HineError, UsageError
from utils.logger import log, setup_logger

# Fields owned by global flags rather than the generated ones
_GLOBAL_FIELDS = {'seed'}


class HineArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str):
        raise UsageError(f"{message}\n{self.format_usage().rstrip()}")


def parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got '{value}'")


def _flag_names(name: str) -> List[str]:
    dashed = f"--{name.replace('_', '-')}"
    return [dashed, f"--{name}"] if '_' in name else [dashed]


def _field_kwargs(annotation, description: str, default) -> Dict[str, object]:
    kwargs: Dict[str, object] = {'default': None, 'help': f"{description} (default: {default})"}
    origin = typing.get_origin(annotation)
    args = typing.get_args(annotation)
    if origin is typing.Union:
        annotation = next(a for a in args if a is not type(None))
        origin = typing.get_origin(annotation)
        args = typing.get_args(annotation)
    if origin is typing.Literal:
        kwargs['choices'] = list(args)
        kwargs['type'] = type(args[0])
    elif annotation is bool:
        kwargs['type'] = parse_bool
        kwargs['metavar'] = 'BOOL'
    else:
        kwargs['type'] = annotation
    return kwargs


def add_model_flags(parser: argparse.ArgumentParser, model, skip: Sequence[str] = ()) -> None:
    """Add one flag per pydantic field (underscore and dash spellings)."""
    group = parser.add_argument_group(f"{model.__name__} options")
    for name, info in model.model_fields.items():
        if name in _GLOBAL_FIELDS or name in skip:
            continue
        group.add_argument(*_flag_names(name), dest=name, **_field_kwargs(info.annotation, info.description or name, info.default))


def model_overrides(args: argparse.Namespace, model, skip: Sequence[str] = ()) -> Dict[str, object]:
    """Flag values for a pydantic model; unset flags are omitted."""
    values = {
        name: getattr(args, name)
        for name in model.model_fields
        if name not in skip and getattr(args, name, None) is not None
    }
    if 'seed' in model.model_fields and getattr(args, 'seed', None) is not None:
        values['seed'] = args.seed
    return values


def _global_parent() -> argparse.ArgumentParser:
    parent = HineArgumentParser(add_help=False)
    group = parent.add_argument_group('global options')
    group.add_argument('--seed', type=int, default=None, help="Random seed for all sampling and training (default: 0)")
    group.add_argument('--threads', type=int, default=None,
                       help=f"Worker threads; 1 = deterministic, more = throughput mode (default: {settings.threads})")
    group.add_argument('--log-level', '--log_level', dest='log_level', default=None,
                       help=f"Log level (default: {settings.log_level})")
    group.add_argument('--config', default=None, help="Flat key = value file of training options")
    return parent


def build_parser() -> HineArgumentParser:
    """Full parser with one subcommand per operation."""
    from cli import commands, export

    parent = _global_parent()
    parser = HineArgumentParser(
        prog='hine',
        description="Heterogeneous information network embedding: sampling, training and evaluation.",
    )
    sub = parser.add_subparsers(dest='command', metavar='COMMAND', required=True)

    def command(name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[parent], help=help_text, description=help_text)
        p.set_defaults(handler=handler)
        return p

    # sample
    p = command('sample', commands.cmd_sample, "Generate chain samples from a graph or trajectory file")
    p.add_argument('--graph', required=True, help="Edge list (or trajectory file in trajectory mode)")
    p.add_argument('--node-types', '--node_types', dest='node_types', help="Node-type file")
    p.add_argument('--mode', choices=['edges', 'walks', 'metapath', 'trajectory'], default='walks',
                   help="Sampling strategy (default: walks)")
    p.add_argument('--out', required=True, help="Output sample file")
    p.add_argument('--count', type=int, default=None, help="Samples to draw in edges/metapath mode (default: |E|)")
    p.add_argument('--pattern', help="Meta path relations, comma separated (metapath mode)")
    p.add_argument('--pattern-types', '--pattern_types', dest='pattern_types',
                   help="Meta path node types, comma separated, '*' = any (metapath mode)")
    p.add_argument('--graph-out', '--graph_out', dest='graph_out', help="Write the order-derived graph (trajectory mode)")
    add_model_flags(p, SamplerConfig)

    # train
    p = command('train', commands.cmd_train, "Train embeddings")
    p.add_argument('--graph', required=True, help="Edge list")
    p.add_argument('--node-types', '--node_types', dest='node_types', help="Node-type file")
    p.add_argument('--samples', help="Sample file (default: generated from random walks)")
    p.add_argument('--algorithm', choices=['ghine', 'ahine'], default='ahine',
                   help="Single-edge or chain training (default: ahine)")
    p.add_argument('--out', required=True, help="Output embedding file")
    p.add_argument('--format', choices=['text', 'binary'], default='text', help="Embedding format (default: text)")
    p.add_argument('--checkpoint-dir', '--checkpoint_dir', dest='checkpoint_dir', help="Write checkpoints here")
    p.add_argument('--resume', help="Checkpoint directory, or a checkpoint root to continue from its newest checkpoint")
    p.add_argument('--walks-per-node', '--walks_per_node', dest='walks_per_node', type=int, default=None,
                   help="Walks per node when generating samples (default: 100)")
    p.add_argument('--max-walk-length', '--max_walk_length', dest='max_walk_length', type=int, default=None,
                   help="Max walk length when generating samples (default: 50)")
    p.add_argument('--min-count', '--min_count', dest='min_count', type=int, default=None,
                   help="Endpoint frequency bound when generating samples (default: 5)")
    add_model_flags(p, TrainConfig)

    # evaluation
    p = command('eval-cluster', commands.cmd_eval_cluster, "K-means clustering scored by NMI")
    p.add_argument('--embeddings', required=True, help="Embedding file")
    p.add_argument('--labels', required=True, help="Label file")
    p.add_argument('--clusters', type=int, default=None, help="K (default: number of classes)")
    p.add_argument('--restarts', type=int, default=None, help="k-means restarts (default: 10)")
    p.add_argument('--clusters-out', '--clusters_out', dest='clusters_out', help="Write node<TAB>cluster rows")
    p.add_argument('--report', help="Write key = value report")

    p = command('eval-classify', commands.cmd_eval_classify, "Softmax-regression classification scored by F1")
    p.add_argument('--embeddings', required=True, help="Embedding file")
    p.add_argument('--labels', required=True, help="Label file")
    p.add_argument('--test-fraction', '--test_fraction', dest='test_fraction', type=float, default=None,
                   help="Held-out fraction (default: 0.2)")
    p.add_argument('--report', help="Write key = value report")

    p = command('eval-rank', commands.cmd_eval_rank, "Similarity ranking scored by MAP@K")
    p.add_argument('--embeddings', required=True, help="Embedding file")
    p.add_argument('--labels', required=True, help="Label file")
    p.add_argument('--k', type=int, default=MAP_K, help=f"Cutoff K (default: {MAP_K})")
    p.add_argument('--report', help="Write key = value report")

    p = command('eval-link', commands.cmd_eval_link, "Edge vs corrupted-pair ROC AUC")
    p.add_argument('--embeddings', required=True, help="Embedding file")
    p.add_argument('--graph', required=True, help="Edge list of held-out edges")
    p.add_argument('--node-types', '--node_types', dest='node_types', help="Node-type file")
    p.add_argument('--sample-size', '--sample_size', dest='sample_size', type=int, default=1000,
                   help="Edges to score (default: 1000)")
    p.add_argument('--metric', choices=['cosine', 'dot'], default='cosine', help="Similarity (default: cosine)")
    p.add_argument('--report', help="Write key = value report")

    p = command('nn', commands.cmd_nn, "Nearest neighbors of a node")
    p.add_argument('--embeddings', required=True, help="Embedding file")
    p.add_argument('--query', required=True, help="Node name")
    p.add_argument('--k', type=int, default=NEIGHBOR_K, help=f"Neighbors to list (default: {NEIGHBOR_K})")
    p.add_argument('--metric', choices=['cosine', 'dot'], default='cosine', help="Similarity (default: cosine)")

    p = command('export', export.cmd_export, "Convert embeddings between text and binary")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument('--embeddings', help="Embedding file to convert")
    source.add_argument('--checkpoint', help="Checkpoint directory to export")
    p.add_argument('--out', required=True, help="Output path")
    p.add_argument('--format', choices=['text', 'binary'], default='text', help="Output format (default: text)")

    p = command('info', commands.cmd_info, "Graph statistics")
    p.add_argument('--graph', required=True, help="Edge list")
    p.add_argument('--node-types', '--node_types', dest='node_types', help="Node-type file")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments and execute one command.

    Returns:
        Process exit code (0 ok, 1 usage, 2 data, 3 numerical)
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # --help / --version
        return int(e.code or EXIT_OK)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code

    if args.log_level:
        try:
            setup_logger(level=args.log_level)
        except ValueError as e:
            print(f"error: --log-level: {e}", file=sys.stderr)
            return EXIT_USAGE
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE

    try:
        args.handler(args)
    except HineError as e:
        log.error(f"[CLI] {args.command.upper()} FAILED | {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        log.error(f"[CLI] {args.command.upper()} FAILED | {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK
