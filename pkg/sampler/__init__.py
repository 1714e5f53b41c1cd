"""Sampler package initialization."""
from .records import ChainSample, TypedWalk
from .edge_sampler import sample_edge_triples
from .random_walk import random_walks, walk_to_chain_samples, walks_to_chain_samples
from .trajectory import (
    TimeBucketRule, TrajectoryStats, trajectory_to_walks, read_trajectories,
    orders_to_graph, parse_timestamp
)
from .metapath import metapath_instances
from .corpus import apply_min_count, endpoint_counts, read_samples, write_samples

__all__ = [
    'ChainSample', 'TypedWalk',
    'sample_edge_triples',
    'random_walks', 'walk_to_chain_samples', 'walks_to_chain_samples',
    'TimeBucketRule', 'TrajectoryStats', 'trajectory_to_walks', 'read_trajectories',
    'orders_to_graph', 'parse_timestamp',
    'metapath_instances',
    'apply_min_count', 'endpoint_counts', 'read_samples', 'write_samples',
]
