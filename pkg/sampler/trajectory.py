"""
Trajectory-derived daily walks.
Orders (actor, timestamp, src, dst) are typed by time bucket and stitched into walks.
"""
from dataclasses import dataclass, field
from datetime import date, datetime
from itertools import groupby
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from config.constants import DAY_INTERVALS, DEFAULT_NODE_TYPE, WEEKDAY_SUFFIX, WEEKEND_SUFFIX
from graph.hin_graph import HinGraph, Vocabulary
from sampler.records import TypedWalk
from utils.logger import log
from validators.record_validator import iter_records

Order = Tuple[str, object, int, int]


class TimeBucketRule:
    """
    Maps a timestamp to one of ten relations: five daily intervals x {weekday, weekend}.

    Intervals are given as (name, start hour, end hour) and must partition the day.
    Edge type ids follow interval order with weekday types first.
    """

    def __init__(self, intervals: Sequence[Tuple[str, float, float]] = DAY_INTERVALS):
        ordered = sorted(intervals, key=lambda item: item[1])
        if len(ordered) != 5:
            raise ValueError(f"expected 5 daily intervals, got {len(ordered)}")
        if ordered[0][1] != 0 or ordered[-1][2] != 24:
            raise ValueError("intervals must start at 0h and end at 24h")
        for (name, start, end), nxt in zip(ordered, ordered[1:] + [None]):
            if end <= start:
                raise ValueError(f"interval '{name}' is empty")
            if nxt is not None and nxt[1] != end:
                raise ValueError(f"interval '{name}' ends at {end}h but the next starts at {nxt[1]}h")

        self._intervals = [(name, start * 60.0, end * 60.0) for name, start, end in ordered]
        self.edge_type_names: List[str] = (
            [f"{name}-{WEEKDAY_SUFFIX}" for name, _, _ in self._intervals]
            + [f"{name}-{WEEKEND_SUFFIX}" for name, _, _ in self._intervals]
        )

    def bucket(self, timestamp: datetime) -> int:
        """
        Relation id for a timestamp.

        Args:
            timestamp: Order time (Saturday and Sunday count as weekend)

        Returns:
            Edge type id in 0..9
        """
        minute = timestamp.hour * 60 + timestamp.minute + timestamp.second / 60.0
        interval = next(
            index for index, (_, start, end) in enumerate(self._intervals) if start <= minute < end
        )
        weekend = timestamp.weekday() >= 5
        return interval + (len(self._intervals) if weekend else 0)

    def bucket_name(self, timestamp: datetime) -> str:
        """Relation name for a timestamp."""
        return self.edge_type_names[self.bucket(timestamp)]


@dataclass
class TrajectoryStats:
    """Counters for a trajectory run."""
    orders: int = 0
    skipped: int = 0
    walks: int = 0
    skipped_examples: List[str] = field(default_factory=list)


def parse_timestamp(value: object) -> Optional[datetime]:
    """
    Parse an ISO-8601 timestamp to naive wall-clock time.

    Offsets are dropped so buckets follow the local time written in the record.
    Anything unparseable gives None.
    """
    if isinstance(value, datetime):
        return value.replace(tzinfo=None)
    if not isinstance(value, str):
        return None
    try:
        return datetime.fromisoformat(value.strip().replace('Z', '+00:00')).replace(tzinfo=None)
    except ValueError:
        return None


def trajectory_to_walks(
    orders: Iterable[Order],
    rule: TimeBucketRule,
    stats: Optional[TrajectoryStats] = None
) -> Iterator[TypedWalk]:
    """
    Stitch orders into daily walks.

    Orders are sorted by (actor, calendar day, time). Consecutive orders of the
    same actor on the same day chain together when the previous destination is
    the next source; otherwise a new walk begins. Each relation is the time
    bucket of its order.

    Args:
        orders: (actor, timestamp, src node id, dst node id) records
        rule: Time bucket rule
        stats: Optional counters; unparseable timestamps increment `skipped`

    Returns:
        Iterator of TypedWalks
    """
    stats = stats if stats is not None else TrajectoryStats()
    parsed: List[Tuple[str, datetime, int, int]] = []
    for actor, raw_time, src, dst in orders:
        stats.orders += 1
        timestamp = parse_timestamp(raw_time)
        if timestamp is None:
            stats.skipped += 1
            if len(stats.skipped_examples) < 5:
                stats.skipped_examples.append(str(raw_time))
            continue
        parsed.append((str(actor), timestamp, int(src), int(dst)))

    if stats.skipped:
        log.warning(f"[SAMPLE] TRAJECTORY | skipped={stats.skipped} unparseable timestamps | e.g. {stats.skipped_examples}")

    parsed.sort(key=lambda order: (order[0], order[1].date(), order[1]))
    return _stitch(parsed, rule, stats)


def _stitch(parsed: List[Tuple[str, datetime, int, int]], rule: TimeBucketRule, stats: TrajectoryStats) -> Iterator[TypedWalk]:
    def day_key(order: Tuple[str, datetime, int, int]) -> Tuple[str, date]:
        return order[0], order[1].date()

    for _, day_orders in groupby(parsed, key=day_key):
        nodes: List[int] = []
        relations: List[int] = []
        for _, timestamp, src, dst in day_orders:
            if nodes and nodes[-1] != src:
                stats.walks += 1
                yield TypedWalk(tuple(nodes), tuple(relations))
                nodes, relations = [], []
            if not nodes:
                nodes.append(src)
            relations.append(rule.bucket(timestamp))
            nodes.append(dst)
        if nodes:
            stats.walks += 1
            yield TypedWalk(tuple(nodes), tuple(relations))


def read_trajectories(path: Path | str, nodes: Vocabulary) -> List[Order]:
    """
    Read `actor<TAB>timestamp<TAB>src<TAB>dst` rows.

    Node names are added to `nodes`; timestamps are kept as strings and parsed
    during stitching so bad values are skipped and counted rather than fatal.

    Args:
        path: Trajectory file
        nodes: Node vocabulary to extend

    Returns:
        Orders with node ids
    """
    orders = []
    for _, (actor, timestamp, src, dst) in iter_records(path, 4):
        orders.append((actor, timestamp, nodes.add(src), nodes.add(dst)))
    return orders


def orders_to_graph(orders: Iterable[Order], rule: TimeBucketRule, nodes: Vocabulary) -> HinGraph:
    """
    Build the ride-hailing graph: one edge per order, typed by time bucket.

    Args:
        orders: (actor, timestamp, src id, dst id) records
        rule: Time bucket rule; all ten relation names form the edge type inventory
        nodes: Node vocabulary the ids refer to

    Returns:
        Single-node-type HinGraph
    """
    sources, relations, targets = [], [], []
    for _, raw_time, src, dst in orders:
        timestamp = parse_timestamp(raw_time)
        if timestamp is None:
            continue
        sources.append(src)
        relations.append(rule.bucket(timestamp))
        targets.append(dst)
    node_types = Vocabulary([DEFAULT_NODE_TYPE])
    return HinGraph(
        nodes, node_types, Vocabulary(rule.edge_type_names),
        [0] * len(nodes), sources, relations, targets
    )
