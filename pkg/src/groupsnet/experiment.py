"""Experiment harness: seeded message sampling, per-policy metric curves
with confidence intervals, and snowball subsetting for scale studies.

A run samples (origin, destination, send_time) messages uniformly, replays
each under every requested policy, and reduces to three curves per policy
on a common time grid: delivery ratio, mean cumulative transmissions per
message, and their ratio (benefit-cost). Each seed is aggregated first;
the 95% confidence band comes from a t-interval over the per-seed means,
one sample per seed.

Group-route forwarding sets are derived causally: group meetings are
detected and tracked once over the whole trace (a forward greedy pass, so
assignments never depend on later windows) and each message queries only
the meetings whose window midpoint falls inside its own lookback. The
community baseline retrains on the raw lookback contacts per message by
default; a flag trains once on the whole trace instead, which leaks future
contacts but mirrors the usual whole-trace setup.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from .baselines import CWIN_DEFAULT, BubbleState, build_bubble_state
from .policy import build_group_graph, forwarding_list, most_probable_route
from .replay import BubblePolicy, FloodingPolicy, GroupsNetPolicy, MessageSpec, replay_message
from .slicing import COUNT, DURATION, SlicingParams, slice_and_threshold
from .trace import INTERVAL, Trace
from .tracking import GroupTimeline, detect_meetings, recent_groups, track

HOUR = 3600
DAY = 86400

GROUPSNET = "groupsnet"
BUBBLE = "bubble"
FLOODING = "flooding"
KNOWN_POLICIES = (GROUPSNET, BUBBLE, FLOODING)

# rng stream tag for message sampling under the master seed
_MESSAGES_TAG = 2


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment run depends on, seeds included."""

    ttl: int
    n_messages: int = 500
    n_seeds: int = 8
    lookback: int = 21 * DAY
    policies: tuple[str, ...] = (GROUPSNET, BUBBLE, FLOODING)
    time_grid: tuple[float, ...] | None = None  # hours since send; None = hourly
    tw: int = HOUR
    w_th: float | None = None
    k: int = 3
    cwin_len: int = CWIN_DEFAULT
    bubble_whole_trace: bool = False
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.ttl <= 0:
            raise ValueError("ttl must be positive")
        if self.n_messages < 1:
            raise ValueError("n_messages must be >= 1")
        if self.n_seeds < 2:
            raise ValueError("need at least two seeds for confidence intervals")
        if self.lookback <= 0:
            raise ValueError("lookback must be positive")
        unknown = set(self.policies) - set(KNOWN_POLICIES)
        if unknown:
            raise ValueError(f"unknown policies: {sorted(unknown)}")
        if not self.policies:
            raise ValueError("at least one policy required")

    def grid_hours(self) -> np.ndarray:
        if self.time_grid is not None:
            grid = np.asarray(self.time_grid, dtype=float)
            if grid.size == 0 or np.any(np.diff(grid) <= 0) or grid[0] <= 0:
                raise ValueError("time_grid must be positive and strictly increasing")
            return grid
        return np.arange(1, math.ceil(self.ttl / HOUR) + 1, dtype=float)

    def to_json_obj(self) -> dict:
        return {
            "ttl": self.ttl,
            "n_messages": self.n_messages,
            "n_seeds": self.n_seeds,
            "lookback": self.lookback,
            "policies": list(self.policies),
            "time_grid": None if self.time_grid is None else list(self.time_grid),
            "tw": self.tw,
            "w_th": self.w_th,
            "k": self.k,
            "cwin_len": self.cwin_len,
            "bubble_whole_trace": self.bubble_whole_trace,
            "master_seed": self.master_seed,
        }


@dataclass(frozen=True)
class MetricCurve:
    """A per-time metric with its 95% confidence band across seeds."""

    times: np.ndarray  # hours since send
    mean: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray

    def at(self, t_hours: float) -> float:
        idx = int(np.searchsorted(self.times, t_hours, side="right")) - 1
        if idx < 0:
            return 0.0
        return float(self.mean[idx])

    @property
    def final(self) -> float:
        return float(self.mean[-1])


@dataclass(frozen=True)
class PolicyMetrics:
    """All measurements of one policy in one experiment."""

    delivery_ratio: MetricCurve
    transmissions: MetricCurve
    benefit_cost: MetricCurve
    per_message_transmissions: np.ndarray  # (n_seeds, n_messages) totals at TTL
    per_message_delivered: np.ndarray  # bool, same shape
    route_groups: np.ndarray | None = None  # group counts of chosen routes


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    policies: dict[str, PolicyMetrics]
    trace_hash: str


def sample_messages(trace: Trace, n: int, ttl: int, seed) -> list[MessageSpec]:
    """Uniform messages: origin != destination, send_time in [0, span - ttl].

    ``seed`` feeds numpy's generator directly, so sequences (master seed
    plus stream tags) work as well as plain integers. Same seed, same list.
    """
    if trace.node_count < 2:
        raise ValueError("need at least two nodes to form pairs")
    if trace.span <= ttl:
        raise ValueError(f"trace span {trace.span} not longer than ttl {ttl}")
    rng = np.random.default_rng(seed)
    origins = rng.integers(0, trace.node_count, size=n)
    shifted = rng.integers(0, trace.node_count - 1, size=n)
    dests = shifted + (shifted >= origins)
    sends = rng.integers(0, trace.span - ttl + 1, size=n)
    return [MessageSpec(int(o), int(d), int(s), int(ttl))
            for o, d, s in zip(origins, dests, sends)]


def _slicing_for(trace: Trace, cfg: ExperimentConfig) -> SlicingParams:
    mode = DURATION if trace.duration_mode == INTERVAL else COUNT
    return SlicingParams(tw=cfg.tw, weight_mode=mode, w_th=cfg.w_th)


def build_timelines(trace: Trace, cfg: ExperimentConfig) -> list[GroupTimeline]:
    """Detect and track group meetings once for the whole trace."""
    windows = slice_and_threshold(trace, _slicing_for(trace, cfg))
    return track(detect_meetings(windows, k=cfg.k))


def _groupsnet_policy(trace, cfg, timelines, spec):
    recent = recent_groups(timelines, now=spec.send_time, lookback=cfg.lookback, tw=cfg.tw)
    graph = build_group_graph(recent, cfg.lookback, cfg.ttl)
    route = most_probable_route(graph, spec.origin, spec.destination)
    n_groups = len(route.groups) if route is not None else 0
    return GroupsNetPolicy(forwarding_list(route, spec.destination)), n_groups


def _bubble_policy(trace, cfg, spec, whole_state: BubbleState | None):
    if whole_state is not None:
        return BubblePolicy(whole_state)
    training = trace.restrict_time(max(0, spec.send_time - cfg.lookback), spec.send_time)
    return BubblePolicy(build_bubble_state(training, cwin_len=cfg.cwin_len, k=cfg.k, w_th=cfg.w_th))


def _run_seed(args) -> dict:
    """Replay one seed's message batch; returns per-policy curve arrays.

    Top-level so process pools can pickle it. Aggregation inside a seed is
    a plain mean over messages; cross-seed statistics happen in the parent.
    """
    trace, cfg, seed_index, timelines, whole_bubble = args
    specs = sample_messages(trace, cfg.n_messages, cfg.ttl,
                            [cfg.master_seed, _MESSAGES_TAG, seed_index])
    grid_sec = cfg.grid_hours() * HOUR
    n_grid = grid_sec.size

    out: dict[str, dict] = {}
    for pol in cfg.policies:
        out[pol] = {
            "delay": np.full(cfg.n_messages, np.inf),
            "tx_counts": np.zeros((cfg.n_messages, n_grid)),
            "tx_total": np.zeros(cfg.n_messages, dtype=np.int64),
            "route_groups": np.zeros(cfg.n_messages, dtype=np.int64) if pol == GROUPSNET else None,
        }

    for i, spec in enumerate(specs):
        for pol in cfg.policies:
            if pol == FLOODING:
                policy = FloodingPolicy()
            elif pol == GROUPSNET:
                policy, n_groups = _groupsnet_policy(trace, cfg, timelines, spec)
                out[pol]["route_groups"][i] = n_groups
            else:
                policy = _bubble_policy(trace, cfg, spec, whole_bubble)
            run = replay_message(trace, spec, policy)
            slot = out[pol]
            if run.delivered:
                slot["delay"][i] = run.delivered_at - spec.send_time
            offsets = np.array([t - spec.send_time for t, _, _ in run.transmissions], dtype=float)
            slot["tx_counts"][i] = np.searchsorted(offsets, grid_sec, side="right")
            slot["tx_total"][i] = run.n_transmissions

    result: dict[str, dict] = {}
    for pol in cfg.policies:
        slot = out[pol]
        delivery = (slot["delay"][:, None] <= grid_sec[None, :]).mean(axis=0)
        tx_mean = slot["tx_counts"].mean(axis=0)
        bc = np.divide(delivery, tx_mean, out=np.zeros_like(delivery), where=tx_mean > 0)
        result[pol] = {
            "delivery": delivery,
            "tx": tx_mean,
            "bc": bc,
            "tx_total": slot["tx_total"],
            "delivered": np.isfinite(slot["delay"]),
            "route_groups": slot["route_groups"],
        }
    return result


def _t_band(per_seed: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Mean and 95% t-interval across axis 0 (one row per seed)."""
    n = per_seed.shape[0]
    mean = per_seed.mean(axis=0)
    if n < 2:
        return mean, mean.copy(), mean.copy()
    sem = per_seed.std(axis=0, ddof=1) / math.sqrt(n)
    half = stats.t.ppf(0.975, n - 1) * sem
    return mean, mean - half, mean + half


def run_experiment(trace: Trace, cfg: ExperimentConfig, jobs: int = 1) -> ExperimentResult:
    """Replay cfg.n_seeds independent message batches under every policy.

    Seeds are independent jobs (optionally process-parallel via ``jobs``)
    and results reduce in seed order, so output is identical for any jobs
    value and bit-reproducible for a fixed master seed.
    """
    timelines: list[GroupTimeline] = []
    if GROUPSNET in cfg.policies:
        timelines = build_timelines(trace, cfg)
    whole_bubble = None
    if BUBBLE in cfg.policies and cfg.bubble_whole_trace:
        whole_bubble = build_bubble_state(trace, cwin_len=cfg.cwin_len, k=cfg.k, w_th=cfg.w_th)

    tasks = [(trace, cfg, s, timelines, whole_bubble) for s in range(cfg.n_seeds)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_seed = list(pool.map(_run_seed, tasks))
    else:
        per_seed = [_run_seed(t) for t in tasks]

    grid = cfg.grid_hours()
    policies: dict[str, PolicyMetrics] = {}
    for pol in cfg.policies:
        delivery = np.stack([s[pol]["delivery"] for s in per_seed])
        tx = np.stack([s[pol]["tx"] for s in per_seed])
        bc = np.stack([s[pol]["bc"] for s in per_seed])
        curves = []
        for block in (delivery, tx, bc):
            mean, lo, hi = _t_band(block)
            curves.append(MetricCurve(grid, mean, lo, hi))
        route_groups = None
        if pol == GROUPSNET:
            route_groups = np.stack([s[pol]["route_groups"] for s in per_seed])
        policies[pol] = PolicyMetrics(
            delivery_ratio=curves[0],
            transmissions=curves[1],
            benefit_cost=curves[2],
            per_message_transmissions=np.stack([s[pol]["tx_total"] for s in per_seed]),
            per_message_delivered=np.stack([s[pol]["delivered"] for s in per_seed]),
            route_groups=route_groups,
        )
    return ExperimentResult(cfg, policies, trace.sha256())


def snowball_subset(trace: Trace, target_n: int) -> Trace:
    """Restrict a trace to a connected high-centrality core of target_n nodes.

    Accretion starts at the highest-degree node of the aggregated contact
    graph and absorbs frontiers (neighbors of the included set) in degree
    order, level by level, until the target is reached. If the frontier
    empties first (disconnected remainder) the next highest-degree
    unvisited node seeds a fresh component. Ties break toward smaller ids.
    """
    if target_n < 1 or target_n > trace.node_count:
        raise ValueError(f"target_n {target_n} not in [1, {trace.node_count}]")
    neighbors: dict[int, set[int]] = {v: set() for v in range(trace.node_count)}
    for a, b in zip(trace.a.tolist(), trace.b.tolist()):
        neighbors[a].add(b)
        neighbors[b].add(a)
    degree_order = lambda v: (-len(neighbors[v]), v)

    start = min(range(trace.node_count), key=degree_order)
    included = {start}
    while len(included) < target_n:
        frontier = set()
        for v in included:
            frontier |= neighbors[v]
        frontier -= included
        if not frontier:
            outside = (v for v in range(trace.node_count) if v not in included)
            frontier = {min(outside, key=degree_order)}
        for v in sorted(frontier, key=degree_order):
            included.add(v)
            if len(included) == target_n:
                break
    return trace.restrict_nodes(included)


def overhead_scaling(trace: Trace, sizes: list[int], cfg: ExperimentConfig, jobs: int = 1) -> dict[int, dict[str, dict]]:
    """Per-size transmission statistics on snowball subsets.

    Runs the full experiment on each subset and reports, per policy, the
    per-message transmission mean and quartiles plus final delivery ratio
    (and mean route size for the group policy).
    """
    if sorted(sizes) != list(sizes):
        raise ValueError("sizes must be ascending")
    out: dict[int, dict[str, dict]] = {}
    for n in sizes:
        sub = snowball_subset(trace, n)
        res = run_experiment(sub, cfg, jobs=jobs)
        stats_for: dict[str, dict] = {}
        for pol, pm in res.policies.items():
            tx = pm.per_message_transmissions.ravel()
            entry = {
                "mean_transmissions": float(tx.mean()),
                "q1_transmissions": float(np.percentile(tx, 25)),
                "median_transmissions": float(np.percentile(tx, 50)),
                "q3_transmissions": float(np.percentile(tx, 75)),
                "delivery_ratio": float(pm.per_message_delivered.mean()),
            }
            if pm.route_groups is not None:
                entry["mean_route_groups"] = float(pm.route_groups.mean())
            stats_for[pol] = entry
        out[n] = stats_for
    return out


def write_curves_csv(path: str | Path, result: ExperimentResult, metric: str) -> None:
    """One curve CSV: t_hours,mean,ci_low,ci_high,policy. Floats via repr
    so reruns are byte-identical."""
    lines = ["t_hours,mean,ci_low,ci_high,policy"]
    for pol in result.config.policies:
        curve: MetricCurve = getattr(result.policies[pol], metric)
        for t, m, lo, hi in zip(curve.times, curve.mean, curve.ci_low, curve.ci_high):
            lines.append(f"{float(t)!r},{float(m)!r},{float(lo)!r},{float(hi)!r},{pol}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_scaling_csv(path: str | Path, scaling: dict[int, dict[str, dict]]) -> None:
    """Flat per-size per-policy stats table."""
    cols = ["size", "policy", "mean_transmissions", "q1_transmissions",
            "median_transmissions", "q3_transmissions", "delivery_ratio", "mean_route_groups"]
    lines = [",".join(cols)]
    for size in sorted(scaling):
        for pol in sorted(scaling[size]):
            entry = scaling[size][pol]
            row = [str(size), pol]
            for c in cols[2:]:
                row.append(repr(float(entry[c])) if c in entry else "")
            lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")
