"""Time-window aggregation of a trace into weighted contact graphs.

Window i covers [i*tw, (i+1)*tw) in trace-relative seconds, aligned to the
trace epoch. Count mode credits an event entirely to the window holding its
start; duration mode splits an interval event across every window it
overlaps, crediting the overlap seconds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .trace import INTERVAL, Trace

COUNT = "count"
DURATION = "duration"

# Default social-contact thresholds: 2 contacts/window in count mode,
# 10 minutes of accumulated contact in duration mode.
DEFAULT_W_TH = {COUNT: 2.0, DURATION: 600.0}


@dataclass(frozen=True)
class SlicingParams:
    """Window length, weight mode, and social-weight threshold.

    ``w_th=None`` resolves to the mode default (2 contacts or 600 s).
    """

    tw: int = 3600
    weight_mode: str = COUNT
    w_th: float | None = None

    def __post_init__(self) -> None:
        if self.tw <= 0:
            raise ValueError("tw must be positive")
        if self.weight_mode not in (COUNT, DURATION):
            raise ValueError(f"unknown weight_mode {self.weight_mode!r}")
        if self.w_th is None:
            object.__setattr__(self, "w_th", DEFAULT_W_TH[self.weight_mode])
        if self.w_th <= 0:
            raise ValueError("w_th must be positive")


@dataclass
class WindowGraph:
    """Undirected weighted graph of one time window; edge keys are (a, b), a < b."""

    index: int
    edges: dict[tuple[int, int], float] = field(default_factory=dict)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def nodes(self) -> set[int]:
        out: set[int] = set()
        for a, b in self.edges:
            out.add(a)
            out.add(b)
        return out

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {}
        for a, b in self.edges:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        return adj

    def write_csv(self, path) -> None:
        # debug dump, format: a,b,weight
        with open(path, "w") as fh:
            fh.write("a,b,weight\n")
            for (a, b), w in sorted(self.edges.items()):
                fh.write(f"{a},{b},{w!r}\n")


def slice_trace(trace: Trace, params: SlicingParams) -> list[WindowGraph]:
    """Aggregate a trace into consecutive WindowGraphs (empty windows included).

    The returned list has one graph per window from 0 through the last
    window touched by any event, so list position equals window index.
    """
    if params.weight_mode == DURATION and trace.duration_mode != INTERVAL:
        raise ValueError("duration weighting requires an interval trace")
    if trace.n_events == 0:
        return []
    tw = params.tw

    if params.weight_mode == COUNT:
        win = trace.start // tw
        n_windows = int(win[-1]) + 1
        graphs = [WindowGraph(i) for i in range(n_windows)]
        rows, counts = np.unique(np.stack([win, trace.a, trace.b], axis=1), axis=0, return_counts=True)
        for (w, a, b), c in zip(rows, counts):
            graphs[int(w)].edges[(int(a), int(b))] = float(c)
        return graphs

    # Duration mode: an event may span many windows; zero-length overlaps
    # (including zero-length events) contribute nothing.
    last = int(trace.end.max())
    n_windows = max(1, -(-last // tw)) if last > 0 else 1
    graphs = [WindowGraph(i) for i in range(n_windows)]
    for a, b, s, e in zip(trace.a.tolist(), trace.b.tolist(),
                          trace.start.tolist(), trace.end.tolist()):
        if e <= s:
            continue
        key = (a, b)
        for w in range(s // tw, (e - 1) // tw + 1):
            overlap = min(e, (w + 1) * tw) - max(s, w * tw)
            if overlap > 0:
                edges = graphs[w].edges
                edges[key] = edges.get(key, 0.0) + float(overlap)
    while graphs and not graphs[-1].edges:
        graphs.pop()
    return graphs


def threshold(graph: WindowGraph, w_th: float) -> WindowGraph:
    """Keep exactly the edges with weight >= w_th."""
    if w_th <= 0:
        raise ValueError("w_th must be positive")
    return WindowGraph(graph.index, {k: w for k, w in graph.edges.items() if w >= w_th})


def threshold_windows(graphs: list[WindowGraph], w_th: float) -> list[WindowGraph]:
    return [threshold(g, w_th) for g in graphs]


def slice_and_threshold(trace: Trace, params: SlicingParams) -> list[WindowGraph]:
    """The standard pipeline step: slice, then apply params.w_th."""
    return threshold_windows(slice_trace(trace, params), params.w_th)
