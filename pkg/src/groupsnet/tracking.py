"""Detecting group meetings per window and tracking group identity over time.

A group meeting is a percolation community found in one thresholded window
graph. Meetings in later windows are matched to existing timelines through
the member-overlap similarity coefficient |A & B| / |A | B|; a match needs
similarity strictly above 0.5 so a group splitting in half never continues
both halves under one identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cpm import DEFAULT_CLIQUE_CAP, percolate
from .slicing import WindowGraph


@dataclass(frozen=True)
class GroupMeeting:
    """One detected meeting: community members in one window."""

    window_index: int
    members: frozenset[int]


@dataclass
class GroupTimeline:
    """A tracked group: its meeting history, newest composition last."""

    group_id: int
    meetings: list[GroupMeeting] = field(default_factory=list)

    @property
    def current_members(self) -> frozenset[int]:
        return self.meetings[-1].members

    @property
    def n_meetings(self) -> int:
        return len(self.meetings)

    def meeting_times(self, tw: int = 3600) -> list[float]:
        """Meeting timestamps under the window-midpoint convention."""
        return [(m.window_index + 0.5) * tw for m in self.meetings]

    def to_json_obj(self) -> dict:
        return {
            "group_id": self.group_id,
            "meetings": [
                {"window_index": m.window_index, "members": sorted(m.members)}
                for m in self.meetings
            ],
        }


@dataclass(frozen=True)
class RecentGroup:
    """A timeline's activity inside one lookback interval."""

    group_id: int
    members: frozenset[int]
    meeting_count: int


def similarity(g1: Iterable[int], g2: Iterable[int]) -> float:
    """Member-overlap coefficient |g1 & g2| / |g1 | g2|, in [0, 1]."""
    s1, s2 = set(g1), set(g2)
    if not s1 or not s2:
        raise ValueError("similarity of an empty group is undefined")
    return len(s1 & s2) / len(s1 | s2)


def detect_meetings(
    windows: Sequence[WindowGraph],
    k: int = 3,
    clique_cap: int = DEFAULT_CLIQUE_CAP,
) -> list[list[GroupMeeting]]:
    """Percolation communities of each (already thresholded) window.

    Returns one list per input window, ordered like the input; meetings
    within a window are in deterministic (sorted member) order.
    """
    out = []
    for g in windows:
        communities = percolate(g, k=k, cap=clique_cap) if g.edges else []
        out.append([GroupMeeting(g.index, c) for c in communities])
    return out


def track(meeting_stream: Iterable) -> list[GroupTimeline]:
    """Assemble meetings into GroupTimelines.

    Accepts either a flat iterable of GroupMeeting (non-decreasing window
    order) or the nested per-window lists from :func:`detect_meetings`.

    Each meeting goes to the live timeline whose current members maximize
    the similarity coefficient, provided it exceeds 0.5; ties go to the
    oldest timeline. A timeline accepts at most one meeting per window
    (meeting windows are strictly increasing), and matching never expires
    timelines -- weekly groups that skip many windows still reattach.
    Unmatched meetings start new timelines, ids in order of first meeting.
    """
    flat: list[GroupMeeting] = []
    for item in meeting_stream:
        if isinstance(item, GroupMeeting):
            flat.append(item)
        else:
            flat.extend(item)
    if any(m2.window_index < m1.window_index for m1, m2 in zip(flat, flat[1:])):
        raise ValueError("meetings must arrive in window order")

    timelines: list[GroupTimeline] = []
    i = 0
    while i < len(flat):
        j = i
        while j < len(flat) and flat[j].window_index == flat[i].window_index:
            j += 1
        window_meetings = sorted(flat[i:j], key=lambda m: tuple(sorted(m.members)))
        claimed: set[int] = set()
        for meeting in window_meetings:
            best: GroupTimeline | None = None
            best_rho = 0.5  # strict threshold: a candidate must beat this
            for tl in timelines:
                if tl.group_id in claimed:
                    continue
                rho = similarity(meeting.members, tl.current_members)
                if rho > best_rho:
                    best, best_rho = tl, rho
            if best is None:
                best = GroupTimeline(group_id=len(timelines))
                timelines.append(best)
            best.meetings.append(meeting)
            claimed.add(best.group_id)
        i = j
    return timelines


def recent_groups(
    timelines: Iterable[GroupTimeline],
    now: float,
    lookback: float,
    tw: int = 3600,
) -> list[RecentGroup]:
    """Timelines active in [now - lookback, now), with in-interval counts.

    Meeting times follow the window-midpoint convention, so this is causal:
    a query at ``now`` never sees meetings from windows still in the future.
    Members are those of the latest in-interval meeting.
    """
    if lookback <= 0:
        raise ValueError("lookback must be positive")
    out = []
    for tl in timelines:
        in_window = [m for m in tl.meetings
                     if now - lookback <= (m.window_index + 0.5) * tw < now]
        if in_window:
            out.append(RecentGroup(tl.group_id, in_window[-1].members, len(in_window)))
    return out


def timelines_to_json(timelines: Iterable[GroupTimeline]) -> list[dict]:
    return [tl.to_json_obj() for tl in timelines]
