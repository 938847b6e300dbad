"""Discrete-event replay of one message over a contact trace.

Contacts inside the message's TTL window stream in time order; whenever
exactly one endpoint of a contact carries a copy, the forwarding policy
decides if the other endpoint gets one too. Nodes hold at most one copy,
copies are never dropped, and the simulation runs to the TTL even after
delivery so transmission counts stay comparable across policies.

Because a policy can only ever shrink the set of forwards that flooding
would make, the carrier set under any policy is a subset of flooding's at
every instant. Flooding therefore upper-bounds both delivery and
transmission counts by construction.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np

from .baselines import BubbleState, bubble_forward_decision
from .slicing import SlicingParams, slice_and_threshold
from .trace import Trace
from .tracking import detect_meetings

DAY = 86400


@dataclass(frozen=True)
class MessageSpec:
    """One message to simulate: who, to whom, when, and for how long."""

    origin: int
    destination: int
    send_time: int
    ttl: int

    def __post_init__(self) -> None:
        if self.origin == self.destination:
            raise ValueError("origin and destination must differ")
        if self.ttl <= 0:
            raise ValueError("ttl must be positive")

    @property
    def deadline(self) -> int:
        return self.send_time + self.ttl


@dataclass
class SimRun:
    """Outcome of replaying one message.

    ``transmissions`` is time-ordered (time, from, to); every receiver
    appears exactly once because nodes hold at most one copy.
    ``delivered_at`` is the destination's first receipt time, if any.
    """

    spec: MessageSpec
    delivered_at: int | None = None
    transmissions: list[tuple[int, int, int]] = field(default_factory=list)
    carriers: set[int] = field(default_factory=set)

    @property
    def n_transmissions(self) -> int:
        return len(self.transmissions)

    @property
    def delivered(self) -> bool:
        return self.delivered_at is not None

    def write_transcript(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["time", "from", "to"])
            w.writerows(self.transmissions)


class ForwardingPolicy(Protocol):
    """A per-contact decision rule. The engine only asks about receivers
    that do not yet hold a copy."""

    def wants(self, carrier: int, receiver: int, destination: int) -> bool: ...


class FloodingPolicy:
    """Forward to everyone who lacks the message."""

    def wants(self, carrier: int, receiver: int, destination: int) -> bool:
        return True


class GroupsNetPolicy:
    """Forward only into the precomputed forwarding set (route-group
    members plus the destination), frozen at send time."""

    def __init__(self, allowed: frozenset[int]):
        self.allowed = allowed

    def wants(self, carrier: int, receiver: int, destination: int) -> bool:
        return receiver == destination or receiver in self.allowed


class BubblePolicy:
    """Community/centrality forwarding against a frozen trained state."""

    def __init__(self, state: BubbleState):
        self.state = state

    def wants(self, carrier: int, receiver: int, destination: int) -> bool:
        return bubble_forward_decision(carrier, receiver, destination, self.state)


def replay_message(trace: Trace, spec: MessageSpec, policy: ForwardingPolicy) -> SimRun:
    """Propagate one message and record deliveries and transmissions.

    Contacts with start in [send_time, send_time + ttl] fire in canonical
    (start, a, b) order; each one where exactly one endpoint carries the
    message yields a policy decision. Identical inputs replay identically.
    """
    if spec.send_time < 0 or spec.send_time > trace.span:
        raise ValueError(f"send_time {spec.send_time} outside trace span [0, {trace.span}]")
    lo = int(np.searchsorted(trace.start, spec.send_time, side="left"))
    hi = int(np.searchsorted(trace.start, spec.deadline, side="right"))
    times = trace.start[lo:hi].tolist()
    a_arr = trace.a[lo:hi].tolist()
    b_arr = trace.b[lo:hi].tolist()

    run = SimRun(spec, carriers={spec.origin})
    carriers = run.carriers
    dest = spec.destination
    for t, a, b in zip(times, a_arr, b_arr):
        a_in = a in carriers
        if a_in == (b in carriers):
            continue
        carrier, receiver = (a, b) if a_in else (b, a)
        if policy.wants(carrier, receiver, dest):
            carriers.add(receiver)
            run.transmissions.append((t, carrier, receiver))
            if receiver == dest:
                run.delivered_at = t
    return run


def flood_reach(trace: Trace, origin: int, send_time: int, ttl: int) -> dict[int, int]:
    """First-receipt time of every node an epidemic copy reaches within ttl.

    The origin is included at send_time. This is the delivery-time oracle
    for any policy: a policy can deliver no earlier and to no one else.
    """
    lo = int(np.searchsorted(trace.start, send_time, side="left"))
    hi = int(np.searchsorted(trace.start, send_time + ttl, side="right"))
    times = trace.start[lo:hi].tolist()
    a_arr = trace.a[lo:hi].tolist()
    b_arr = trace.b[lo:hi].tolist()

    reached: dict[int, int] = {origin: send_time}
    for t, a, b in zip(times, a_arr, b_arr):
        a_in = a in reached
        if a_in == (b in reached):
            continue
        reached[b if a_in else a] = t
    return reached


def epidemic_cogroup_experiment(
    trace: Trace,
    origin: int,
    send_time: int,
    lookback: int = 30 * DAY,
    ttl: int = 7 * DAY,
    params: SlicingParams | None = None,
    k: int = 3,
) -> tuple[float | None, float | None]:
    """Delivered fraction of the origin's past co-group members vs everyone else.

    Nodes that shared a detected group meeting with the origin during the
    lookback before send_time form one class, the remaining nodes the
    other; an epidemic copy floods for ttl and each class reports the
    fraction it reached. A class with no members reports None.
    """
    params = params or SlicingParams()
    past = trace.restrict_time(max(0, send_time - lookback), send_time)
    cogroup: set[int] = set()
    for window_meetings in detect_meetings(slice_and_threshold(past, params), k=k):
        for meeting in window_meetings:
            if origin in meeting.members:
                cogroup |= meeting.members
    cogroup.discard(origin)

    reached = flood_reach(trace, origin, send_time, ttl)
    others = set(range(trace.node_count)) - cogroup - {origin}
    ratio_cogroup = len(cogroup & reached.keys()) / len(cogroup) if cogroup else None
    ratio_other = len(others & reached.keys()) / len(others) if others else None
    return ratio_cogroup, ratio_other
