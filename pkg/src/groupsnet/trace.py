"""Contact-trace data model and CSV ingestion.

A trace is a time-ordered sequence of pairwise proximity events between
dense integer node ids 0..N-1. Endpoints are stored canonically (a < b),
events are sorted by (start, a, b), and timestamps are integer seconds
relative to the trace epoch. Traces either carry no contact durations at
all ("instantaneous") or a duration on every event ("interval").
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

INSTANTANEOUS = "instantaneous"
INTERVAL = "interval"


class TraceFormatError(ValueError):
    """A trace file that cannot be parsed into contact events."""


@dataclass(frozen=True)
class ContactEvent:
    """One pairwise proximity record, endpoints canonical (a < b)."""

    a: int
    b: int
    start: int
    end: int | None = None


@dataclass(frozen=True)
class CsvSchema:
    """Column names used when ingesting a contact CSV.

    ``end_col=None`` means the trace is instantaneous even if the file has
    extra columns. The default schema matches the canonical writer format
    ``a,b,start[,end]`` with the end column picked up when present.
    """

    a_col: str = "a"
    b_col: str = "b"
    start_col: str = "start"
    end_col: str | None = None


@dataclass(frozen=True)
class IngestReport:
    """Counts of rows dropped (not errored) during ingestion."""

    self_contacts: int = 0
    duplicates: int = 0

    @property
    def total_dropped(self) -> int:
        return self.self_contacts + self.duplicates


@dataclass(frozen=True, eq=False)
class Trace:
    """Immutable columnar contact trace.

    ``a``, ``b``, ``start`` (and ``end`` for interval traces) are parallel
    int64 arrays. ``original_ids[i]`` is the pre-remap id of dense node i;
    it is the identity for synthetic traces. ``report`` carries ingestion
    warnings and never participates in equality.
    """

    a: np.ndarray
    b: np.ndarray
    start: np.ndarray
    end: np.ndarray | None
    node_count: int
    epoch: float = 0.0
    original_ids: np.ndarray | None = None
    report: IngestReport | None = field(default=None, repr=False)

    # -- construction ------------------------------------------------

    @classmethod
    def from_arrays(
        cls,
        a: np.ndarray,
        b: np.ndarray,
        start: np.ndarray,
        end: np.ndarray | None = None,
        *,
        node_count: int | None = None,
        epoch: float = 0.0,
        original_ids: np.ndarray | None = None,
        report: IngestReport | None = None,
    ) -> "Trace":
        """Canonicalize (a < b), sort by (start, a, b) and freeze the arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        start = np.asarray(start, dtype=np.int64)
        if end is not None:
            end = np.asarray(end, dtype=np.int64)
            if np.any(end < start):
                raise ValueError("contact end precedes start")
        if np.any(a == b):
            raise ValueError("self-contact in event arrays")
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        order = np.lexsort((hi, lo, start))
        a, b, start = lo[order], hi[order], start[order]
        if end is not None:
            end = end[order]
        if node_count is None:
            node_count = int(max(a.max(initial=-1), b.max(initial=-1)) + 1) if a.size else 0
        for arr in (a, b, start, end):
            if arr is not None:
                arr.setflags(write=False)
        if original_ids is not None:
            original_ids = np.asarray(original_ids, dtype=np.int64)
            original_ids.setflags(write=False)
        return cls(a, b, start, end, node_count, epoch, original_ids, report)

    @classmethod
    def from_events(
        cls,
        events: Iterable[ContactEvent | tuple],
        *,
        node_count: int | None = None,
        epoch: float = 0.0,
    ) -> "Trace":
        rows = [tuple(e) if not isinstance(e, ContactEvent) else (e.a, e.b, e.start, e.end) for e in events]
        if not rows:
            return cls.from_arrays(np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.int64),
                                   node_count=node_count or 0, epoch=epoch)
        has_end = [len(r) > 3 and r[3] is not None for r in rows]
        if any(has_end) and not all(has_end):
            raise ValueError("mixed instantaneous and interval events")
        a = np.array([r[0] for r in rows], np.int64)
        b = np.array([r[1] for r in rows], np.int64)
        start = np.array([r[2] for r in rows], np.int64)
        end = np.array([r[3] for r in rows], np.int64) if all(has_end) else None
        return cls.from_arrays(a, b, start, end, node_count=node_count, epoch=epoch)

    # -- basic properties --------------------------------------------

    @property
    def n_events(self) -> int:
        return int(self.a.size)

    @property
    def duration_mode(self) -> str:
        return INTERVAL if self.end is not None else INSTANTANEOUS

    @property
    def span(self) -> int:
        """Largest timestamp in the trace (0 for an empty trace)."""
        if self.n_events == 0:
            return 0
        last = int(self.start[-1])
        if self.end is not None:
            last = max(last, int(self.end.max()))
        return last

    @property
    def events(self) -> list[ContactEvent]:
        ends = self.end if self.end is not None else [None] * self.n_events
        return [ContactEvent(int(a), int(b), int(s), None if e is None else int(e))
                for a, b, s, e in zip(self.a, self.b, self.start, ends)]

    def __iter__(self) -> Iterator[ContactEvent]:
        return iter(self.events)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        if self.node_count != other.node_count or self.duration_mode != other.duration_mode:
            return False
        same = (np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b)
                and np.array_equal(self.start, other.start))
        if self.end is not None:
            same = same and np.array_equal(self.end, other.end)
        return same

    # -- derived traces ----------------------------------------------

    def restrict_time(self, t0: float, t1: float) -> "Trace":
        """Events with start in [t0, t1); node ids and node_count unchanged."""
        lo = int(np.searchsorted(self.start, t0, side="left"))
        hi = int(np.searchsorted(self.start, t1, side="left"))
        return Trace.from_arrays(
            self.a[lo:hi], self.b[lo:hi], self.start[lo:hi],
            None if self.end is None else self.end[lo:hi],
            node_count=self.node_count, epoch=self.epoch, original_ids=self.original_ids)

    def restrict_nodes(self, keep: Sequence[int]) -> "Trace":
        """Events with both endpoints in ``keep``, renumbered to 0..len(keep)-1.

        ``keep`` order is ignored; dense ids follow sorted old ids so the
        remap is deterministic. original_ids composes through the restriction.
        """
        kept = np.array(sorted(set(int(k) for k in keep)), np.int64)
        remap = -np.ones(self.node_count, np.int64)
        remap[kept] = np.arange(kept.size)
        mask = (remap[self.a] >= 0) & (remap[self.b] >= 0)
        orig = self.original_ids if self.original_ids is not None else np.arange(self.node_count)
        return Trace.from_arrays(
            remap[self.a[mask]], remap[self.b[mask]], self.start[mask],
            None if self.end is None else self.end[mask],
            node_count=kept.size, epoch=self.epoch, original_ids=orig[kept])

    # -- io ------------------------------------------------------------

    def write_csv(self, path: str | Path) -> None:
        """Write the canonical ``a,b,start[,end]`` format, using original ids."""
        orig = self.original_ids if self.original_ids is not None else np.arange(self.node_count)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            if self.end is None:
                w.writerow(["a", "b", "start"])
                for a, b, s in zip(self.a, self.b, self.start):
                    w.writerow([orig[a], orig[b], s])
            else:
                w.writerow(["a", "b", "start", "end"])
                for a, b, s, e in zip(self.a, self.b, self.start, self.end):
                    w.writerow([orig[a], orig[b], s, e])

    def sha256(self) -> str:
        """Digest of the event content (ids, times, mode); epoch excluded."""
        h = hashlib.sha256()
        h.update(self.duration_mode.encode())
        h.update(np.ascontiguousarray(self.a).tobytes())
        h.update(np.ascontiguousarray(self.b).tobytes())
        h.update(np.ascontiguousarray(self.start).tobytes())
        if self.end is not None:
            h.update(np.ascontiguousarray(self.end).tobytes())
        return h.hexdigest()

    def summary(self) -> dict:
        return {
            "node_count": self.node_count,
            "event_count": self.n_events,
            "duration_mode": self.duration_mode,
            "span_seconds": self.span,
            "epoch": self.epoch,
        }


def ingest_csv(path: str | Path, schema: CsvSchema | None = None, epoch: float = 0.0) -> Trace:
    """Read a contact CSV into a canonical Trace.

    Node ids are remapped to dense 0..N-1 (sorted original-id order; the map
    is kept on ``Trace.original_ids``). Self-contacts and exact duplicate
    rows are dropped and counted on ``Trace.report``; malformed rows and
    end < start raise :class:`TraceFormatError` with the offending line
    number.
    """
    path = Path(path)
    auto_end = schema is None
    schema = schema or CsvSchema()
    rows: list[tuple[int, int, int, int | None]] = []
    seen: set[tuple] = set()
    self_contacts = 0
    duplicates = 0
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise TraceFormatError(f"{path}: empty file")
        end_col = schema.end_col
        if auto_end and "end" in reader.fieldnames:
            end_col = "end"
        for col in (schema.a_col, schema.b_col, schema.start_col):
            if col not in reader.fieldnames:
                raise TraceFormatError(f"{path}: missing column {col!r}")
        if end_col is not None and end_col not in reader.fieldnames:
            raise TraceFormatError(f"{path}: missing column {end_col!r}")
        for lineno, row in enumerate(reader, start=2):
            try:
                a = int(row[schema.a_col])
                b = int(row[schema.b_col])
                start = int(row[schema.start_col])
                end = int(row[end_col]) if end_col is not None else None
            except (TypeError, ValueError) as exc:
                raise TraceFormatError(f"{path}:{lineno}: malformed row: {exc}") from None
            if end is not None and end < start:
                raise TraceFormatError(f"{path}:{lineno}: end {end} precedes start {start}")
            if a == b:
                self_contacts += 1
                continue
            if a > b:
                a, b = b, a
            key = (a, b, start, end)
            if key in seen:
                duplicates += 1
                continue
            seen.add(key)
            rows.append(key)

    report = IngestReport(self_contacts=self_contacts, duplicates=duplicates)
    if not rows:
        return Trace.from_arrays(np.empty(0, np.int64), np.empty(0, np.int64),
                                 np.empty(0, np.int64), node_count=0, epoch=epoch, report=report)
    raw_a = np.array([r[0] for r in rows], np.int64)
    raw_b = np.array([r[1] for r in rows], np.int64)
    start = np.array([r[2] for r in rows], np.int64)
    has_end = rows[0][3] is not None
    end = np.array([r[3] for r in rows], np.int64) if has_end else None

    original = np.unique(np.concatenate([raw_a, raw_b]))
    dense = {int(o): i for i, o in enumerate(original)}
    a = np.array([dense[int(x)] for x in raw_a], np.int64)
    b = np.array([dense[int(x)] for x in raw_b], np.int64)
    return Trace.from_arrays(a, b, start, end, node_count=original.size,
                             epoch=epoch, original_ids=original, report=report)
