"""Trace model and CSV ingestion."""

import numpy as np
import pytest

from groupsnet.trace import (
    INSTANTANEOUS,
    INTERVAL,
    ContactEvent,
    CsvSchema,
    Trace,
    TraceFormatError,
    ingest_csv,
)


def write(tmp_path, text, name="trace.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_ingest_canonicalizes_endpoints_and_remaps_ids(tmp_path):
    p = write(tmp_path, "a,b,start\n7,3,100\n3,7,200\n")
    tr = ingest_csv(p)
    assert tr.n_events == 2
    assert tr.node_count == 2
    # original ids 3,7 become dense 0,1 and every event reads (0,1)
    assert list(tr.a) == [0, 0] and list(tr.b) == [1, 1]
    assert list(tr.original_ids) == [3, 7]
    assert tr.duration_mode == INSTANTANEOUS


def test_ingest_skips_self_contacts_with_count(tmp_path):
    p = write(tmp_path, "a,b,start\n5,5,100\n1,2,50\n")
    tr = ingest_csv(p)
    assert tr.n_events == 1
    assert tr.report.self_contacts == 1


def test_ingest_drops_exact_duplicates(tmp_path):
    p = write(tmp_path, "a,b,start\n1,2,100\n2,1,100\n1,2,100\n")
    tr = ingest_csv(p)
    assert tr.n_events == 1
    assert tr.report.duplicates == 2


def test_interval_rows_sort_by_start(tmp_path):
    p = write(tmp_path, "a,b,start,end\n1,2,100,400\n2,3,50,60\n")
    tr = ingest_csv(p)
    assert tr.duration_mode == INTERVAL
    first, second = tr.events
    assert (first.a, first.b, first.start) == (1, 2, 50)
    assert (second.a, second.b, second.start) == (0, 1, 100)


def test_missing_column_raises_with_name(tmp_path):
    p = write(tmp_path, "x,y,z\n1,2,3\n")
    with pytest.raises(TraceFormatError, match="missing column 'a'"):
        ingest_csv(p)


def test_malformed_row_raises_with_line_number(tmp_path):
    p = write(tmp_path, "a,b,start\n1,2,100\n1,two,200\n")
    with pytest.raises(TraceFormatError, match=":3:"):
        ingest_csv(p)


def test_end_before_start_rejected(tmp_path):
    p = write(tmp_path, "a,b,start,end\n1,2,100,50\n")
    with pytest.raises(TraceFormatError, match="precedes"):
        ingest_csv(p)


def test_custom_schema_columns(tmp_path):
    p = write(tmp_path, "u,v,t\n4,9,10\n", name="alt.csv")
    tr = ingest_csv(p, schema=CsvSchema(a_col="u", b_col="v", start_col="t"))
    assert tr.n_events == 1


def test_csv_round_trip_preserves_content(tmp_path):
    tr = Trace.from_events([(0, 1, 100), (1, 2, 50), (0, 2, 100)], node_count=3)
    out = tmp_path / "rt.csv"
    tr.write_csv(out)
    back = ingest_csv(out)
    assert back == tr
    assert back.sha256() == tr.sha256()


def test_restrict_time_half_open_keeps_node_ids():
    tr = Trace.from_events([(0, 1, 10), (1, 2, 20), (0, 2, 30)], node_count=5)
    sub = tr.restrict_time(10, 30)
    assert sub.n_events == 2
    assert sub.node_count == 5  # ids stable so carriers stay comparable


def test_restrict_nodes_renumbers_dense():
    tr = Trace.from_events([(0, 1, 10), (1, 4, 20), (2, 3, 30)], node_count=5)
    sub = tr.restrict_nodes([1, 4])
    assert sub.n_events == 1
    assert sub.node_count == 2
    assert (int(sub.a[0]), int(sub.b[0])) == (0, 1)
    assert list(sub.original_ids) == [1, 4]


def test_restrict_nodes_composes_original_ids(tmp_path):
    p = write(tmp_path, "a,b,start\n10,20,1\n20,30,2\n")
    tr = ingest_csv(p)
    sub = tr.restrict_nodes([0, 1])  # dense ids for originals 10, 20
    assert list(sub.original_ids) == [10, 20]


def test_self_contact_in_arrays_rejected():
    with pytest.raises(ValueError, match="self-contact"):
        Trace.from_events([(3, 3, 10)])


def test_span_covers_interval_ends():
    tr = Trace.from_events([(0, 1, 10, 500), (1, 2, 20, 30)], node_count=3)
    assert tr.span == 500


def test_equality_ignores_report_and_original_ids(tmp_path):
    p = write(tmp_path, "a,b,start\n1,2,100\n3,3,5\n")
    ingested = ingest_csv(p)  # report records the dropped self-contact
    built = Trace.from_events([(0, 1, 100)], node_count=2)
    assert ingested == built


def test_arrays_are_frozen():
    tr = Trace.from_events([(0, 1, 10)])
    with pytest.raises(ValueError):
        tr.a[0] = 5


def test_empty_trace():
    tr = Trace.from_events([])
    assert tr.n_events == 0
    assert tr.span == 0
    assert tr.node_count == 0
