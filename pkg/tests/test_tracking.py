"""Group meeting detection, timeline tracking, recent-group queries."""

import pytest
from hypothesis import given, strategies as st

from groupsnet.slicing import WindowGraph
from groupsnet.tracking import (
    GroupMeeting,
    GroupTimeline,
    detect_meetings,
    recent_groups,
    similarity,
    track,
)

members = st.frozensets(st.integers(0, 9), min_size=1, max_size=6)


def meeting(window, *nodes):
    return GroupMeeting(window, frozenset(nodes))


class TestSimilarity:
    def test_identity(self):
        assert similarity({1, 2, 3}, {1, 2, 3}) == 1.0

    def test_disjoint(self):
        assert similarity({1, 2, 3}, {4, 5, 6}) == 0.0

    def test_partial_overlap(self):
        # |{c,d}| / |{a,b,c,d,e}| with letters as ints
        assert similarity({1, 2, 3, 4}, {3, 4, 5}) == pytest.approx(0.4, abs=0)

    def test_empty_group_rejected(self):
        with pytest.raises(ValueError):
            similarity(set(), {1})

    @given(members, members)
    def test_symmetric_and_bounded(self, g1, g2):
        r = similarity(g1, g2)
        assert r == similarity(g2, g1)
        assert 0.0 <= r <= 1.0

    @given(members)
    def test_self_similarity_is_one(self, g):
        assert similarity(g, g) == 1.0


class TestDetect:
    def test_triangle_window_is_one_meeting(self):
        g = WindowGraph(4, {(1, 2): 2.0, (2, 3): 2.0, (1, 3): 2.0})
        (per_window,) = detect_meetings([g])
        assert per_window == [meeting(4, 1, 2, 3)]

    def test_path_window_has_no_meetings(self):
        g = WindowGraph(0, {(1, 2): 2.0, (2, 3): 2.0})
        assert detect_meetings([g]) == [[]]

    def test_adjacent_triangles_merge_to_one_meeting(self):
        g = WindowGraph(0, {(1, 2): 2, (2, 3): 2, (1, 3): 2, (2, 4): 2, (3, 4): 2})
        (per_window,) = detect_meetings([g])
        assert per_window == [meeting(0, 1, 2, 3, 4)]


class TestTrack:
    def test_repeat_meeting_extends_timeline(self):
        tls = track([meeting(0, 1, 2, 3), meeting(1, 1, 2, 3)])
        assert len(tls) == 1
        assert tls[0].n_meetings == 2

    def test_exactly_half_similarity_splits(self):
        # {a,b,c} vs {a,b,d}: 2/4 = 0.5, threshold is strict
        tls = track([meeting(0, 1, 2, 3), meeting(1, 1, 2, 4)])
        assert len(tls) == 2

    def test_point_six_similarity_merges(self):
        # {a,b,c,d} vs {a,b,c,e}: 3/5 = 0.6 > 0.5
        tls = track([meeting(0, 1, 2, 3, 4), meeting(1, 1, 2, 3, 5)])
        assert len(tls) == 1
        assert tls[0].current_members == frozenset({1, 2, 3, 5})

    def test_tie_goes_to_oldest_timeline(self):
        # two identical-member timelines started in different windows; the
        # next meeting matches both at rho=1 and must extend timeline 0
        a = meeting(0, 1, 2, 3)
        tls = track([a, meeting(0, 4, 5, 6), meeting(1, 1, 2, 3)])
        by_id = {t.group_id: t for t in tls}
        assert by_id[0].n_meetings == 2

    def test_one_meeting_per_timeline_per_window(self):
        # both window-1 meetings match timeline 0; only one may join it
        tls = track([meeting(0, 1, 2, 3, 4),
                     meeting(1, 1, 2, 3), meeting(1, 2, 3, 4)])
        assert len(tls) == 2
        assert all(len({m.window_index for m in t.meetings}) == t.n_meetings
                   for t in tls)

    def test_membership_drift_follows_latest_meeting(self):
        tls = track([meeting(0, 1, 2, 3, 4), meeting(1, 1, 2, 3, 5),
                     meeting(2, 1, 2, 5, 6)])
        assert len(tls) == 1
        assert tls[0].current_members == frozenset({1, 2, 5, 6})

    def test_accepts_nested_stream(self):
        nested = [[meeting(0, 1, 2, 3)], [], [meeting(2, 1, 2, 3)]]
        tls = track(nested)
        assert len(tls) == 1
        assert tls[0].n_meetings == 2

    def test_out_of_order_windows_rejected(self):
        with pytest.raises(ValueError):
            track([meeting(3, 1, 2, 3), meeting(1, 1, 2, 3)])

    def test_group_ids_follow_first_appearance(self):
        tls = track([meeting(0, 1, 2, 3), meeting(1, 4, 5, 6)])
        assert [t.group_id for t in tls] == [0, 1]

    def test_skipping_windows_still_reattaches(self):
        tls = track([meeting(0, 1, 2, 3), meeting(500, 1, 2, 3)])
        assert len(tls) == 1


class TestRecentGroups:
    def test_daily_meetings_all_counted(self):
        ms = [meeting(24 * d, 1, 2, 3) for d in range(21)]
        (tl,) = track(ms)
        now = 21 * 86400
        (rg,) = recent_groups([tl], now=now, lookback=21 * 86400)
        assert rg.meeting_count == 21

    def test_stale_timeline_excluded(self):
        (tl,) = track([meeting(0, 1, 2, 3)])
        assert recent_groups([tl], now=100 * 86400, lookback=86400) == []

    def test_lookback_covering_one_meeting(self):
        ms = [meeting(0, 1, 2, 3), meeting(24, 1, 2, 3)]
        (tl,) = track(ms)
        # lookback of one hour past the second meeting's midpoint
        (rg,) = recent_groups([tl], now=25 * 3600, lookback=3600)
        assert rg.meeting_count == 1

    def test_future_meetings_invisible(self):
        ms = [meeting(0, 1, 2, 3), meeting(48, 1, 2, 3)]
        (tl,) = track(ms)
        (rg,) = recent_groups([tl], now=3600, lookback=86400)
        assert rg.meeting_count == 1

    def test_members_are_latest_in_interval(self):
        ms = [meeting(0, 1, 2, 3, 4), meeting(5, 1, 2, 3, 5)]
        (tl,) = track(ms)
        (rg,) = recent_groups([tl], now=10 * 3600, lookback=86400)
        assert rg.members == frozenset({1, 2, 3, 5})

    def test_lookback_must_be_positive(self):
        with pytest.raises(ValueError):
            recent_groups([], now=0, lookback=0)
