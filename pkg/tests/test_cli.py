"""End-to-end runs of every CLI subcommand through main()."""

import json

import pytest

from groupsnet.cli import main

QUIET_SYNTH = """\
node_count = 10
group_count = 1
group_size_range = 3-3
daily_meeting_prob = 1.0
meeting_duration = 1800
jitter = 0
noise_contact_rate = 0.0
horizon_days = 7
seed = 42
"""


@pytest.fixture()
def synth_cfg(tmp_path):
    p = tmp_path / "synth.cfg"
    p.write_text(QUIET_SYNTH)
    return p


@pytest.fixture()
def trace_csv(tmp_path):
    p = tmp_path / "contacts.csv"
    rows = ["a,b,start"]
    for day in range(5):
        t = day * 86400
        rows += [f"0,1,{t}", f"1,2,{t + 60}", f"0,2,{t + 120}", f"3,4,{t + 500}"]
    p.write_text("\n".join(rows) + "\n")
    return p


class TestIngest:
    def test_writes_canonical_trace_and_summary(self, tmp_path, trace_csv, capsys):
        out = tmp_path / "out"
        assert main(["ingest", "--trace", str(trace_csv), "--out", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["node_count"] == 5
        assert summary["event_count"] == 20
        assert summary["dropped_duplicates"] == 0
        assert (out / "trace.csv").exists()
        assert json.loads(capsys.readouterr().out)["node_count"] == 5

    def test_missing_column_fails_cleanly(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,start\n0,5\n")
        assert main(["ingest", "--trace", str(bad), "--out", str(tmp_path / "o")]) == 1
        assert "error:" in capsys.readouterr().err

    def test_interval_trace_reports_duration_mode(self, tmp_path):
        src = tmp_path / "iv.csv"
        src.write_text("a,b,start,end\n0,1,10,400\n1,2,600,900\n")
        out = tmp_path / "out"
        assert main(["ingest", "--trace", str(src), "--out", str(out)]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["duration_mode"] == "interval"


class TestSynth:
    def test_manifest_carries_config_and_digest(self, tmp_path, synth_cfg):
        out = tmp_path / "out"
        assert main(["synth", "--synth-config", str(synth_cfg), "--out", str(out)]) == 0
        man = json.loads((out / "manifest.json").read_text())
        assert man["config"]["node_count"] == 10
        assert man["config"]["seed"] == 42
        assert len(man["trace_sha256"]) == 64

    def test_seed_override(self, tmp_path, synth_cfg):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        main(["synth", "--synth-config", str(synth_cfg), "--out", str(out1)])
        main(["synth", "--synth-config", str(synth_cfg), "--seed", "7", "--out", str(out2)])
        m1 = json.loads((out1 / "manifest.json").read_text())
        m2 = json.loads((out2 / "manifest.json").read_text())
        assert m1["config"]["seed"] == 42 and m2["config"]["seed"] == 7


class TestGroups:
    def test_daily_group_yields_one_timeline(self, tmp_path, synth_cfg):
        out = tmp_path / "out"
        assert main(["groups", "--synth-config", str(synth_cfg), "--out", str(out)]) == 0
        timelines = json.loads((out / "timelines.json").read_text())
        assert len(timelines) == 1
        assert len(timelines[0]["meetings"]) == 7
        fits = (out / "fits.csv").read_text().splitlines()
        assert fits[0] == "group_id,lambda,r2,n"
        assert len(fits) == 2
        pdf = (out / "remeet_pdf.csv").read_text().splitlines()
        assert pdf[0] == "bin_start,probability"

    def test_slicing_knobs_recorded_in_manifest(self, tmp_path, synth_cfg):
        out = tmp_path / "out"
        main(["groups", "--synth-config", str(synth_cfg), "--tw", "7200",
              "--wth", "1", "--k", "4", "--out", str(out)])
        man = json.loads((out / "manifest.json").read_text())
        assert (man["tw"], man["w_th"], man["k"]) == (7200, 1.0, 4)

    def test_empty_trace_is_fine(self, tmp_path, capsys):
        src = tmp_path / "empty.csv"
        src.write_text("a,b,start\n")
        out = tmp_path / "out"
        assert main(["groups", "--trace", str(src), "--out", str(out)]) == 0
        assert json.loads((out / "timelines.json").read_text()) == []
        assert "0 group timelines" in capsys.readouterr().out


class TestRoute:
    def test_same_group_pair_routes_with_certainty(self, tmp_path, synth_cfg, capsys):
        # seed 42 plants the single group on nodes {0, 6, 9}
        assert main(["route", "--synth-config", str(synth_cfg),
                     "--origin", "0", "--dest", "6"]) == 0
        obj = json.loads(capsys.readouterr().out)["route"]
        assert obj is not None
        assert obj["probability"] == 1.0
        assert len(obj["groups"]) == 1
        assert set(obj["members"][str(obj["groups"][0])]) == {0, 6, 9}

    def test_groupless_origin_reports_no_route(self, tmp_path, synth_cfg, capsys):
        out = tmp_path / "r"
        assert main(["route", "--synth-config", str(synth_cfg),
                     "--origin", "7", "--dest", "8", "--out", str(out)]) == 0
        obj = json.loads((out / "route.json").read_text())
        assert obj == {"route": None}


class TestSimulate:
    ARGS = ["--ttl-hours", "24", "--lookback-days", "5", "--messages", "6",
            "--seeds", "2", "--jobs", "1"]

    def test_outputs_and_rerun_identical(self, tmp_path, synth_cfg, capsys):
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        for out in (out1, out2):
            code = main(["simulate", "--synth-config", str(synth_cfg),
                         *self.ARGS, "--out", str(out)])
            assert code == 0
        names = ["delivery_ratio.csv", "transmissions.csv", "benefit_cost.csv"]
        for name in names:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
        header = (out1 / "delivery_ratio.csv").read_text().splitlines()[0]
        assert header == "t_hours,mean,ci_low,ci_high,policy"
        man = json.loads((out1 / "manifest.json").read_text())
        assert man["experiment"]["n_messages"] == 6
        printed = json.loads(capsys.readouterr().out.splitlines()[-1])
        assert set(printed["delivery_ratio_at_ttl"]) == {"groupsnet", "bubble", "flooding"}

    def test_policy_subset(self, tmp_path, synth_cfg):
        out = tmp_path / "r"
        main(["simulate", "--synth-config", str(synth_cfg), *self.ARGS,
              "--policies", "flooding", "--out", str(out)])
        rows = (out / "delivery_ratio.csv").read_text().splitlines()[1:]
        assert rows and all(r.endswith(",flooding") for r in rows)

    def test_unknown_policy_rejected(self, tmp_path, synth_cfg, capsys):
        code = main(["simulate", "--synth-config", str(synth_cfg), *self.ARGS,
                     "--policies", "carrierpigeon", "--out", str(tmp_path / "r")])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_sizes_flag_adds_scaling_table(self, tmp_path, synth_cfg):
        out = tmp_path / "r"
        main(["simulate", "--synth-config", str(synth_cfg), *self.ARGS,
              "--policies", "flooding", "--sizes", "6,8", "--out", str(out)])
        lines = (out / "scaling.csv").read_text().splitlines()
        assert lines[0].startswith("size,policy,")
        assert [l.split(",")[0] for l in lines[1:]] == ["6", "8"]


class TestSubset:
    def test_writes_one_trace_per_size(self, tmp_path, trace_csv):
        out = tmp_path / "out"
        assert main(["subset", "--trace", str(trace_csv), "--sizes", "2,3",
                     "--out", str(out)]) == 0
        assert (out / "trace_2.csv").exists() and (out / "trace_3.csv").exists()
        man = json.loads((out / "manifest.json").read_text())
        assert set(man["subset_sha256"]) == {"2", "3"}

    def test_oversized_target_fails(self, tmp_path, trace_csv, capsys):
        code = main(["subset", "--trace", str(trace_csv), "--sizes", "99",
                     "--out", str(tmp_path / "o")])
        assert code == 1
        assert "error:" in capsys.readouterr().err
