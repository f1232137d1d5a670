import json

import numpy as np
import pytest

from bband.cli import main
from bband.video_io import read_y4m, write_y4m
from bband.video_io import LumaFrame, VideoStream


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def fixture_y4m(tmp_path):
    """A 3-frame q=16 banded clip on disk."""
    path = tmp_path / "banded.y4m"
    code = run("generate", "--out", path, "--q", "16", "--frame-count", "3")
    assert code == 0
    return path


def load_scores(out_dir):
    with open(out_dir / "scores.json", encoding="utf-8") as handle:
        return json.load(handle)


class TestGenerate:
    def test_output_round_trips(self, tmp_path):
        path = tmp_path / "fix.y4m"
        assert run("generate", "--out", path, "--q", "16", "--width", "256",
                   "--height", "128") == 0
        stream = read_y4m(path)
        assert stream.frame_count == 1
        assert stream.frames[0].width == 256

    def test_invalid_step_exits_3(self, tmp_path):
        assert run("generate", "--out", tmp_path / "x.y4m", "--q", "0") == 3

    def test_seeded_dither_reproducible(self, tmp_path):
        first = tmp_path / "a.y4m"
        second = tmp_path / "b.y4m"
        for path in (first, second):
            assert run("generate", "--out", path, "--q", "16",
                       "--dither", "1", "--seed", "7") == 0
        assert first.read_bytes() == second.read_bytes()


class TestAnalyze:
    def test_writes_scores_json(self, fixture_y4m, tmp_path):
        out = tmp_path / "run"
        assert run("analyze", "--input", fixture_y4m, "--out", out) == 0
        payload = load_scores(out)
        assert payload["video_score"] > 0.0
        assert len(payload["frames"]) == 3
        assert payload["config"]["t2"] == 12.0
        assert payload["version"]

    def test_constant_gray_scores_zero(self, tmp_path):
        data = np.full((64, 64), 128, dtype=np.uint8)
        frames = [LumaFrame(width=64, height=64, data=data, frame_index=i)
                  for i in range(2)]
        clip = tmp_path / "gray.y4m"
        write_y4m(VideoStream(frames=frames, frame_rate=None), clip)
        out = tmp_path / "run"
        assert run("analyze", "--input", clip, "--out", out) == 0
        assert load_scores(out)["video_score"] == 0.0

    def test_deterministic_modulo_timestamp(self, fixture_y4m, tmp_path):
        first, second = tmp_path / "r1", tmp_path / "r2"
        for out in (first, second):
            assert run("analyze", "--input", fixture_y4m, "--out", out,
                       "--workers", "2") == 0
        a, b = load_scores(first), load_scores(second)
        a.pop("timestamp")
        b.pop("timestamp")
        assert a == b

    def test_scores_identical_across_worker_counts(self, fixture_y4m, tmp_path):
        first, second = tmp_path / "w1", tmp_path / "w4"
        assert run("analyze", "--input", fixture_y4m, "--out", first,
                   "--workers", "1") == 0
        assert run("analyze", "--input", fixture_y4m, "--out", second,
                   "--workers", "4") == 0
        a, b = load_scores(first), load_scores(second)
        assert a["video_score"] == b["video_score"]
        assert a["frames"] == b["frames"]

    def test_emit_flags_write_expected_files(self, fixture_y4m, tmp_path):
        out = tmp_path / "run"
        assert run("analyze", "--input", fixture_y4m, "--out", out,
                   "--emit-bvm", "--emit-bem", "--emit-csv") == 0
        assert len(list(out.glob("bvm_*.pgm"))) == 3
        assert len(list(out.glob("bvm_*.pgm.json"))) == 3
        assert len(list(out.glob("bem_*.pgm"))) == 3
        assert (out / "frames.csv").exists()
        assert (out / "frames.png").exists()
        header = (out / "frames.csv").read_text().splitlines()[0]
        assert header == "frame_index,si,ti,raw_pooled,score"

    def test_frame_range_selection(self, fixture_y4m, tmp_path):
        out = tmp_path / "run"
        assert run("analyze", "--input", fixture_y4m, "--out", out,
                   "--frames", "1..2") == 0
        payload = load_scores(out)
        assert [f["frame_index"] for f in payload["frames"]] == [1, 2]

    def test_set_overrides_echoed(self, fixture_y4m, tmp_path):
        out = tmp_path / "run"
        assert run("analyze", "--input", fixture_y4m, "--out", out,
                   "--set", "masking.gamma=4", "--set", "t2=11") == 0
        payload = load_scores(out)
        assert payload["config"]["masking.gamma"] == 4.0
        assert payload["config"]["t2"] == 11.0

    def test_missing_input_exits_2(self, tmp_path):
        assert run("analyze", "--input", tmp_path / "nope.y4m",
                   "--out", tmp_path) == 2

    def test_not_a_video_exits_2(self, tmp_path):
        junk = tmp_path / "junk.y4m"
        junk.write_bytes(b"definitely not yuv4mpeg")
        assert run("analyze", "--input", junk, "--out", tmp_path) == 2

    def test_bad_override_exits_3(self, fixture_y4m, tmp_path):
        assert run("analyze", "--input", fixture_y4m, "--out", tmp_path,
                   "--set", "no_such=1") == 3
        assert run("analyze", "--input", fixture_y4m, "--out", tmp_path,
                   "--set", "guided_radius=0") == 3

    def test_bad_frame_range_exits_3(self, fixture_y4m, tmp_path):
        assert run("analyze", "--input", fixture_y4m, "--out", tmp_path,
                   "--frames", "9..12") == 3

    def test_raw_format_requires_geometry(self, tmp_path):
        raw = tmp_path / "clip.yuv"
        raw.write_bytes(bytes(64 * 64 * 3 // 2))
        assert run("analyze", "--input", raw, "--format", "raw",
                   "--out", tmp_path) == 3
        assert run("analyze", "--input", raw, "--format", "raw",
                   "--width", "64", "--height", "64",
                   "--out", tmp_path / "ok") == 0

    def test_config_file_applied(self, fixture_y4m, tmp_path):
        conf = tmp_path / "bband.conf"
        conf.write_text("min_edge_length = 200\n")
        out = tmp_path / "run"
        assert run("analyze", "--input", fixture_y4m, "--out", out,
                   "--config", conf) == 0
        payload = load_scores(out)
        assert payload["config"]["min_edge_length"] == 200
        assert payload["video_score"] == 0.0


class TestEval:
    def write_csv(self, path, rows):
        path.write_text("item_id,predicted,mos\n" +
                        "".join(f"c{i},{p},{m}\n" for i, (p, m) in enumerate(rows)))

    def test_monotone_table_reports_perfect_rank(self, tmp_path):
        csv_path = tmp_path / "scores.csv"
        self.write_csv(csv_path, [(0.2, 10), (0.5, 22), (0.9, 38),
                                  (1.3, 55), (1.7, 68), (2.2, 80)])
        out = tmp_path / "eval"
        assert run("eval", "--input", csv_path, "--out", out) == 0
        with open(out / "eval_report.json", encoding="utf-8") as handle:
            report = json.load(handle)
        assert report["srcc"] == pytest.approx(1.0)
        assert set(report["logistic_params"]) == {"beta1", "beta2", "beta3", "beta4"}
        assert (out / "eval_scatter.png").exists()

    def test_single_row_exits_3(self, tmp_path):
        csv_path = tmp_path / "scores.csv"
        self.write_csv(csv_path, [(1.0, 50)])
        assert run("eval", "--input", csv_path, "--out", tmp_path) == 3

    def test_missing_column_exits_3(self, tmp_path):
        csv_path = tmp_path / "scores.csv"
        csv_path.write_text("id,value\n1,2\n")
        assert run("eval", "--input", csv_path, "--out", tmp_path) == 3

    def test_missing_file_exits_2(self, tmp_path):
        assert run("eval", "--input", tmp_path / "absent.csv",
                   "--out", tmp_path) == 2
